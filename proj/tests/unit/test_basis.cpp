/*
 * Copyright 2026 The bellsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <array>
#include <vector>

#include "bellsim/fock/basis.hpp"

using namespace bellsim;

TEST_SUITE("basis") {

TEST_CASE("dimension is the binomial count") {
  CHECK(FockBasis::dimension(1, 7).value() == 8);
  CHECK(FockBasis::dimension(4, 2).value() == 15);
  CHECK(FockBasis::dimension(4, 16).value() == 4845);
  CHECK(FockBasis::dimension(4, 20).value() == 10626);
  CHECK_FALSE(FockBasis::dimension(200, 200).has_value());
  CHECK(make_basis(4, 20)->size() == 10626);
}

TEST_CASE("graded lexicographic order") {
  const auto all = enumerate_basis(2, 2);
  const std::vector<std::vector<int>> expected{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  CHECK(all == expected);
  const FockBasis b(3, 3);
  for (int n = 0; n <= 3; ++n) {
    for (std::size_t i = b.shell_begin(n); i < b.shell_end(n); ++i) {
      CHECK(b.total(i) == n);
    }
  }
}

TEST_CASE("index round trip") {
  const FockBasis b(4, 6);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(b.index_of(b.occupation(i)) == i);
  }
  const std::array<int, 4> outside{3, 2, 1, 1};
  CHECK_FALSE(b.find(outside).has_value());
  CHECK_THROWS_AS(b.index_of(outside), std::out_of_range);
  const std::array<int, 3> wrong_length{0, 0, 0};
  CHECK_FALSE(b.find(wrong_length).has_value());
}

TEST_CASE("vacuum indices") {
  const FockBasis b(3, 2);
  const std::array<int, 2> modes{0, 2};
  const auto idx = b.vacuum_indices(modes);
  CHECK(idx.size() == 3);
  for (auto i : idx) {
    CHECK(b.occupation(i)[0] == 0);
    CHECK(b.occupation(i)[2] == 0);
  }
  const std::array<int, 1> bad{3};
  CHECK_THROWS_AS(b.vacuum_indices(bad), std::out_of_range);
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(FockBasis(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(FockBasis(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(FockBasis(8, 30, 1000), DimensionError);
  CHECK(FockBasis(2, 3) == FockBasis(2, 3));
}

}
