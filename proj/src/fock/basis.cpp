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

#include "bellsim/fock/basis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace bellsim {
namespace {

constexpr std::uint64_t kOverflow = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return (a > kOverflow - b) ? kOverflow : a + b;
}

// table[m][r] = number of m-part compositions (zeros allowed) of r, saturating.
std::vector<std::uint64_t> composition_table(int modes, int cutoff) {
  const auto width = static_cast<std::size_t>(cutoff) + 1;
  std::vector<std::uint64_t> table((static_cast<std::size_t>(modes) + 1) * width, 0);
  table[0] = 1;  // zero parts sum to zero in one way
  for (int m = 1; m <= modes; ++m) {
    std::uint64_t running = 0;
    for (int r = 0; r <= cutoff; ++r) {
      // C(m, r) = sum_{k<=r} C(m-1, k)
      running = sat_add(running, table[static_cast<std::size_t>(m - 1) * width + static_cast<std::size_t>(r)]);
      table[static_cast<std::size_t>(m) * width + static_cast<std::size_t>(r)] = running;
    }
  }
  return table;
}

}  // namespace

std::optional<std::uint64_t> FockBasis::dimension(int mode_count, int cutoff) {
  if (mode_count < 1 || cutoff < 0) {
    throw std::invalid_argument("dimension: mode_count >= 1 and cutoff >= 0 required");
  }
  // D(n, N) = number of (n+1)-part compositions of N (one slack part).
  const auto table = composition_table(mode_count + 1, cutoff);
  const auto width = static_cast<std::size_t>(cutoff) + 1;
  const std::uint64_t d = table[static_cast<std::size_t>(mode_count + 1) * width + static_cast<std::size_t>(cutoff)];
  if (d == kOverflow) {
    return std::nullopt;
  }
  return d;
}

FockBasis::FockBasis(int mode_count, int cutoff, std::size_t max_dimension)
    : modes_(mode_count), cutoff_(cutoff), size_(0) {
  if (mode_count < 1) {
    throw std::invalid_argument("FockBasis: mode_count must be >= 1");
  }
  if (cutoff < 0) {
    throw std::invalid_argument("FockBasis: cutoff must be >= 0");
  }
  const auto dim = dimension(mode_count, cutoff);
  if (!dim || *dim > max_dimension || *dim > std::numeric_limits<std::uint32_t>::max()) {
    throw DimensionError(fmt::format("FockBasis: {} modes with cutoff {} exceeds the maximum dimension {}",
                                     mode_count, cutoff, max_dimension));
  }
  size_ = static_cast<std::size_t>(*dim);
  exact_counts_ = composition_table(mode_count, cutoff);

  occupations_.reserve(size_ * static_cast<std::size_t>(modes_));
  totals_.reserve(size_);
  shell_offsets_.reserve(static_cast<std::size_t>(cutoff) + 2);

  std::vector<int> occ(static_cast<std::size_t>(modes_), 0);
  for (int total = 0; total <= cutoff; ++total) {
    shell_offsets_.push_back(totals_.size());
    // Lexicographically smallest composition: everything in the last mode.
    std::fill(occ.begin(), occ.end(), 0);
    occ.back() = total;
    while (true) {
      occupations_.insert(occupations_.end(), occ.begin(), occ.end());
      totals_.push_back(total);
      // Next composition in lex order: find the rightmost position i < last
      // that can grow, i.e. has something to its right to borrow from.
      int i = modes_ - 2;
      while (i >= 0) {
        int right = 0;
        for (int k = i + 1; k < modes_; ++k) {
          right += occ[static_cast<std::size_t>(k)];
        }
        if (right > 0) {
          occ[static_cast<std::size_t>(i)] += 1;
          for (int k = i + 1; k < modes_; ++k) {
            occ[static_cast<std::size_t>(k)] = 0;
          }
          occ.back() = right - 1;
          break;
        }
        --i;
      }
      if (i < 0) {
        break;
      }
    }
  }
  shell_offsets_.push_back(totals_.size());
  if (totals_.size() != size_) {
    throw Error("FockBasis: enumeration count mismatch");
  }
}

std::uint64_t FockBasis::exact_count(int m, int r) const {
  return exact_counts_[static_cast<std::size_t>(m) * (static_cast<std::size_t>(cutoff_) + 1) +
                       static_cast<std::size_t>(r)];
}

std::optional<std::size_t> FockBasis::find(std::span<const int> occupation) const {
  if (occupation.size() != static_cast<std::size_t>(modes_)) {
    return std::nullopt;
  }
  int total = 0;
  for (int n : occupation) {
    if (n < 0) {
      return std::nullopt;
    }
    total += n;
  }
  if (total > cutoff_) {
    return std::nullopt;
  }
  // Rank within the shell: vectors sharing a prefix and holding fewer photons
  // at position i come first. The last entry is fixed by the total.
  std::size_t rank = 0;
  int remaining = total;
  for (int i = 0; i + 1 < modes_; ++i) {
    const int n = occupation[static_cast<std::size_t>(i)];
    const int rest_modes = modes_ - i - 1;
    for (int k = 0; k < n; ++k) {
      rank += static_cast<std::size_t>(exact_count(rest_modes, remaining - k));
    }
    remaining -= n;
  }
  return shell_offsets_[static_cast<std::size_t>(total)] + rank;
}

std::size_t FockBasis::index_of(std::span<const int> occupation) const {
  if (auto idx = find(occupation)) {
    return *idx;
  }
  throw std::out_of_range("FockBasis: occupation vector outside the truncated basis");
}

std::vector<std::uint32_t> FockBasis::vacuum_indices(std::span<const int> modes) const {
  for (int m : modes) {
    if (m < 0 || m >= modes_) {
      throw std::out_of_range("vacuum_indices: mode index out of range");
    }
  }
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < size_; ++i) {
    const auto occ = occupation(i);
    bool empty = true;
    for (int m : modes) {
      if (occ[static_cast<std::size_t>(m)] != 0) {
        empty = false;
        break;
      }
    }
    if (empty) {
      out.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

BasisPtr make_basis(int mode_count, int cutoff, const NumericalPolicy& policy) {
  return std::make_shared<const FockBasis>(mode_count, cutoff, policy.max_dimension);
}

std::vector<std::vector<int>> enumerate_basis(int mode_count, int cutoff, const NumericalPolicy& policy) {
  const FockBasis basis(mode_count, cutoff, policy.max_dimension);
  std::vector<std::vector<int>> out;
  out.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto occ = basis.occupation(i);
    out.emplace_back(occ.begin(), occ.end());
  }
  return out;
}

}  // namespace bellsim
