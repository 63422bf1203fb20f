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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bellsim/common.hpp"

namespace bellsim {

/// Occupation-number basis of n modes truncated at a total photon number.
///
/// Vectors are ordered by total photon number, then lexicographically, so
/// that every total-photon shell is a contiguous index range. Lookup uses the
/// combinatorial rank of a vector and never allocates.
class FockBasis {
 public:
  FockBasis(int mode_count, int cutoff, std::size_t max_dimension = NumericalPolicy{}.max_dimension);

  /// Number of occupation vectors of `mode_count` modes with total <= cutoff.
  /// Returns nullopt when the count does not fit in 64 bits.
  static std::optional<std::uint64_t> dimension(int mode_count, int cutoff);

  int mode_count() const noexcept { return modes_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const int> occupation(std::size_t index) const {
    return {occupations_.data() + index * static_cast<std::size_t>(modes_), static_cast<std::size_t>(modes_)};
  }
  int total(std::size_t index) const { return totals_[index]; }

  /// [begin, end) index range of the shell with `photons` photons.
  std::size_t shell_begin(int photons) const { return shell_offsets_[static_cast<std::size_t>(photons)]; }
  std::size_t shell_end(int photons) const { return shell_offsets_[static_cast<std::size_t>(photons) + 1]; }

  /// Index of an occupation vector, or nullopt if it lies outside the basis.
  std::optional<std::size_t> find(std::span<const int> occupation) const;
  /// As find(), but throws std::out_of_range.
  std::size_t index_of(std::span<const int> occupation) const;

  /// Indices whose occupation is zero on every mode in `modes`.
  std::vector<std::uint32_t> vacuum_indices(std::span<const int> modes) const;

  bool operator==(const FockBasis& other) const noexcept {
    return modes_ == other.modes_ && cutoff_ == other.cutoff_;
  }

 private:
  /// Number of m-mode vectors with total exactly r.
  std::uint64_t exact_count(int m, int r) const;

  int modes_;
  int cutoff_;
  std::size_t size_;
  std::vector<int> occupations_;
  std::vector<int> totals_;
  std::vector<std::size_t> shell_offsets_;
  // exact_counts_[m * (cutoff + 1) + r]
  std::vector<std::uint64_t> exact_counts_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr make_basis(int mode_count, int cutoff, const NumericalPolicy& policy = {});

/// All occupation vectors in basis order.
std::vector<std::vector<int>> enumerate_basis(int mode_count, int cutoff, const NumericalPolicy& policy = {});

}  // namespace bellsim
