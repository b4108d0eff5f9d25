// Copyright 2026 The cosched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosched {

using BsIndex = std::size_t;
using UeIndex = std::size_t;
using PrbIndex = std::size_t;

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Largest cluster a BsSet can describe.
inline constexpr std::size_t kMaxBs = 64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised when a decision breaks the muting/single-user linking constraint.
class FeasibilityError : public Error {
 public:
  FeasibilityError(BsIndex bs, PrbIndex prb)
      : Error("linking constraint violated at bs " + std::to_string(bs) +
              ", prb " + std::to_string(prb)),
        bs_(bs),
        prb_(prb) {}

  BsIndex bs() const noexcept { return bs_; }
  PrbIndex prb() const noexcept { return prb_; }

 private:
  BsIndex bs_;
  PrbIndex prb_;
};

// A set of base-station indices packed into a 64-bit mask.
class BsSet {
 public:
  constexpr BsSet() = default;
  constexpr explicit BsSet(std::uint64_t bits) : bits_(bits) {}

  static BsSet of(std::initializer_list<BsIndex> members) {
    BsSet s;
    for (auto m : members) s.insert(m);
    return s;
  }

  // {0, ..., count-1}
  static constexpr BsSet first(std::size_t count) {
    return BsSet(count >= 64 ? ~std::uint64_t{0}
                             : ((std::uint64_t{1} << count) - 1));
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool contains(BsIndex m) const noexcept {
    return m < 64 && ((bits_ >> m) & 1U) != 0;
  }
  constexpr void insert(BsIndex m) noexcept { bits_ |= std::uint64_t{1} << m; }
  constexpr void erase(BsIndex m) noexcept { bits_ &= ~(std::uint64_t{1} << m); }

  constexpr bool subset_of(BsSet other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool intersects(BsSet other) const noexcept {
    return (bits_ & other.bits_) != 0;
  }

  constexpr BsSet operator|(BsSet o) const noexcept { return BsSet(bits_ | o.bits_); }
  constexpr BsSet operator&(BsSet o) const noexcept { return BsSet(bits_ & o.bits_); }
  constexpr BsSet without(BsSet o) const noexcept { return BsSet(bits_ & ~o.bits_); }
  constexpr BsSet& operator|=(BsSet o) noexcept {
    bits_ |= o.bits_;
    return *this;
  }

  friend constexpr bool operator==(BsSet, BsSet) = default;

  std::vector<BsIndex> members() const {
    std::vector<BsIndex> out;
    out.reserve(size());
    for (auto b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<BsIndex>(std::countr_zero(b)));
    }
    return out;
  }

  // Ascending cardinality, then lexicographic on the sorted member list.
  static bool canonical_less(BsSet a, BsSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
  }

 private:
  std::uint64_t bits_ = 0;
};

inline std::string to_string(BsSet s) {
  std::string out = "{";
  bool first = true;
  for (auto m : s.members()) {
    if (!first) out += ",";
    out += std::to_string(m);
    first = false;
  }
  return out + "}";
}

}  // namespace cosched
