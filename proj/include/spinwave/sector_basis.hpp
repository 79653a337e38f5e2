// Copyright 2026 The spinwave Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINWAVE_SECTOR_BASIS_HPP
#define SPINWAVE_SECTOR_BASIS_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "spinwave/error.hpp"
#include "spinwave/lattice.hpp"

namespace spinwave {

/// Bit i set <=> vertex i belongs to the subset (spin up at i).
using Mask = std::uint64_t;
using Index = std::uint64_t;

namespace detail {

struct BinomialTable {
  std::array<std::array<Index, kMaxVertices + 1>, kMaxVertices + 1> c{};
  constexpr BinomialTable() {
    for (int n = 0; n <= kMaxVertices; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        Index a = c[n - 1][k - 1];
        Index b = k <= n - 1 ? c[n - 1][k] : 0;
        c[n][k] = a + b;  // largest entry C(64,32) < 2^61
      }
    }
  }
};

inline constexpr BinomialTable kBinomials{};
static_assert(kBinomials.c[64][32] == 1832624140942590534ULL);

}  // namespace detail

/// C(n,k); zero outside 0 <= k <= n. n is limited to the vertex cap.
constexpr Index binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > kMaxVertices) throw CapacityError("binomial: n exceeds " + std::to_string(kMaxVertices));
  return detail::kBinomials.c[n][k];
}

inline Mask low_bits(int v) { return v >= 64 ? ~Mask{0} : (Mask{1} << v) - 1; }

/// Next mask with the same popcount in increasing numeric order. Numeric order
/// on fixed-popcount masks is colex order on the subsets.
inline Mask next_same_popcount(Mask m) {
  Mask lowest = m & (~m + 1);
  Mask ripple = m + lowest;
  if (ripple == 0) return 0;  // overflow past bit 63
  Mask ones = ((ripple ^ m) >> 2) / lowest;
  return ripple | ones;
}

/// Scatter the low bits of `bits` onto the set positions of `positions`.
inline Mask deposit_bits(Mask bits, Mask positions) {
  Mask out = 0;
  for (Mask p = positions; p && bits; p &= p - 1, bits >>= 1)
    if (bits & 1) out |= p & (~p + 1);
  return out;
}

/// Colex rank: sum over sorted elements s_1 < ... < s_r of C(s_j, j).
inline Index rank(Mask subset, int r) {
  if (std::popcount(subset) != r)
    throw ValidationError("rank: subset has " + std::to_string(std::popcount(subset)) +
                          " elements, expected " + std::to_string(r));
  Index k = 0;
  int j = 1;
  for (Mask m = subset; m; m &= m - 1, ++j) k += binomial(std::countr_zero(m), j);
  return k;
}

inline Mask unrank(Index k, int v, int r) {
  if (v < 0 || v > kMaxVertices || r < 0 || r > v)
    throw ValidationError("unrank: invalid sector (v=" + std::to_string(v) +
                          ", r=" + std::to_string(r) + ")");
  if (k >= binomial(v, r))
    throw ValidationError("unrank: index " + std::to_string(k) + " out of range [0, " +
                          std::to_string(binomial(v, r)) + ")");
  Mask out = 0;
  int top = v;
  for (int j = r; j >= 1; --j) {
    int c = top - 1;
    while (binomial(c, j) > k) --c;
    out |= Mask{1} << c;
    k -= binomial(c, j);
    top = c;
  }
  return out;
}

/// Calls f(sub) for every s-element subset of `set`, in colex order of the
/// relative positions inside `set`.
template <class F>
void for_each_subset_of(Mask set, int s, F&& f) {
  const int n = std::popcount(set);
  if (s < 0 || s > n) return;
  if (s == 0) {
    f(Mask{0});
    return;
  }
  const Mask end = Mask{1} << n;  // n <= 64 only reachable for s == n == 64
  Mask rel = low_bits(s);
  while (true) {
    f(deposit_bits(rel, set));
    Mask next = next_same_popcount(rel);
    if (next == 0 || (n < 64 && next >= end)) break;
    rel = next;
  }
}

inline std::vector<Mask> enumerate_subsets_of(Mask set, int s) {
  if (s < 0 || s > std::popcount(set))
    throw ValidationError("enumerate_subsets_of: cardinality " + std::to_string(s) +
                          " exceeds subset size " + std::to_string(std::popcount(set)));
  std::vector<Mask> out;
  out.reserve(binomial(std::popcount(set), s));
  for_each_subset_of(set, s, [&](Mask m) { out.push_back(m); });
  return out;
}

/// The r spin-wave sector over v sites: subsets of cardinality r indexed by
/// colex rank.
class SectorBasis {
 public:
  SectorBasis(int v, int r) : v_(v), r_(r) {
    if (v < 0 || v > kMaxVertices) throw CapacityError("sector: v must lie in [0, 64]");
    if (r < 0 || r > v)
      throw ValidationError("sector: r=" + std::to_string(r) + " outside [0, " +
                            std::to_string(v) + "]");
    dim_ = binomial(v, r);
  }

  int num_vertices() const { return v_; }
  int sector() const { return r_; }
  Index dim() const { return dim_; }

  Index index_of(Mask s) const { return rank(s, r_); }
  Mask state(Index k) const { return unrank(k, v_, r_); }

  /// Visits (index, mask) pairs in rank order without unranking each one.
  template <class F>
  void for_each(F&& f) const {
    if (r_ == 0) {
      f(Index{0}, Mask{0});
      return;
    }
    Mask m = low_bits(r_);
    for (Index k = 0; k < dim_; ++k) {
      f(k, m);
      m = next_same_popcount(m);
    }
  }

  std::vector<Mask> states() const {
    std::vector<Mask> out;
    out.reserve(dim_);
    for_each([&](Index, Mask m) { out.push_back(m); });
    return out;
  }

 private:
  int v_;
  int r_;
  Index dim_ = 0;
};

}  // namespace spinwave

#endif  // SPINWAVE_SECTOR_BASIS_HPP
