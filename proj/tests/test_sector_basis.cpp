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

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"

#include "spinwave/sector_basis.hpp"

using namespace spinwave;

namespace {

Mask set_of(std::initializer_list<int> elems) {
  Mask m = 0;
  for (int e : elems) m |= Mask{1} << e;
  return m;
}

// Colex comparison on subsets: compare largest differing element.
bool colex_less(Mask a, Mask b) {
  const Mask diff = a ^ b;
  if (!diff) return false;
  return (b & (Mask{1} << (63 - std::countl_zero(diff)))) != 0;
}

}  // namespace

TEST_CASE("binomial table", "[sector_basis]") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(10, 4) == 210);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(64, 32) == 1832624140942590534ULL);
  for (int v = 0; v <= 20; ++v) {
    Index sum = 0;
    for (int r = 0; r <= v; ++r) sum += binomial(v, r);
    CHECK(sum == (Index{1} << v));
  }
}

TEST_CASE("colex rank and unrank examples", "[sector_basis]") {
  CHECK(rank(set_of({0, 1}), 2) == 0);
  CHECK(rank(set_of({1, 2}), 2) == 2);
  CHECK(rank(set_of({2, 3}), 2) == 5);
  CHECK(unrank(0, 4, 2) == set_of({0, 1}));
  CHECK(unrank(5, 4, 2) == set_of({2, 3}));
  CHECK(rank(0, 0) == 0);
  CHECK(unrank(0, 7, 0) == 0);

  CHECK_THROWS_AS(rank(set_of({0, 1, 2}), 2), ValidationError);
  CHECK_THROWS_AS(unrank(6, 4, 2), ValidationError);
  CHECK_THROWS_AS(unrank(0, 4, 5), ValidationError);
}

TEST_CASE("rank/unrank are inverse bijections for every sector with v <= 16", "[sector_basis][exhaustive]") {
  for (int v = 0; v <= 16; ++v) {
    for (int r = 0; r <= v; ++r) {
      const SectorBasis basis(v, r);
      Index expected = 0;
      Mask prev = 0;
      bool ok = true;
      basis.for_each([&](Index k, Mask m) {
        ok = ok && k == expected++ && std::popcount(m) == r && (m & ~low_bits(v)) == 0;
        ok = ok && rank(m, r) == k && unrank(k, v, r) == m;
        if (k > 0) ok = ok && colex_less(prev, m);
        prev = m;
      });
      INFO("v=" << v << " r=" << r);
      CHECK(ok);
      CHECK(expected == binomial(v, r));
    }
  }
}

TEST_CASE("all 20 three-subsets of six points round-trip", "[sector_basis]") {
  std::set<Mask> seen;
  for (Mask m = 0; m < 64; ++m) {
    if (std::popcount(m) != 3) continue;
    CHECK(unrank(rank(m, 3), 6, 3) == m);
    seen.insert(m);
  }
  CHECK(seen.size() == 20);
}

TEST_CASE("enumerate_subsets_of", "[sector_basis]") {
  CHECK(enumerate_subsets_of(set_of({0, 1, 2}), 2) ==
        std::vector<Mask>{set_of({0, 1}), set_of({0, 2}), set_of({1, 2})});
  CHECK(enumerate_subsets_of(set_of({0, 1}), 2) == std::vector<Mask>{set_of({0, 1})});
  CHECK(enumerate_subsets_of(set_of({3, 9}), 0) == std::vector<Mask>{0});
  CHECK_THROWS_AS(enumerate_subsets_of(set_of({0, 1}), 3), ValidationError);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Mask s = rng() & low_bits(20);
    const int n = std::popcount(s);
    const int k = n == 0 ? 0 : static_cast<int>(rng() % static_cast<unsigned>(n + 1));
    const auto subs = enumerate_subsets_of(s, k);
    CHECK(subs.size() == binomial(n, k));
    CHECK(std::set<Mask>(subs.begin(), subs.end()).size() == subs.size());
    CHECK(std::all_of(subs.begin(), subs.end(),
                      [&](Mask m) { return (m & ~s) == 0 && std::popcount(m) == k; }));
  }
}

TEST_CASE("64-site sectors stay within the index type", "[sector_basis]") {
  const SectorBasis full(64, 64);
  CHECK(full.dim() == 1);
  CHECK(full.state(0) == ~Mask{0});
  CHECK(rank(~Mask{0}, 64) == 0);
  const SectorBasis one(64, 1);
  CHECK(one.state(63) == Mask{1} << 63);
  CHECK_THROWS_AS(SectorBasis(65, 1), CapacityError);
}
