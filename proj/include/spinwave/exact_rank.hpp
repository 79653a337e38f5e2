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

#ifndef SPINWAVE_EXACT_RANK_HPP
#define SPINWAVE_EXACT_RANK_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spinwave/operators.hpp"

namespace spinwave {

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

// (x*p - y*q) / d, exact by the Bareiss minor property.
inline std::optional<std::int64_t> bareiss_update(std::int64_t x, std::int64_t p, std::int64_t y,
                                                  std::int64_t q, std::int64_t d) {
  const __int128 num = static_cast<__int128>(x) * p - static_cast<__int128>(y) * q;
  const __int128 out = num / d;
  if (out > INT64_MAX || out < INT64_MIN) return std::nullopt;
  return static_cast<std::int64_t>(out);
}

inline std::optional<BigInt> bareiss_update(const BigInt& x, const BigInt& p, const BigInt& y, const BigInt& q,
                                            const BigInt& d) {
  return BigInt((x * p - y * q) / d);
}

/// Fraction-free row echelon reduction; returns nullopt if Int overflows.
template <class Int>
std::optional<Index> bareiss_rank(std::vector<Int> a, Index rows, Index cols) {
  auto at = [&](Index i, Index j) -> Int& { return a[i * cols + j]; };
  Int prev = 1;
  Index rank = 0;
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index p = rank;
    while (p < rows && at(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != rank)
      for (Index j = c; j < cols; ++j) std::swap(at(p, j), at(rank, j));
    const Int pivot = at(rank, c);
    for (Index i = rank + 1; i < rows; ++i) {
      const Int lead = at(i, c);
      for (Index j = c + 1; j < cols; ++j) {
        auto next = bareiss_update(at(i, j), pivot, lead, at(rank, j), prev);
        if (!next) return std::nullopt;
        at(i, j) = std::move(*next);
      }
      at(i, c) = 0;
    }
    prev = pivot;
    ++rank;
  }
  return rank;
}

/// Rank over GF(p), p = 2^61 - 1. Never exceeds the rank over the rationals.
inline Index modular_rank(const std::vector<std::int64_t>& dense, Index rows, Index cols) {
  constexpr std::uint64_t p = (std::uint64_t{1} << 61) - 1;
  auto reduce = [](std::int64_t x) {
    const std::int64_t r = x % static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
  };
  auto mulmod = [](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
  };
  auto inverse = [&](std::uint64_t a) {
    std::uint64_t result = 1, e = p - 2;
    for (; e; e >>= 1, a = mulmod(a, a))
      if (e & 1) result = mulmod(result, a);
    return result;
  };
  std::vector<std::uint64_t> a(dense.size());
  for (std::size_t n = 0; n < dense.size(); ++n) a[n] = reduce(dense[n]);
  auto at = [&](Index i, Index j) -> std::uint64_t& { return a[i * cols + j]; };
  Index rank = 0;
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index piv = rank;
    while (piv < rows && at(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (Index j = c; j < cols; ++j) std::swap(at(piv, j), at(rank, j));
    const std::uint64_t inv = inverse(at(rank, c));
    for (Index i = rank + 1; i < rows; ++i) {
      if (at(i, c) == 0) continue;
      const std::uint64_t f = mulmod(at(i, c), inv);
      for (Index j = c; j < cols; ++j) {
        const std::uint64_t sub = mulmod(f, at(rank, j));
        at(i, j) = at(i, j) >= sub ? at(i, j) - sub : at(i, j) + p - sub;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

enum class RankMethod {
  modular_full_rank,  // full rank mod p, hence full rank over Q
  bareiss_int64,
  bareiss_bigint,
};

struct ExactRank {
  Index rank = 0;
  RankMethod method = RankMethod::bareiss_int64;
};

inline const char* to_string(RankMethod m) {
  switch (m) {
    case RankMethod::modular_full_rank: return "modular full-rank certificate";
    case RankMethod::bareiss_int64: return "fraction-free elimination (64-bit)";
    case RankMethod::bareiss_bigint: return "fraction-free elimination (big integer)";
  }
  return "?";
}

namespace detail {

inline std::vector<std::int64_t> dense_shorter_side_rows(const IntCsr& m, Index& rows, Index& cols) {
  // Eliminate along the shorter side.
  const bool transpose = m.rows > m.cols;
  rows = transpose ? m.cols : m.rows;
  cols = transpose ? m.rows : m.cols;
  std::vector<std::int64_t> dense(rows * cols, 0);
  for (Index i = 0; i < m.rows; ++i)
    for (Index p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
      const Index j = m.col[p];
      dense[transpose ? j * cols + i : i * cols + j] = m.val[p];
    }
  return dense;
}

}  // namespace detail

/// Rank over the rationals by fraction-free elimination alone, in 64-bit
/// arithmetic first and with arbitrary precision after an overflow.
inline ExactRank exact_rank_by_elimination(const IntCsr& m) {
  Index rows = 0, cols = 0;
  const auto dense = detail::dense_shorter_side_rows(m, rows, cols);
  if (auto r = detail::bareiss_rank<std::int64_t>(dense, rows, cols)) return {*r, RankMethod::bareiss_int64};
  std::vector<detail::BigInt> big(dense.begin(), dense.end());
  return {*detail::bareiss_rank<detail::BigInt>(std::move(big), rows, cols), RankMethod::bareiss_bigint};
}

/// Rank over the rationals. A full rank modulo a large prime certifies full
/// rank directly; otherwise fraction-free elimination decides.
inline ExactRank exact_rank(const IntCsr& m) {
  Index rows = 0, cols = 0;
  const auto dense = detail::dense_shorter_side_rows(m, rows, cols);
  if (rows > 0 && detail::modular_rank(dense, rows, cols) == rows) return {rows, RankMethod::modular_full_rank};
  return exact_rank_by_elimination(m);
}

}  // namespace spinwave

#endif  // SPINWAVE_EXACT_RANK_HPP
