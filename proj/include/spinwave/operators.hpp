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

#ifndef SPINWAVE_OPERATORS_HPP
#define SPINWAVE_OPERATORS_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "spinwave/error.hpp"
#include "spinwave/lattice.hpp"
#include "spinwave/sector_basis.hpp"

namespace spinwave {

/// Default ceiling on a single sector dimension for assembled/dense paths.
inline constexpr Index kDefaultMaxDim = 20000;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw CapacityError("integer overflow in exact accumulation");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw CapacityError("integer overflow in exact accumulation");
  return out;
}

inline void check_dim(Index dim, Index max_dim, const char* what) {
  if (dim > max_dim)
    throw CapacityError(std::string(what) + ": dimension " + std::to_string(dim) +
                        " exceeds max-dense-dim " + std::to_string(max_dim));
}

}  // namespace detail

/// Row-compressed integer matrix with sorted column indices and no stored
/// zeros.
struct IntCsr {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> row_ptr{0};
  std::vector<Index> col;
  std::vector<std::int64_t> val;

  std::size_t nnz() const { return val.size(); }

  std::int64_t entry(Index i, Index j) const {
    auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    auto it = std::lower_bound(first, last, j);
    return (it != last && *it == j) ? val[static_cast<std::size_t>(it - col.begin())] : 0;
  }

  /// Mutable access for fault injection and tests; the entry must exist.
  std::int64_t& stored(Index i, Index j) {
    auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) throw ValidationError("stored: no entry at requested position");
    return val[static_cast<std::size_t>(it - col.begin())];
  }

  friend bool operator==(const IntCsr&, const IntCsr&) = default;
};

/// Exact y = A x.
inline std::vector<std::int64_t> multiply(const IntCsr& a, std::span<const std::int64_t> x) {
  if (x.size() != a.cols) throw ValidationError("multiply: vector length mismatch");
  std::vector<std::int64_t> y(a.rows, 0);
  for (Index i = 0; i < a.rows; ++i)
    for (Index p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      y[i] = detail::checked_add(y[i], detail::checked_mul(a.val[p], x[a.col[p]]));
  return y;
}

inline std::vector<double> multiply(const IntCsr& a, std::span<const double> x) {
  if (x.size() != a.cols) throw ValidationError("multiply: vector length mismatch");
  std::vector<double> y(a.rows, 0.0);
  for (Index i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (Index p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      acc += static_cast<double>(a.val[p]) * x[a.col[p]];
    y[i] = acc;
  }
  return y;
}

/// Exact sparse product A B (Gustavson, dense row accumulator).
inline IntCsr multiply(const IntCsr& a, const IntCsr& b) {
  if (a.cols != b.rows) throw ValidationError("multiply: inner dimensions differ");
  IntCsr c;
  c.rows = a.rows;
  c.cols = b.cols;
  c.row_ptr.assign(1, 0);
  std::vector<std::int64_t> acc(b.cols, 0);
  std::vector<char> touched(b.cols, 0);
  std::vector<Index> cols;
  for (Index i = 0; i < a.rows; ++i) {
    cols.clear();
    for (Index p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const std::int64_t av = a.val[p];
      const Index k = a.col[p];
      for (Index q = b.row_ptr[k]; q < b.row_ptr[k + 1]; ++q) {
        const Index j = b.col[q];
        if (!touched[j]) {
          touched[j] = 1;
          cols.push_back(j);
        }
        acc[j] = detail::checked_add(acc[j], detail::checked_mul(av, b.val[q]));
      }
    }
    std::sort(cols.begin(), cols.end());
    for (Index j : cols) {
      if (acc[j] != 0) {
        c.col.push_back(j);
        c.val.push_back(acc[j]);
      }
      acc[j] = 0;
      touched[j] = 0;
    }
    c.row_ptr.push_back(c.col.size());
  }
  return c;
}

/// Exact A - B.
inline IntCsr subtract(const IntCsr& a, const IntCsr& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw ValidationError("subtract: shape mismatch");
  IntCsr c;
  c.rows = a.rows;
  c.cols = a.cols;
  c.row_ptr.assign(1, 0);
  for (Index i = 0; i < a.rows; ++i) {
    Index p = a.row_ptr[i], pe = a.row_ptr[i + 1];
    Index q = b.row_ptr[i], qe = b.row_ptr[i + 1];
    while (p < pe || q < qe) {
      Index j;
      std::int64_t x;
      if (q == qe || (p < pe && a.col[p] < b.col[q])) {
        j = a.col[p];
        x = a.val[p++];
      } else if (p == pe || b.col[q] < a.col[p]) {
        j = b.col[q];
        x = detail::checked_mul(-1, b.val[q++]);
      } else {
        j = a.col[p];
        x = detail::checked_add(a.val[p++], detail::checked_mul(-1, b.val[q++]));
      }
      if (x != 0) {
        c.col.push_back(j);
        c.val.push_back(x);
      }
    }
    c.row_ptr.push_back(c.col.size());
  }
  return c;
}

inline std::int64_t max_abs(const IntCsr& a) {
  std::int64_t m = 0;
  for (auto x : a.val) m = std::max(m, x < 0 ? -x : x);
  return m;
}

inline Eigen::MatrixXd to_dense(const IntCsr& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows),
                                            static_cast<Eigen::Index>(a.cols));
  for (Index i = 0; i < a.rows; ++i)
    for (Index p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a.col[p])) =
          static_cast<double>(a.val[p]);
  return d;
}

/// Heisenberg Hamiltonian sum over bonds of (1 - swap) restricted to one
/// spin-wave sector.
struct SectorOperator {
  int num_vertices = 0;
  int sector = 0;
  IntCsr matrix;

  Index dim() const { return matrix.rows; }
};

/// T^{r,s}: coefficient functions on r-subsets to s-subsets by summing over
/// supersets. Rows index s-subsets, columns r-subsets.
struct InclusionOperator {
  int num_vertices = 0;
  int source = 0;  // r
  int target = 0;  // s
  IntCsr matrix;
};

inline SectorOperator assemble_hamiltonian(const Lattice& lat, int r, Index max_dim = kDefaultMaxDim) {
  const SectorBasis basis(lat.num_vertices(), r);
  detail::check_dim(basis.dim(), max_dim, "assemble_hamiltonian");

  SectorOperator h;
  h.num_vertices = lat.num_vertices();
  h.sector = r;
  IntCsr& m = h.matrix;
  m.rows = m.cols = basis.dim();
  m.row_ptr.reserve(basis.dim() + 1);

  std::vector<std::pair<Index, std::int64_t>> row;
  basis.for_each([&](Index k, Mask s) {
    row.clear();
    std::int64_t diag = 0;
    for (const Edge& e : lat.edges()) {
      const Mask pair = (Mask{1} << e.a) | (Mask{1} << e.b);
      if (std::popcount(s & pair) != 1) continue;
      ++diag;
      row.emplace_back(rank(s ^ pair, r), -1);
    }
    if (diag != 0) row.emplace_back(k, diag);
    std::sort(row.begin(), row.end());
    for (auto [j, x] : row) {
      m.col.push_back(j);
      m.val.push_back(x);
    }
    m.row_ptr.push_back(m.col.size());
  });
  return h;
}

/// Matrix-free H x on one sector. Integer inputs use overflow-checked
/// arithmetic and agree exactly with the assembled product.
template <class T>
std::vector<T> apply_hamiltonian(const Lattice& lat, int r, std::span<const T> x) {
  static_assert(std::is_same_v<T, std::int64_t> || std::is_floating_point_v<T>);
  const SectorBasis basis(lat.num_vertices(), r);
  if (x.size() != basis.dim())
    throw ValidationError("apply_hamiltonian: vector length " + std::to_string(x.size()) +
                          " does not match sector dimension " + std::to_string(basis.dim()));
  std::vector<T> y(x.size(), T{0});
  basis.for_each([&](Index k, Mask s) {
    T acc{0};
    for (const Edge& e : lat.edges()) {
      const Mask pair = (Mask{1} << e.a) | (Mask{1} << e.b);
      if (std::popcount(s & pair) != 1) continue;
      const T diff = [&] {
        if constexpr (std::is_integral_v<T>)
          return detail::checked_add(x[k], detail::checked_mul(-1, x[rank(s ^ pair, r)]));
        else
          return x[k] - x[rank(s ^ pair, r)];
      }();
      if constexpr (std::is_integral_v<T>)
        acc = detail::checked_add(acc, diff);
      else
        acc += diff;
    }
    y[k] = acc;
  });
  return y;
}

inline InclusionOperator assemble_intertwiner(int v, int r, int s, Index max_dim = kDefaultMaxDim) {
  if (s > r)
    throw ValidationError("assemble_intertwiner: target sector s=" + std::to_string(s) +
                          " exceeds source sector r=" + std::to_string(r));
  const SectorBasis src(v, r);
  const SectorBasis dst(v, s);
  detail::check_dim(src.dim(), max_dim, "assemble_intertwiner");
  detail::check_dim(dst.dim(), max_dim, "assemble_intertwiner");

  InclusionOperator t;
  t.num_vertices = v;
  t.source = r;
  t.target = s;
  IntCsr& m = t.matrix;
  m.rows = dst.dim();
  m.cols = src.dim();
  m.row_ptr.reserve(dst.dim() + 1);

  const Mask all = low_bits(v);
  std::vector<Index> cols;
  dst.for_each([&](Index, Mask sub) {
    cols.clear();
    for_each_subset_of(all & ~sub, r - s, [&](Mask extra) { cols.push_back(rank(sub | extra, r)); });
    std::sort(cols.begin(), cols.end());
    m.col.insert(m.col.end(), cols.begin(), cols.end());
    m.val.insert(m.val.end(), cols.size(), 1);
    m.row_ptr.push_back(m.col.size());
  });
  return t;
}

struct ScaledInclusion {
  std::int64_t factor = 0;
  InclusionOperator op;  // T^{r,t}
};

/// T^{s,t} T^{r,s}, computed as an exact sparse product and matched entrywise
/// against a multiple of a freshly assembled T^{r,t}. Throws
/// VerificationError if the product is not such a multiple.
inline ScaledInclusion compose_intertwiners(const InclusionOperator& outer, const InclusionOperator& inner) {
  if (outer.source != inner.target || outer.num_vertices != inner.num_vertices ||
      outer.matrix.cols != inner.matrix.rows)
    throw ValidationError("compose_intertwiners: outer operator must start in the inner target sector");

  const IntCsr product = multiply(outer.matrix, inner.matrix);
  ScaledInclusion out;
  out.op = assemble_intertwiner(inner.num_vertices, inner.source, outer.target,
                                std::max(product.rows, product.cols));
  out.factor = product.nnz() ? product.val.front() : 0;
  IntCsr scaled = out.op.matrix;
  for (auto& x : scaled.val) x = out.factor;
  if (!(product == scaled))
    throw VerificationError("compose_intertwiners: product is not a uniform multiple of the inclusion operator");
  return out;
}

struct IntertwiningCheck {
  bool holds = false;
  std::int64_t max_residual = 0;
};

/// Exact H_s T - T H_r for prebuilt operators.
inline IntertwiningCheck check_intertwining(const SectorOperator& h_target, const InclusionOperator& t,
                                            const SectorOperator& h_source) {
  if (h_target.sector != t.target || h_source.sector != t.source)
    throw ValidationError("check_intertwining: sector mismatch between operators");
  const IntCsr residual = subtract(multiply(h_target.matrix, t.matrix), multiply(t.matrix, h_source.matrix));
  return {residual.nnz() == 0, max_abs(residual)};
}

inline IntertwiningCheck check_intertwining(const Lattice& lat, int r, int s, Index max_dim = kDefaultMaxDim) {
  const auto t = assemble_intertwiner(lat.num_vertices(), r, s, max_dim);
  return check_intertwining(assemble_hamiltonian(lat, s, max_dim), t, assemble_hamiltonian(lat, r, max_dim));
}

/// Matrix Market coordinate/integer, 1-based. Symmetric matrices are written
/// as their lower triangle.
inline void write_matrix_market(std::ostream& os, const IntCsr& m, bool symmetric) {
  os << "%%MatrixMarket matrix coordinate integer " << (symmetric ? "symmetric" : "general") << '\n';
  std::size_t count = 0;
  for (Index i = 0; i < m.rows; ++i)
    for (Index p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p)
      if (!symmetric || m.col[p] <= i) ++count;
  os << m.rows << ' ' << m.cols << ' ' << count << '\n';
  for (Index i = 0; i < m.rows; ++i)
    for (Index p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p)
      if (!symmetric || m.col[p] <= i) os << i + 1 << ' ' << m.col[p] + 1 << ' ' << m.val[p] << '\n';
}

}  // namespace spinwave

#endif  // SPINWAVE_OPERATORS_HPP
