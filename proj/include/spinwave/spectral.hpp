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

#ifndef SPINWAVE_SPECTRAL_HPP
#define SPINWAVE_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "spinwave/error.hpp"
#include "spinwave/exact_rank.hpp"
#include "spinwave/lattice.hpp"
#include "spinwave/operators.hpp"
#include "spinwave/parallel.hpp"

namespace spinwave {

/// Eigenvalues below this are counted as zero modes.
inline constexpr double kZeroEigenvalueTol = 1e-10;
/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kSingularValueRelTol = 1e-8;
inline constexpr double kOrthonormalityTol = 1e-12;
inline constexpr double kInvarianceRelTol = 1e-10;
inline constexpr double kSpectrumMatchTol = 1e-8;

struct Spectrum {
  int sector = 0;
  std::vector<double> eigenvalues;  // ascending
  std::optional<Eigen::MatrixXd> eigenvectors;
  double reconstruction_residual = 0.0;  // ||H - Q L Q^T||_F / ||H||_F, with vectors only
};

namespace detail {

inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw VerificationError("symmetric eigensolver failed to converge (dimension " +
                            std::to_string(m.rows()) + ")");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace detail

inline Spectrum eigendecompose(const SectorOperator& h, bool with_vectors = false,
                               Index max_dim = kDefaultMaxDim) {
  detail::check_dim(h.dim(), max_dim, "eigendecompose");
  Spectrum out;
  out.sector = h.sector;
  const Eigen::MatrixXd dense = to_dense(h.matrix);
  if (!with_vectors) {
    out.eigenvalues = detail::symmetric_eigenvalues(dense);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw VerificationError("symmetric eigensolver failed to converge in sector " + std::to_string(h.sector));
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  const Eigen::MatrixXd& q = solver.eigenvectors();
  const double norm = dense.norm();
  const double res = (dense - q * ev.asDiagonal() * q.transpose()).norm();
  out.reconstruction_residual = norm > 0 ? res / norm : res;
  if (out.reconstruction_residual > 1e-10)
    throw VerificationError("eigendecompose: reconstruction residual " +
                            std::to_string(out.reconstruction_residual) + " above 1e-10");
  out.eigenvectors = q;
  return out;
}

inline Spectrum sector_spectrum(const Lattice& lat, int r, Index max_dim = kDefaultMaxDim) {
  return eigendecompose(assemble_hamiltonian(lat, r, max_dim), false, max_dim);
}

/// Spectra of sectors [0, v], computed concurrently; result order is by sector.
inline std::vector<Spectrum> all_sector_spectra(const Lattice& lat, Index max_dim = kDefaultMaxDim,
                                                int threads = 1) {
  std::vector<Spectrum> out(static_cast<std::size_t>(lat.num_vertices()) + 1);
  // Cheap capacity check up front so the error names the first sector.
  for (int r = 0; r <= lat.num_vertices(); ++r)
    detail::check_dim(binomial(lat.num_vertices(), r), max_dim, "sector spectrum");
  parallel_for(out.size(), threads, [&](std::size_t r) { out[r] = sector_spectrum(lat, static_cast<int>(r), max_dim); });
  return out;
}

/// Sum of exp(-beta * lambda), accumulated in ascending-eigenvalue order.
inline double sector_trace(std::span<const double> eigenvalues, double beta) {
  double acc = 0.0;
  for (double lambda : eigenvalues) acc += std::exp(-beta * lambda);
  return acc;
}

inline double sector_trace(const Spectrum& s, double beta) { return sector_trace(s.eigenvalues, beta); }

inline std::size_t count_zero_modes(std::span<const double> eigenvalues, double tol = kZeroEigenvalueTol) {
  return static_cast<std::size_t>(
      std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](double x) { return std::abs(x) < tol; }));
}

/// Decomposition of sector i into K (kernel of T^{i,i-k}) and its orthogonal
/// complement R, both invariant under H.
struct KernelSplit {
  int sector = 0;
  int step = 0;
  Index sector_dim = 0;
  Index exact_rank = 0;
  Index numeric_rank = 0;
  RankMethod rank_method = RankMethod::bareiss_int64;
  Index kernel_dim = 0;
  Eigen::MatrixXd kernel_basis;  // sector_dim x kernel_dim
  Eigen::MatrixXd range_basis;   // sector_dim x rank
  double orthonormality_error = 0.0;
  double off_diagonal_residual = 0.0;  // ||R^T H K||_F
  double hamiltonian_norm = 0.0;       // ||H||_F
};

inline KernelSplit kernel_split(const Lattice& lat, int i, int k, Index max_dim = kDefaultMaxDim) {
  if (k < 0 || i - k < 0)
    throw ValidationError("kernel_split: need 0 <= k <= i, got i=" + std::to_string(i) + ", k=" + std::to_string(k));
  const InclusionOperator t = assemble_intertwiner(lat.num_vertices(), i, i - k, max_dim);
  const SectorOperator h = assemble_hamiltonian(lat, i, max_dim);

  KernelSplit out;
  out.sector = i;
  out.step = k;
  out.sector_dim = h.dim();

  const ExactRank er = exact_rank(t.matrix);
  out.exact_rank = er.rank;
  out.rank_method = er.method;

  const Eigen::MatrixXd td = to_dense(t.matrix);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(td, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = kSingularValueRelTol * (sv.size() ? sv(0) : 0.0);
  out.numeric_rank = static_cast<Index>((sv.array() > cutoff).count());
  if (out.numeric_rank != out.exact_rank)
    throw VerificationError("kernel_split: exact rank " + std::to_string(out.exact_rank) +
                            " disagrees with singular-value rank " + std::to_string(out.numeric_rank) +
                            " (sector " + std::to_string(i) + ", step " + std::to_string(k) + ")");

  const auto n = static_cast<Eigen::Index>(out.sector_dim);
  const auto rk = static_cast<Eigen::Index>(out.exact_rank);
  out.kernel_dim = out.sector_dim - out.exact_rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  out.range_basis = v.leftCols(rk);
  out.kernel_basis = v.rightCols(n - rk);
  out.orthonormality_error = (v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (out.orthonormality_error > kOrthonormalityTol)
    throw VerificationError("kernel_split: basis orthonormality error " + std::to_string(out.orthonormality_error));

  const Eigen::MatrixXd hd = to_dense(h.matrix);
  out.hamiltonian_norm = hd.norm();
  out.off_diagonal_residual = (out.range_basis.transpose() * hd * out.kernel_basis).norm();
  if (out.off_diagonal_residual > kInvarianceRelTol * std::max(out.hamiltonian_norm, 1.0))
    throw VerificationError("kernel_split: kernel is not invariant under H (residual " +
                            std::to_string(out.off_diagonal_residual) + ")");
  return out;
}

/// Eigenvalues of H compressed to the kernel and to its complement.
struct SplitSpectra {
  int sector = 0;
  int step = 0;
  std::vector<double> kernel_eigenvalues;
  std::vector<double> range_eigenvalues;
};

inline SplitSpectra split_spectra(const Lattice& lat, const KernelSplit& ks, Index max_dim = kDefaultMaxDim) {
  const Eigen::MatrixXd hd = to_dense(assemble_hamiltonian(lat, ks.sector, max_dim).matrix);
  auto compressed = [&](const Eigen::MatrixXd& basis) {
    Eigen::MatrixXd m = basis.transpose() * hd * basis;
    return detail::symmetric_eigenvalues(0.5 * (m + m.transpose()));
  };
  return {ks.sector, ks.step, compressed(ks.kernel_basis), compressed(ks.range_basis)};
}

inline SplitSpectra split_spectra(const Lattice& lat, int i, int k, Index max_dim = kDefaultMaxDim) {
  return split_spectra(lat, kernel_split(lat, i, k, max_dim), max_dim);
}

struct TraceSplit {
  double kernel = 0.0;  // portion of the sector trace from K
  double range = 0.0;   // portion from R
};

inline TraceSplit split_trace(const SplitSpectra& s, double beta) {
  return {sector_trace(s.kernel_eigenvalues, beta), sector_trace(s.range_eigenvalues, beta)};
}

inline TraceSplit split_trace(const Lattice& lat, int i, int k, double beta, Index max_dim = kDefaultMaxDim) {
  return split_trace(split_spectra(lat, i, k, max_dim), beta);
}

/// Compares the range-part trace of sector i with the full trace of sector
/// i-k, and the underlying spectra as multisets.
struct RangeTraceCheck {
  int sector = 0;
  int step = 0;
  double max_relative_residual = 0.0;
  bool spectra_match = false;
  double max_eigenvalue_deviation = 0.0;  // infinity when multiset sizes differ
  Index range_dim = 0;
  Index shifted_dim = 0;
};

inline RangeTraceCheck verify_range_trace(const SplitSpectra& split, const Spectrum& shifted,
                                          std::span<const double> betas) {
  RangeTraceCheck out;
  out.sector = split.sector;
  out.step = split.step;
  out.range_dim = split.range_eigenvalues.size();
  out.shifted_dim = shifted.eigenvalues.size();
  for (double beta : betas) {
    const double ref = sector_trace(shifted, beta);
    const double got = sector_trace(split.range_eigenvalues, beta);
    out.max_relative_residual = std::max(out.max_relative_residual, std::abs(got - ref) / ref);
  }
  if (out.range_dim == out.shifted_dim) {
    for (std::size_t n = 0; n < out.range_dim; ++n)
      out.max_eigenvalue_deviation = std::max(
          out.max_eigenvalue_deviation, std::abs(split.range_eigenvalues[n] - shifted.eigenvalues[n]));
    out.spectra_match = out.max_eigenvalue_deviation <= kSpectrumMatchTol;
  } else {
    out.max_eigenvalue_deviation = std::numeric_limits<double>::infinity();
    out.spectra_match = false;
  }
  return out;
}

inline RangeTraceCheck verify_range_trace(const Lattice& lat, int i, int k, std::span<const double> betas,
                                          Index max_dim = kDefaultMaxDim) {
  return verify_range_trace(split_spectra(lat, i, k, max_dim), sector_spectrum(lat, i - k, max_dim), betas);
}

/// Per-beta sector traces, optionally split along the kernel of T^{i,i-k}.
struct TraceReport {
  std::vector<double> betas;
  std::vector<std::vector<double>> sector_traces;  // [beta][sector]
  std::optional<int> step;
  std::vector<std::vector<std::optional<TraceSplit>>> splits;  // [beta][sector], set for sector >= step
  std::vector<double> totals;
  bool negative_beta = false;
};

inline TraceReport compute_traces(const Lattice& lat, std::vector<double> betas, std::optional<int> step = {},
                                  Index max_dim = kDefaultMaxDim, int threads = 1) {
  const int v = lat.num_vertices();
  if (step && (*step < 0 || *step > v))
    throw ValidationError("step: must lie in [0, " + std::to_string(v) + "]");
  TraceReport rep;
  rep.betas = std::move(betas);
  rep.step = step;
  rep.negative_beta = std::any_of(rep.betas.begin(), rep.betas.end(), [](double b) { return b < 0; });

  const auto spectra = all_sector_spectra(lat, max_dim, threads);
  std::vector<std::optional<SplitSpectra>> splits(static_cast<std::size_t>(v) + 1);
  if (step)
    parallel_for(splits.size(), threads, [&](std::size_t i) {
      if (static_cast<int>(i) >= *step) splits[i] = split_spectra(lat, static_cast<int>(i), *step, max_dim);
    });

  for (double beta : rep.betas) {
    std::vector<double> row;
    std::vector<std::optional<TraceSplit>> split_row(splits.size());
    double total = 0.0;
    for (int r = 0; r <= v; ++r) {
      row.push_back(sector_trace(spectra[static_cast<std::size_t>(r)], beta));
      total += row.back();
      const auto& sp = splits[static_cast<std::size_t>(r)];
      if (sp) split_row[static_cast<std::size_t>(r)] = split_trace(*sp, beta);
    }
    rep.sector_traces.push_back(std::move(row));
    rep.splits.push_back(std::move(split_row));
    rep.totals.push_back(total);
  }
  return rep;
}

}  // namespace spinwave

#endif  // SPINWAVE_SPECTRAL_HPP
