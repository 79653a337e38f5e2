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

#ifndef SPINWAVE_CRITERION_HPP
#define SPINWAVE_CRITERION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinwave/error.hpp"
#include "spinwave/lattice.hpp"
#include "spinwave/parallel.hpp"
#include "spinwave/spectral.hpp"

namespace spinwave {

inline constexpr double kConsistencyRelTol = 1e-8;

/// Sector-ratio test Tr(i) <= factor * Tr(i - step) over a band of sectors and
/// a grid of inverse temperatures. Unset step and sector band default to v/10
/// and [4v/10 + 1, v/2], which requires v divisible by 10.
struct CriterionConfig {
  Lattice lattice;
  std::vector<double> betas;
  std::optional<int> step{};
  std::optional<std::pair<int, int>> sectors{};  // inclusive
  double factor = 2.0;
  Index max_dim = kDefaultMaxDim;
  int threads = 1;
};

struct ResolvedBand {
  int step = 0;
  int first = 0;
  int last = 0;
};

inline ResolvedBand resolve_band(const CriterionConfig& cfg) {
  const int v = cfg.lattice.num_vertices();
  if (cfg.betas.empty()) throw ValidationError("betas: at least one inverse temperature is required");
  for (double b : cfg.betas)
    if (!(b >= 0.0) || !std::isfinite(b))
      throw ValidationError("betas: inverse temperatures must be finite and >= 0, got " + std::to_string(b));
  if (!(cfg.factor > 0.0) || !std::isfinite(cfg.factor))
    throw ValidationError("factor: must be a finite positive number");
  if ((!cfg.step || !cfg.sectors) && v % 10 != 0)
    throw ValidationError("step/sectors: v=" + std::to_string(v) +
                          " is not divisible by 10, so the default step v/10 and band [4v/10+1, v/2] "
                          "are undefined; supply step and sectors explicitly");
  ResolvedBand band;
  band.step = cfg.step.value_or(v / 10);
  band.first = cfg.sectors ? cfg.sectors->first : 4 * v / 10 + 1;
  band.last = cfg.sectors ? cfg.sectors->second : v / 2;
  if (band.step < 0 || band.step > v)
    throw ValidationError("step: must lie in [0, " + std::to_string(v) + "], got " + std::to_string(band.step));
  if (band.first > band.last)
    throw ValidationError("sectors: empty band [" + std::to_string(band.first) + ", " + std::to_string(band.last) + "]");
  if (band.first < band.step || band.last > v)
    throw ValidationError("sectors: band [" + std::to_string(band.first) + ", " + std::to_string(band.last) +
                          "] must lie within [step, v] = [" + std::to_string(band.step) + ", " +
                          std::to_string(v) + "]");
  return band;
}

struct CriterionRow {
  double beta = 0.0;
  int sector = 0;
  double trace = 0.0;          // Tr(V, beta, i)
  double shifted_trace = 0.0;  // Tr(V, beta, i - step)
  double margin = 0.0;         // factor * shifted - trace
  bool pass = false;
  double kernel_trace = 0.0;  // part of Tr(V, beta, i) from the kernel of T^{i,i-step}
  double range_trace = 0.0;
  double kernel_margin = 0.0;  // shifted - kernel_trace
  bool kernel_pass = false;
  double consistency_residual = 0.0;
  bool consistent = false;
};

struct CriterionReport {
  Lattice lattice;
  ResolvedBand band;
  double factor = 2.0;
  std::vector<double> betas;
  std::vector<CriterionRow> rows;  // beta-major in config order, then sector ascending
  /// Smallest grid beta from which every larger grid beta passes all ratio
  /// checks. Finite-lattice evidence, not a threshold proof.
  std::optional<double> empirical_beta0;
  bool all_pass = false;
  std::size_t kernel_counterexamples = 0;
  bool all_consistent = false;
};

inline CriterionReport evaluate_criterion(const CriterionConfig& cfg) {
  const ResolvedBand band = resolve_band(cfg);
  const Lattice& lat = cfg.lattice;

  // Sectors needed: the band and its shifted copy.
  std::vector<int> needed;
  for (int i = band.first; i <= band.last; ++i) {
    needed.push_back(i);
    needed.push_back(i - band.step);
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

  std::vector<Spectrum> spectra(static_cast<std::size_t>(lat.num_vertices()) + 1);
  std::vector<SplitSpectra> splits(static_cast<std::size_t>(band.last - band.first + 1));
  const std::size_t n_spec = needed.size();
  parallel_for(n_spec + splits.size(), cfg.threads, [&](std::size_t task) {
    if (task < n_spec) {
      const int r = needed[task];
      spectra[static_cast<std::size_t>(r)] = sector_spectrum(lat, r, cfg.max_dim);
    } else {
      const int i = band.first + static_cast<int>(task - n_spec);
      splits[task - n_spec] = split_spectra(lat, i, band.step, cfg.max_dim);
    }
  });

  CriterionReport rep;
  rep.lattice = lat;
  rep.band = band;
  rep.factor = cfg.factor;
  rep.betas = cfg.betas;
  for (double beta : cfg.betas) {
    for (int i = band.first; i <= band.last; ++i) {
      CriterionRow row;
      row.beta = beta;
      row.sector = i;
      row.trace = sector_trace(spectra[static_cast<std::size_t>(i)], beta);
      row.shifted_trace = sector_trace(spectra[static_cast<std::size_t>(i - band.step)], beta);
      row.margin = cfg.factor * row.shifted_trace - row.trace;
      row.pass = row.margin >= 0.0;
      const TraceSplit ts = split_trace(splits[static_cast<std::size_t>(i - band.first)], beta);
      row.kernel_trace = ts.kernel;
      row.range_trace = ts.range;
      row.kernel_margin = row.shifted_trace - row.kernel_trace;
      row.kernel_pass = row.kernel_margin >= 0.0;
      // With Tr(i) = Tr_K(i) + Tr_R(i) and Tr_R(i) = Tr(i - step):
      // margin = kernel_margin + (factor - 2) * Tr(i - step).
      const double predicted = row.kernel_margin + (cfg.factor - 2.0) * row.shifted_trace;
      const double scale = std::max({std::abs(row.margin), std::abs(predicted), row.shifted_trace});
      row.consistency_residual = scale > 0 ? std::abs(row.margin - predicted) / scale : 0.0;
      row.consistent = row.consistency_residual <= kConsistencyRelTol;
      rep.rows.push_back(row);
    }
  }

  rep.all_pass = std::all_of(rep.rows.begin(), rep.rows.end(), [](const CriterionRow& r) { return r.pass; });
  rep.all_consistent =
      std::all_of(rep.rows.begin(), rep.rows.end(), [](const CriterionRow& r) { return r.consistent; });
  rep.kernel_counterexamples = static_cast<std::size_t>(
      std::count_if(rep.rows.begin(), rep.rows.end(), [](const CriterionRow& r) { return !r.kernel_pass; }));

  std::vector<double> sorted = cfg.betas;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    const bool ok = std::all_of(rep.rows.begin(), rep.rows.end(),
                                [&](const CriterionRow& r) { return r.beta != *it || r.pass; });
    if (!ok) break;
    rep.empirical_beta0 = *it;
  }
  return rep;
}

struct KernelProbeRow {
  double beta = 0.0;
  int sector = 0;
  double kernel_trace = 0.0;
  double shifted_trace = 0.0;
  double margin = 0.0;
  bool pass = false;
};

/// Margins of Tr_K(V, beta, i) <= Tr(V, beta, i - step). Negative margins are
/// returned, never thrown.
inline std::vector<KernelProbeRow> probe_kernel_inequality(const CriterionConfig& cfg) {
  const CriterionReport rep = evaluate_criterion(cfg);
  std::vector<KernelProbeRow> out;
  out.reserve(rep.rows.size());
  for (const auto& r : rep.rows)
    out.push_back({r.beta, r.sector, r.kernel_trace, r.shifted_trace, r.kernel_margin, r.kernel_pass});
  return out;
}

struct FullTraceCheck {
  double total_at_zero = 0.0;
  double relative_residual_at_zero = 0.0;  // |total(0) - 2^v| / 2^v
  std::vector<double> betas;
  std::vector<double> totals;
  bool monotone = false;       // totals non-increasing along the sorted grid
  bool bounded_below = false;  // totals >= v + 1
  std::size_t zero_modes = 0;  // v + 1 on a connected lattice
};

inline FullTraceCheck full_trace_consistency(const Lattice& lat, std::vector<double> betas,
                                             Index max_dim = kDefaultMaxDim, int threads = 1) {
  const auto spectra = all_sector_spectra(lat, max_dim, threads);
  const int v = lat.num_vertices();
  FullTraceCheck out;
  std::sort(betas.begin(), betas.end());
  out.betas = std::move(betas);
  auto total = [&](double beta) {
    double acc = 0.0;
    for (const auto& s : spectra) acc += sector_trace(s, beta);
    return acc;
  };
  out.total_at_zero = total(0.0);
  const double full = std::ldexp(1.0, v);
  out.relative_residual_at_zero = std::abs(out.total_at_zero - full) / full;
  for (const auto& s : spectra) out.zero_modes += count_zero_modes(s.eigenvalues);
  out.monotone = true;
  out.bounded_below = true;
  for (double beta : out.betas) {
    out.totals.push_back(total(beta));
    if (out.totals.size() > 1 && out.totals.back() > out.totals[out.totals.size() - 2]) out.monotone = false;
    if (out.totals.back() < static_cast<double>(v + 1) * (1.0 - 1e-12)) out.bounded_below = false;
  }
  return out;
}

}  // namespace spinwave

#endif  // SPINWAVE_CRITERION_HPP
