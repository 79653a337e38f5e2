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

#ifndef SPINWAVE_IO_HPP
#define SPINWAVE_IO_HPP

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include "json.hpp"

#include "spinwave/criterion.hpp"
#include "spinwave/lattice.hpp"
#include "spinwave/spectral.hpp"

namespace spinwave {

using json = nlohmann::json;

/// 17 significant digits, enough for an exact round trip of any double.
inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline json to_json(const Lattice& lat) {
  json edges = json::array();
  for (const Edge& e : lat.edges()) edges.push_back({e.a, e.b});
  return {{"dims", lat.dims()},
          {"boundary", std::string(to_string(lat.boundary()))},
          {"v", lat.num_vertices()},
          {"edges", std::move(edges)}};
}

inline void write_spectrum_csv(std::ostream& os, std::span<const Spectrum> spectra) {
  os << "sector,eigenvalue_index,eigenvalue\n";
  for (const auto& s : spectra)
    for (std::size_t n = 0; n < s.eigenvalues.size(); ++n)
      os << s.sector << ',' << n << ',' << format_double(s.eigenvalues[n]) << '\n';
}

inline json to_json(std::span<const Spectrum> spectra) {
  json out = json::array();
  for (const auto& s : spectra) out.push_back({{"sector", s.sector}, {"eigenvalues", s.eigenvalues}});
  return out;
}

inline void write_traces_csv(std::ostream& os, const TraceReport& rep) {
  os << "beta,sector,trace";
  if (rep.step) os << ",kernel_trace,range_trace";
  os << '\n';
  for (std::size_t b = 0; b < rep.betas.size(); ++b) {
    for (std::size_t r = 0; r < rep.sector_traces[b].size(); ++r) {
      os << format_double(rep.betas[b]) << ',' << r << ',' << format_double(rep.sector_traces[b][r]);
      if (rep.step) {
        if (const auto& sp = rep.splits[b][r])
          os << ',' << format_double(sp->kernel) << ',' << format_double(sp->range);
        else
          os << ",,";
      }
      os << '\n';
    }
  }
}

inline json to_json(const TraceReport& rep) {
  json rows = json::array();
  for (std::size_t b = 0; b < rep.betas.size(); ++b) {
    json sectors = json::array();
    for (std::size_t r = 0; r < rep.sector_traces[b].size(); ++r) {
      json e = {{"sector", r}, {"trace", rep.sector_traces[b][r]}};
      if (rep.step && rep.splits[b][r]) {
        e["kernel_trace"] = rep.splits[b][r]->kernel;
        e["range_trace"] = rep.splits[b][r]->range;
      }
      sectors.push_back(std::move(e));
    }
    rows.push_back({{"beta", rep.betas[b]}, {"total", rep.totals[b]}, {"sectors", std::move(sectors)}});
  }
  json out = {{"rows", std::move(rows)}, {"negative_beta", rep.negative_beta}};
  out["step"] = rep.step ? json(*rep.step) : json(nullptr);
  return out;
}

inline void write_traces_text(std::ostream& os, const TraceReport& rep) {
  if (rep.negative_beta) os << "WARNING: negative beta in grid\n";
  for (std::size_t b = 0; b < rep.betas.size(); ++b) {
    os << "beta = " << format_double(rep.betas[b]) << "   total = " << format_double(rep.totals[b]) << '\n';
    os << std::setw(7) << "sector" << std::setw(26) << "trace";
    if (rep.step) os << std::setw(26) << "kernel_trace" << std::setw(26) << "range_trace";
    os << '\n';
    for (std::size_t r = 0; r < rep.sector_traces[b].size(); ++r) {
      os << std::setw(7) << r << std::setw(26) << format_double(rep.sector_traces[b][r]);
      if (rep.step && rep.splits[b][r])
        os << std::setw(26) << format_double(rep.splits[b][r]->kernel) << std::setw(26)
           << format_double(rep.splits[b][r]->range);
      os << '\n';
    }
  }
}

inline constexpr const char* kEvidenceNote =
    "Finite-lattice evaluation on a discrete beta grid. Passing rows are evidence for the inequality on this "
    "lattice only; they do not establish a threshold valid for all larger lattices.";

inline json to_json(const CriterionReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"beta", r.beta},
                    {"sector", r.sector},
                    {"trace", r.trace},
                    {"shifted_trace", r.shifted_trace},
                    {"margin", r.margin},
                    {"pass", r.pass},
                    {"kernel_trace", r.kernel_trace},
                    {"range_trace", r.range_trace},
                    {"kernel_margin", r.kernel_margin},
                    {"kernel_pass", r.kernel_pass},
                    {"consistency_residual", r.consistency_residual},
                    {"consistent", r.consistent}});
  }
  json summary = {{"all_pass", rep.all_pass},
                  {"kernel_counterexamples", rep.kernel_counterexamples},
                  {"all_consistent", rep.all_consistent},
                  {"note", kEvidenceNote}};
  summary["empirical_beta0"] = rep.empirical_beta0 ? json(*rep.empirical_beta0) : json(nullptr);
  return {{"lattice",
           {{"dims", rep.lattice.dims()},
            {"boundary", std::string(to_string(rep.lattice.boundary()))},
            {"v", rep.lattice.num_vertices()}}},
          {"step", rep.band.step},
          {"sectors", {rep.band.first, rep.band.last}},
          {"factor", rep.factor},
          {"betas", rep.betas},
          {"rows", std::move(rows)},
          {"summary", std::move(summary)}};
}

inline void write_criterion_csv(std::ostream& os, const CriterionReport& rep) {
  os << "beta,sector,trace,shifted_trace,margin,pass,kernel_trace,range_trace,kernel_margin,kernel_pass\n";
  for (const auto& r : rep.rows)
    os << format_double(r.beta) << ',' << r.sector << ',' << format_double(r.trace) << ','
       << format_double(r.shifted_trace) << ',' << format_double(r.margin) << ',' << (r.pass ? 1 : 0) << ','
       << format_double(r.kernel_trace) << ',' << format_double(r.range_trace) << ','
       << format_double(r.kernel_margin) << ',' << (r.kernel_pass ? 1 : 0) << '\n';
}

inline void write_criterion_text(std::ostream& os, const CriterionReport& rep) {
  os << "lattice " << rep.lattice.label() << "  v=" << rep.lattice.num_vertices() << "  step=" << rep.band.step
     << "  sectors=[" << rep.band.first << ", " << rep.band.last << "]  factor=" << format_double(rep.factor)
     << "\n\n";
  os << std::setw(10) << "beta" << std::setw(7) << "sector" << std::setw(25) << "Tr(i)" << std::setw(25)
     << "Tr(i-step)" << std::setw(25) << "ratio margin" << std::setw(6) << "" << std::setw(25) << "Tr_K(i)"
     << std::setw(25) << "kernel margin" << '\n';
  for (const auto& r : rep.rows) {
    os << std::setw(10) << format_double(r.beta) << std::setw(7) << r.sector << std::setw(25)
       << format_double(r.trace) << std::setw(25) << format_double(r.shifted_trace) << std::setw(25)
       << format_double(r.margin) << std::setw(6) << (r.pass ? "pass" : "FAIL") << std::setw(25)
       << format_double(r.kernel_trace) << std::setw(25) << format_double(r.kernel_margin)
       << (r.kernel_pass ? "" : "  <-- COUNTEREXAMPLE CANDIDATE") << '\n';
  }
  os << "\nall ratio checks pass: " << (rep.all_pass ? "yes" : "no") << '\n';
  os << "empirical beta0: " << (rep.empirical_beta0 ? format_double(*rep.empirical_beta0) : "none") << '\n';
  os << "kernel inequality counterexample candidates: " << rep.kernel_counterexamples << '\n';
  os << "margin consistency: " << (rep.all_consistent ? "ok" : "VIOLATED") << '\n';
  os << kEvidenceNote << '\n';
}

}  // namespace spinwave

#endif  // SPINWAVE_IO_HPP
