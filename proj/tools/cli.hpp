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

#ifndef SPINWAVE_TOOLS_CLI_HPP
#define SPINWAVE_TOOLS_CLI_HPP

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spinwave/spinwave.hpp"

namespace spinwave::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kCapacity = 2, kVerification = 3 };

inline const std::vector<double> kDefaultBetas = {0.0, 0.5, 1.0, 2.0, 4.0};
inline const std::vector<double> kDefaultVerifyBetas = {0.1, 0.5, 1.0, 2.0, 5.0};

struct LatticeSpec {
  std::vector<int> dims;
  Boundary boundary = Boundary::open;
};

/// Merged view of the config document and command-line flags (flags win).
struct RunConfig {
  std::optional<std::vector<int>> dims;
  Boundary boundary = Boundary::open;
  std::vector<double> betas;
  std::optional<int> step;
  std::optional<std::pair<int, int>> sectors;
  double factor = 2.0;
  std::string format;
  std::string out;
  int threads = 1;
  Index max_dense_dim = kDefaultMaxDim;
  std::optional<int> sector;
  std::vector<LatticeSpec> lattices;
  std::string export_mtx;
  bool inject_fault = false;

  Lattice lattice() const {
    if (!dims) throw ValidationError("dims: required (use --dims or the \"dims\" config key)");
    return build_rectangular(*dims, boundary);
  }
};

inline LatticeSpec parse_lattice_token(const std::string& token) {
  LatticeSpec spec;
  std::string shape = token;
  if (auto colon = token.find(':'); colon != std::string::npos) {
    shape = token.substr(0, colon);
    spec.boundary = parse_boundary(token.substr(colon + 1));
  }
  std::stringstream ss(shape);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      std::size_t used = 0;
      spec.dims.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ValidationError("lattice: cannot parse \"" + token + "\" (expected e.g. 2x5 or 3x3:periodic)");
    }
  }
  return spec;
}

namespace detail {

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(key) + ": " + e.what());
  }
}

inline LatticeSpec lattice_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("lattices: entries must be objects with \"dims\"");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "dims" && it.key() != "boundary")
      throw ValidationError("lattices: unknown key \"" + it.key() + "\"");
  LatticeSpec spec;
  spec.dims = get_as<std::vector<int>>(j, "dims");
  if (j.contains("boundary")) spec.boundary = parse_boundary(get_as<std::string>(j, "boundary"));
  return spec;
}

}  // namespace detail

inline void apply_config_document(const json& doc, RunConfig& cfg) {
  static const std::set<std::string> known = {"dims",   "boundary", "betas",   "step",          "sectors",
                                              "factor", "format",   "out",     "threads",       "max_dense_dim",
                                              "sector", "lattices"};
  if (!doc.is_object()) throw ValidationError("config: top level must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!known.count(it.key())) throw ValidationError("config: unknown key \"" + it.key() + "\"");
  using detail::get_as;
  if (doc.contains("dims")) cfg.dims = get_as<std::vector<int>>(doc, "dims");
  if (doc.contains("boundary")) cfg.boundary = parse_boundary(get_as<std::string>(doc, "boundary"));
  if (doc.contains("betas")) cfg.betas = get_as<std::vector<double>>(doc, "betas");
  if (doc.contains("step")) cfg.step = get_as<int>(doc, "step");
  if (doc.contains("sectors")) {
    auto s = get_as<std::vector<int>>(doc, "sectors");
    if (s.size() != 2) throw ValidationError("sectors: expected [first, last]");
    cfg.sectors = {s[0], s[1]};
  }
  if (doc.contains("factor")) cfg.factor = get_as<double>(doc, "factor");
  if (doc.contains("format")) cfg.format = get_as<std::string>(doc, "format");
  if (doc.contains("out")) cfg.out = get_as<std::string>(doc, "out");
  if (doc.contains("threads")) cfg.threads = get_as<int>(doc, "threads");
  if (doc.contains("max_dense_dim")) cfg.max_dense_dim = get_as<Index>(doc, "max_dense_dim");
  if (doc.contains("sector")) cfg.sector = get_as<int>(doc, "sector");
  if (doc.contains("lattices")) {
    const json& arr = doc.at("lattices");
    if (!arr.is_array()) throw ValidationError("lattices: expected an array");
    cfg.lattices.clear();
    for (const auto& entry : arr) cfg.lattices.push_back(detail::lattice_from_json(entry));
  }
}

inline json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Subcommands. Each writes its result to `out` and returns an exit code.

inline int cmd_lattice_info(const RunConfig& cfg, std::ostream& out) {
  out << to_json(cfg.lattice()).dump(2) << '\n';
  return kOk;
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const Lattice lat = cfg.lattice();
  std::vector<Spectrum> spectra;
  if (cfg.sector) {
    const SectorOperator h = assemble_hamiltonian(lat, *cfg.sector, cfg.max_dense_dim);
    if (!cfg.export_mtx.empty()) {
      std::ofstream mtx(cfg.export_mtx);
      if (!mtx) throw ValidationError("export-mtx: cannot open \"" + cfg.export_mtx + "\"");
      write_matrix_market(mtx, h.matrix, true);
    }
    spectra.push_back(eigendecompose(h, false, cfg.max_dense_dim));
  } else {
    if (!cfg.export_mtx.empty()) throw ValidationError("export-mtx: requires --sector");
    spectra = all_sector_spectra(lat, cfg.max_dense_dim, cfg.threads);
  }
  if (cfg.format == "json")
    out << json{{"lattice", to_json(lat)}, {"spectra", to_json(spectra)}}.dump(2) << '\n';
  else
    write_spectrum_csv(out, spectra);
  return kOk;
}

inline int cmd_traces(const RunConfig& cfg, std::ostream& out) {
  const Lattice lat = cfg.lattice();
  const auto betas = cfg.betas.empty() ? kDefaultBetas : cfg.betas;
  const TraceReport rep = compute_traces(lat, betas, cfg.step, cfg.max_dense_dim, cfg.threads);
  if (cfg.format == "json")
    out << to_json(rep).dump(2) << '\n';
  else if (cfg.format == "text")
    write_traces_text(out, rep);
  else
    write_traces_csv(out, rep);
  return kOk;
}

inline CriterionConfig criterion_config(const RunConfig& cfg, Lattice lat) {
  CriterionConfig c{std::move(lat), cfg.betas.empty() ? kDefaultBetas : cfg.betas};
  c.step = cfg.step;
  c.sectors = cfg.sectors;
  c.factor = cfg.factor;
  c.max_dim = cfg.max_dense_dim;
  c.threads = cfg.threads;
  return c;
}

inline int cmd_criterion(const RunConfig& cfg, std::ostream& out) {
  const CriterionReport rep = evaluate_criterion(criterion_config(cfg, cfg.lattice()));
  if (cfg.format == "text")
    write_criterion_text(out, rep);
  else if (cfg.format == "csv")
    write_criterion_csv(out, rep);
  else
    out << to_json(rep).dump(2) << '\n';
  return kOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  std::vector<LatticeSpec> specs = cfg.lattices;
  if (specs.empty() && cfg.dims) specs.push_back({*cfg.dims, cfg.boundary});
  if (specs.empty()) throw ValidationError("lattices: sweep needs --lattice or a \"lattices\" config array");
  std::vector<CriterionReport> reports;
  for (const auto& spec : specs)
    reports.push_back(evaluate_criterion(criterion_config(cfg, build_rectangular(spec.dims, spec.boundary))));
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    out << arr.dump(2) << '\n';
    return kOk;
  }
  out << "lattice,v,step,beta,sector,trace,shifted_trace,margin,pass,kernel_trace,kernel_margin,kernel_pass\n";
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      out << rep.lattice.label() << ',' << rep.lattice.num_vertices() << ',' << rep.band.step << ','
          << format_double(r.beta) << ',' << r.sector << ',' << format_double(r.trace) << ','
          << format_double(r.shifted_trace) << ',' << format_double(r.margin) << ',' << (r.pass ? 1 : 0) << ','
          << format_double(r.kernel_trace) << ',' << format_double(r.kernel_margin) << ','
          << (r.kernel_pass ? 1 : 0) << '\n';
  return kOk;
}

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
  bool informational = false;  // reported, never fails the run
};

/// Runs the identity checks on one lattice. With `inject_fault` the source
/// Hamiltonian of the (1, 0) intertwining check gets a corrupted diagonal.
inline std::vector<CheckLine> run_verification(const Lattice& lat, int step, const std::vector<double>& betas,
                                               Index max_dim, bool inject_fault, int threads) {
  const int v = lat.num_vertices();
  std::vector<CheckLine> lines;
  if (step < 0 || step > v) throw ValidationError("step: must lie in [0, " + std::to_string(v) + "]");
  if (inject_fault && lat.edges().empty())
    throw ValidationError("inject-fault: needs a lattice with at least one bond");

  std::vector<SectorOperator> ham;
  for (int r = 0; r <= v; ++r) ham.push_back(assemble_hamiltonian(lat, r, max_dim));

  // Intertwining for every pair s <= r.
  {
    bool ok = true;
    std::int64_t worst = 0;
    std::string first_bad;
    for (int r = 0; r <= v; ++r) {
      for (int s = 0; s <= r; ++s) {
        const auto t = assemble_intertwiner(v, r, s, max_dim);
        IntertwiningCheck chk;
        if (inject_fault && r == 1 && s == 0) {
          SectorOperator corrupted = ham[1];
          corrupted.matrix.stored(0, 0) += 1;
          chk = check_intertwining(ham[0], t, corrupted);
        } else {
          chk = check_intertwining(ham[static_cast<std::size_t>(s)], t, ham[static_cast<std::size_t>(r)]);
        }
        worst = std::max(worst, chk.max_residual);
        if (!chk.holds && ok) first_bad = "first failure at r=" + std::to_string(r) + " s=" + std::to_string(s);
        ok = ok && chk.holds;
      }
    }
    lines.push_back({"intertwining H_s T^{r,s} = T^{r,s} H_r (all s <= r)", ok,
                     "max |residual| = " + std::to_string(worst) + (ok ? "" : "; " + first_bad)});
  }

  // Composition of inclusion maps.
  {
    bool ok = true;
    std::string detail = "exact";
    for (int r = 0; r <= v && ok; ++r)
      for (int s = 0; s <= r && ok; ++s)
        for (int t = 0; t <= s && ok; ++t) {
          try {
            const auto c = compose_intertwiners(assemble_intertwiner(v, s, t, max_dim),
                                                assemble_intertwiner(v, r, s, max_dim));
            if (c.factor != static_cast<std::int64_t>(binomial(r - t, s - t))) {
              ok = false;
              detail = "factor " + std::to_string(c.factor) + " at r=" + std::to_string(r);
            }
          } catch (const VerificationError& e) {
            ok = false;
            detail = e.what();
          }
        }
    lines.push_back({"composition T^{s,t} T^{r,s} = C(r-t, s-t) T^{r,t}", ok, detail});
  }

  // Spectral sanity.
  const auto spectra = all_sector_spectra(lat, max_dim, threads);
  {
    bool ok = true;
    std::size_t zero_modes = 0;
    double min_eig = 0.0;
    for (const auto& s : spectra) {
      const auto z = count_zero_modes(s.eigenvalues);
      zero_modes += z;
      if (!s.eigenvalues.empty()) min_eig = std::min(min_eig, s.eigenvalues.front());
      if (z != 1 || sector_trace(s, 0.0) != static_cast<double>(binomial(v, s.sector))) ok = false;
    }
    ok = ok && min_eig >= -kZeroEigenvalueTol && zero_modes == static_cast<std::size_t>(v + 1);
    lines.push_back({"spectral sanity (one zero mode per sector, psd, beta=0 traces)", ok,
                     "zero modes = " + std::to_string(zero_modes) + ", min eigenvalue = " + format_double(min_eig)});
  }

  // Kernel/range trace split and the shifted-sector identity.
  std::vector<std::optional<SplitSpectra>> splits(static_cast<std::size_t>(v) + 1);
  parallel_for(splits.size(), threads, [&](std::size_t i) {
    if (static_cast<int>(i) >= step) splits[i] = split_spectra(lat, static_cast<int>(i), step, max_dim);
  });
  {
    bool ok = true;
    double worst = 0.0;
    for (int i = step; i <= v; ++i) {
      for (double beta : betas) {
        const double full = sector_trace(spectra[static_cast<std::size_t>(i)], beta);
        const TraceSplit ts = split_trace(*splits[static_cast<std::size_t>(i)], beta);
        worst = std::max(worst, std::abs(ts.kernel + ts.range - full) / full);
      }
    }
    ok = worst <= 1e-10;
    lines.push_back({"kernel + range traces = sector trace (step " + std::to_string(step) + ")", ok,
                     "max relative residual = " + format_double(worst)});
  }
  for (int i = step; i <= v; ++i) {
    const auto chk = verify_range_trace(*splits[static_cast<std::size_t>(i)],
                                        spectra[static_cast<std::size_t>(i - step)], betas);
    const bool in_range = 2 * i - step <= v;
    const bool ok = chk.max_relative_residual <= 1e-10 && chk.spectra_match;
    std::string detail = "relative residual = " + format_double(chk.max_relative_residual) +
                         ", spectra " + (chk.spectra_match ? "match" : "differ");
    if (!in_range) detail += " (outside 2i - step <= v)";
    lines.push_back({"range trace of sector " + std::to_string(i) + " = trace of sector " + std::to_string(i - step),
                     ok || !in_range, detail, !in_range});
  }
  return lines;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Lattice lat = cfg.lattice();
  const int step = cfg.step.value_or(1);
  const auto betas = cfg.betas.empty() ? kDefaultVerifyBetas : cfg.betas;
  const auto lines = run_verification(lat, step, betas, cfg.max_dense_dim, cfg.inject_fault, cfg.threads);
  const bool all = std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& l : lines)
      arr.push_back({{"check", l.name}, {"pass", l.pass}, {"informational", l.informational}, {"detail", l.detail}});
    out << json{{"lattice", lat.label()}, {"step", step}, {"checks", arr}, {"all_pass", all}}.dump(2) << '\n';
  } else {
    out << "verify " << lat.label() << " (v=" << lat.num_vertices() << ", step=" << step << ")\n";
    for (const auto& l : lines)
      out << (l.informational ? "INFO  " : l.pass ? "PASS  " : "FAIL  ") << l.name << "  [" << l.detail << "]\n";
    out << (all ? "all checks passed" : "VERIFICATION FAILED") << '\n';
  }
  return all ? kOk : kVerification;
}

// ---------------------------------------------------------------------------

inline int default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-wave sector exact diagonalization for the Heisenberg ferromagnet", "spinwave"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<int> dims;
  std::string boundary;
  std::vector<double> betas;
  std::optional<int> step;
  std::vector<int> sectors;
  std::optional<double> factor;
  std::string format;
  std::string out_path;
  std::optional<int> threads;
  std::optional<Index> max_dim;
  std::optional<int> sector;
  std::vector<std::string> lattice_tokens;
  std::string export_mtx;
  bool inject_fault = false;

  app.add_option("--config", config_path, "JSON configuration document");
  app.add_option("--dims", dims, "side lengths, comma separated (e.g. 2,5)")->delimiter(',');
  app.add_option("--boundary", boundary, "open | periodic");
  app.add_option("--beta", betas, "inverse temperature (repeatable)")->delimiter(',');
  app.add_option("--step", step, "sector step k (default v/10)");
  app.add_option("--sectors", sectors, "first,last sector of the band")->delimiter(',')->expected(2);
  app.add_option("--factor", factor, "ratio factor (default 2)");
  app.add_option("--format", format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", out_path, "write output to PATH instead of stdout");
  app.add_option("--threads", threads, "worker threads (overrides SPINWAVE_THREADS)");
  app.add_option("--max-dense-dim", max_dim, "largest sector dimension for assembled/dense paths");

  auto* lattice_info = app.add_subcommand("lattice-info", "print the lattice as JSON");
  auto* spectrum = app.add_subcommand("spectrum", "sector eigenvalues as CSV/JSON");
  spectrum->add_option("--sector", sector, "single sector r (default: all)");
  spectrum->add_option("--export-mtx", export_mtx, "also write the sector Hamiltonian in Matrix Market format");
  auto* traces = app.add_subcommand("traces", "sector traces over a beta grid");
  auto* criterion = app.add_subcommand("criterion", "evaluate the sector-ratio criterion and kernel inequality");
  auto* verify = app.add_subcommand("verify", "exact and numerical identity checks");
  verify->add_flag("--inject-fault", inject_fault, "corrupt one operator entry (harness self-test)");
  auto* sweep = app.add_subcommand("sweep", "criterion over several lattices, one CSV table");
  sweep->add_option("--lattice", lattice_tokens, "lattice such as 2x5 or 3x3:periodic (repeatable)");

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    RunConfig cfg;
    cfg.threads = default_threads();
    if (!config_path.empty()) apply_config_document(load_config_file(config_path), cfg);
    const char* env = std::getenv("SPINWAVE_THREADS");
    if (env && !threads) {
      try {
        cfg.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw ValidationError("SPINWAVE_THREADS: not an integer");
      }
    }
    if (!dims.empty()) cfg.dims = dims;
    if (!boundary.empty()) cfg.boundary = parse_boundary(boundary);
    if (!betas.empty()) cfg.betas = betas;
    if (step) cfg.step = step;
    if (!sectors.empty()) cfg.sectors = {sectors[0], sectors[1]};
    if (factor) cfg.factor = *factor;
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.out = out_path;
    if (threads) cfg.threads = *threads;
    if (max_dim) cfg.max_dense_dim = *max_dim;
    if (sector) cfg.sector = sector;
    if (!lattice_tokens.empty()) {
      cfg.lattices.clear();
      for (const auto& tok : lattice_tokens) cfg.lattices.push_back(parse_lattice_token(tok));
    }
    cfg.export_mtx = export_mtx;
    cfg.inject_fault = inject_fault;
    if (cfg.threads < 1) throw ValidationError("threads: must be >= 1");
    if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv" && cfg.format != "text")
      throw ValidationError("format: expected json, csv or text");

    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ValidationError("out: cannot open \"" + cfg.out + "\"");
    }
    std::ostream& sink = cfg.out.empty() ? out : file;

    if (*lattice_info) return cmd_lattice_info(cfg, sink);
    if (*spectrum) return cmd_spectrum(cfg, sink);
    if (*traces) return cmd_traces(cfg, sink);
    if (*criterion) return cmd_criterion(cfg, sink);
    if (*verify) return cmd_verify(cfg, sink);
    if (*sweep) return cmd_sweep(cfg, sink);
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << '\n';
    return kVerification;
  }
}

}  // namespace spinwave::cli

#endif  // SPINWAVE_TOOLS_CLI_HPP
