// Copyright 2026 The lossyboson Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. run_cli() is the whole program; the tools/ binary
// only forwards argv.
//
// Exit codes: 0 success, 1 failed validation, 2 usage or parse error,
// 3 hypothesis or limit violation.
#pragma once

#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lossyboson/bench.hpp"
#include "lossyboson/complexmat.hpp"
#include "lossyboson/errors.hpp"
#include "lossyboson/fock.hpp"
#include "lossyboson/io.hpp"
#include "lossyboson/lossy.hpp"
#include "lossyboson/network.hpp"
#include "lossyboson/oracle.hpp"
#include "lossyboson/random.hpp"
#include "lossyboson/sampler.hpp"
#include "lossyboson/validate.hpp"

namespace lossyboson::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kHypothesis = 3 };

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  DeskLimits desk_limits;
  std::string out;  // empty: standard output
};

namespace detail {

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

inline LossyNetwork load_network(const std::string& path) { return io::network_from_json(io::parse(io::read_file(path))); }

inline UnitaryMatrix load_unitary(const std::string& path) { return io::unitary_from_json(io::parse(io::read_file(path))); }

inline std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, colon)), hi = std::stoi(item.substr(colon + 1));
        for (int n = lo; n <= hi; ++n) out.push_back(n);
      }
    } catch (const std::exception&) {
      throw ParseError("bad size list '" + text + "' (use e.g. 4,6,8 or 4:12)");
    }
  }
  if (out.empty()) throw ParseError("empty size list");
  return out;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Simulation of lossy linear-optical boson sampling", "lossyboson"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string desk_limits;
  app.add_option("--desk-limits", desk_limits,
                 "Oracle size limits as key=value,... (default from LOSSY_BOSON_DESK_LIMITS)");

  // net
  auto* net = app.add_subcommand("net", "Build, extract or inspect lossy networks");
  net->require_subcommand(1);
  std::string geometry = "reck", in_path;
  int modes = 0;
  double eta = 1.0;
  auto* build = net->add_subcommand("build", "Emit a network file");
  build->add_option("--geometry", geometry, "reck, clements, or file (re-emit --in canonically)")
      ->check(CLI::IsMember({"reck", "clements", "file"}));
  build->add_option("--modes", modes, "Number of modes");
  build->add_option("--eta", eta, "Arm transmissivity of every element");
  build->add_option("--seed", cfg.seed, "Seed for the element angles");
  build->add_option("--in", in_path, "Network file for --geometry file");
  build->add_option("--out", cfg.out, "Output file (default stdout)");
  auto* extract = net->add_subcommand("extract", "Pull the losses of a network to the front");
  extract->add_option("--in", in_path, "Network file")->required();
  extract->add_option("--out", cfg.out, "Output file (default stdout)");
  auto* paths = net->add_subcommand("paths", "Report shortest and least lossy input-output paths");
  paths->add_option("--in", in_path, "Network file")->required();
  paths->add_option("--out", cfg.out, "Output file (default stdout)");

  // unitary
  auto* unitary = app.add_subcommand("unitary", "Emit a unitary file (random, or composed from a lossless network)");
  std::string network_path;
  unitary->add_option("--modes", modes, "Dimension of a random unitary");
  unitary->add_option("--network", network_path, "Lossless network to compose instead");
  unitary->add_option("--seed", cfg.seed, "Seed of the random unitary");
  unitary->add_option("--out", cfg.out, "Output file (default stdout)");

  // prob
  auto* prob = app.add_subcommand("prob", "Exact transition probability and its cost estimate");
  std::string unitary_path, input_text, output_text;
  auto* prob_u = prob->add_option("--unitary", unitary_path, "Unitary file");
  auto* prob_n = prob->add_option("--network", network_path, "Lossless network file");
  prob_u->excludes(prob_n);
  prob->add_option("--input", input_text, "Input occupations, e.g. 1,1,0")->required();
  prob->add_option("--output", output_text, "Output occupations")->required();
  prob->add_option("--out", cfg.out, "Output file (default stdout)");

  // sample
  auto* samp = app.add_subcommand("sample", "Draw samples (exact sampler, or the lossy pipeline for lossy networks)");
  std::uint64_t shots = 1000;
  std::string strategy = "single-bin", cert_path, report_path;
  double c = 1.0;
  PipelineOptions popts;
  unsigned threads = 1;
  auto* samp_u = samp->add_option("--unitary", unitary_path, "Unitary file");
  auto* samp_n = samp->add_option("--network", network_path, "Network file");
  samp_u->excludes(samp_n);
  samp->add_option("--input", input_text, "Input occupations, e.g. 1,1,0")->required();
  samp->add_option("--shots", shots, "Number of samples")->check(CLI::PositiveNumber);
  samp->add_option("--seed", cfg.seed, "Run seed");
  samp->add_option("--strategy", strategy, "Approximation strategy for lossy networks")
      ->check(CLI::IsMember({"single-bin", "survivors"}));
  samp->add_option("--c", c, "Short-path threshold: inputs with s_i < c ln n stay exact");
  samp->add_option("--kappa", popts.kappa, "Budget: at most kappa ln n short-path inputs");
  samp->add_option("--threads", threads, "Worker threads (output does not depend on it)");
  samp->add_option("--out", cfg.out, "CSV output file (default stdout)");
  samp->add_option("--certificate", cert_path, "Certificate JSON file (lossy networks)");
  samp->add_option("--report", report_path, "Instrumentation report JSON file");

  // validate
  auto* val = app.add_subcommand("validate", "Run an invariant battery against the oracles");
  std::string suite;
  val->add_option("suite", suite, "permanents, marginals, extraction, sampler or lossy")->required();
  val->add_option("--seed", cfg.seed, "Battery seed");

  // bench
  auto* bench = app.add_subcommand("bench", "Sweep input sizes and count sampler work");
  std::string cls_name = "A", sizes_text = "4:12";
  int bench_modes = 12;
  std::uint64_t bench_shots = 20;
  bench->add_option("--class", cls_name, "A, B, C or general")->check(CLI::IsMember({"A", "B", "C", "general"}));
  bench->add_option("--sizes", sizes_text, "Photon numbers, e.g. 4,6,8 or 4:12");
  bench->add_option("--modes", bench_modes, "Number of modes (fixed over the sweep)");
  bench->add_option("--c", c, "Constant of the class B/C single-photon budget");
  bench->add_option("--shots", bench_shots, "Samples per size")->check(CLI::PositiveNumber);
  bench->add_option("--seed", cfg.seed, "Run seed");
  bench->add_option("--out", cfg.out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.desk_limits = desk_limits.empty() ? DeskLimits::from_environment() : DeskLimits::from_string(desk_limits);

    if (net->parsed()) {
      if (build->parsed()) {
        std::optional<LossyNetwork> result;
        if (geometry == "file") {
          if (in_path.empty()) throw ParseError("--geometry file needs --in");
          result = detail::load_network(in_path);
        } else {
          if (modes < 2) throw ParseError("--modes must be >= 2");
          result = geometry == "reck" ? build_reck(modes, eta, cfg.seed) : build_clements(modes, eta, cfg.seed);
        }
        detail::emit(cfg.out, io::dump(io::to_json(*result)) + "\n", out);
      } else if (extract->parsed()) {
        const ExtractionResult r = extract_losses(detail::load_network(in_path));
        detail::emit(cfg.out, io::dump(io::to_json(r)) + "\n", out);
      } else {
        const LossyNetwork n = detail::load_network(in_path);
        const ExtractionResult r = extract_losses(n);
        const PathSummary brute = enumerate_paths(n);
        std::vector<int> enumerated;
        for (int v : brute.min_length) enumerated.push_back(v == std::numeric_limits<int>::max() ? 0 : v);
        io::json j{{"exponents", shortest_paths(n)},
                   {"enumerated_min_length", enumerated},
                   {"front", r.front.values()},
                   {"enumerated_max_product", brute.max_product},
                   {"paths", brute.paths}};
        detail::emit(cfg.out, io::dump(j) + "\n", out);
      }
      return kOk;
    }

    if (unitary->parsed()) {
      UnitaryMatrix u = UnitaryMatrix::identity(1);
      if (!network_path.empty()) {
        u = compose_unitary(detail::load_network(network_path));
      } else {
        if (modes < 1) throw ParseError("--modes must be >= 1");
        u = UnitaryMatrix::random(modes, cfg.seed);
      }
      detail::emit(cfg.out, io::dump(io::to_json(u)) + "\n", out);
      return kOk;
    }

    if (prob->parsed()) {
      if (unitary_path.empty() && network_path.empty()) throw ParseError("prob needs --unitary or --network");
      const UnitaryMatrix u =
          unitary_path.empty() ? compose_unitary(detail::load_network(network_path)) : detail::load_unitary(unitary_path);
      const OccupationVector s = io::parse_occupation(input_text), t = io::parse_occupation(output_text);
      if (s.modes() != u.dim() || t.modes() != u.dim()) throw ParseError("occupation length differs from the unitary");
      if (s.photons() != t.photons()) throw ParseError("input and output photon numbers differ");
      const CostModel cost = cost_estimate(s, t);
      io::json j{{"input", io::to_json(s)},
                 {"output", io::to_json(t)},
                 {"probability", transition_probability(u, s, t)},
                 {"tau_st", cost.tau_st},
                 {"tau_global", cost.tau_global}};
      detail::emit(cfg.out, io::dump(j) + "\n", out);
      return kOk;
    }

    if (samp->parsed()) {
      if (unitary_path.empty() && network_path.empty()) throw ParseError("sample needs --unitary or --network");
      const OccupationVector s = io::parse_occupation(input_text);
      std::string csv = io::csv_header();
      if (!network_path.empty()) {
        const LossyNetwork n = detail::load_network(network_path);
        if (s.modes() != n.modes()) throw ParseError("input length differs from the network");
        if (!n.lossless()) {
          const UnbalancedSimulator sim(n, s, strategy_by_name(strategy), c, popts);
          std::uint64_t perms = 0, survivors = 0;
          for (std::uint64_t i = 0; i < shots; ++i) {
            Rng rng(substream_seed(cfg.seed, i));
            const PipelineSample x = sim.sample(rng);
            perms += x.permanent_evaluations;
            survivors += static_cast<std::uint64_t>(x.emitted_input.photons());
            csv += io::csv_row(i, x.outcome, x.raw.probability);
          }
          detail::emit(cfg.out, csv, out);
          if (!cert_path.empty()) io::write_file(cert_path, io::dump(io::to_json(sim.certificate())) + "\n");
          if (!report_path.empty()) {
            io::json j{{"shots", shots},
                       {"permanent_evaluations", perms},
                       {"sampled_modes", sim.sampled_modes()},
                       {"lossless_modes", sim.lossless_modes()},
                       {"lossy_modes", sim.lossy_modes()},
                       {"mean_emitted_photons", static_cast<double>(survivors) / static_cast<double>(shots)}};
            io::write_file(report_path, io::dump(j) + "\n");
          }
          return kOk;
        }
        unitary_path.clear();
      }
      const UnitaryMatrix u =
          unitary_path.empty() ? compose_unitary(detail::load_network(network_path)) : detail::load_unitary(unitary_path);
      if (s.modes() != u.dim()) throw ParseError("input length differs from the unitary");
      const BatchResult batch = sample_batch(u, s, shots, cfg.seed, threads);
      for (std::uint64_t i = 0; i < shots; ++i)
        csv += io::csv_row(i, batch.samples[i].outcome, batch.samples[i].probability);
      detail::emit(cfg.out, csv, out);
      if (!report_path.empty()) io::write_file(report_path, io::dump(io::to_json(batch.report)) + "\n");
      return kOk;
    }

    if (val->parsed()) {
      const SuiteReport rep = run_suite(suite, cfg.seed, cfg.desk_limits);
      for (const auto& chk : rep.checks)
        out << (chk.passed ? "PASS " : "FAIL ") << chk.name << " (" << chk.detail << ")\n";
      out << rep.suite << ": " << (rep.passed() ? "pass" : "FAIL") << "\n";
      return rep.passed() ? kOk : kValidationFailed;
    }

    if (bench->parsed()) {
      const auto rows = run_bench(parse_input_class(cls_name), detail::parse_sizes(sizes_text), bench_modes, c,
                                  bench_shots, cfg.seed);
      std::string csv = bench_csv_header();
      for (const auto& r : rows) csv += bench_csv_row(r);
      detail::emit(cfg.out, csv, out);
      return kOk;
    }
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesis;
  } catch (const LimitError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesis;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesis;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace lossyboson::cli
