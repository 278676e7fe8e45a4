// Copyright 2026 The qxcomp Authors
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

// qxcomp: rates, typical-set masses and mismatched-source compression runs.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qxcomp/experiments.hpp"

namespace qx = qxcomp;
namespace ex = qxcomp::experiments;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<double> eps;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::uint64_t> exact_cap;
  std::optional<unsigned> threads;
  std::optional<std::string> rho0;
  std::optional<std::string> sigma0;
  std::optional<std::string> dist;
  std::optional<std::string> kind;
  std::vector<std::size_t> n_list;
  std::vector<double> eps_list;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per cell");
  cmd->add_option("--eps", o.eps, "Window half-width");
  cmd->add_option("--mode", o.mode, "Codeword lengths: real or integer");
  cmd->add_option("--out", o.out, "Output CSV path (default stdout)");
  cmd->add_option("--exact-cap", o.exact_cap, "Largest D^N handled by exact enumeration");
  cmd->add_option("--threads", o.threads, "Monte Carlo worker threads");
  cmd->add_option("--N", o.n_list, "Copy counts, ascending");
}

ex::ExperimentConfig resolve_config(const Overrides& o) {
  ex::ExperimentConfig c;
  if (!o.config_path.empty()) {
    c = ex::load_config(o.config_path);
  } else {
    c.exact_cap = ex::default_exact_cap();
  }
  if (o.seed) c.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  if (o.eps) c.eps = *o.eps;
  if (o.mode) c.mode = qx::length_mode_from_string(*o.mode);
  if (o.out) c.output_path = *o.out;
  if (o.exact_cap) c.exact_cap = *o.exact_cap;
  if (o.threads) c.threads = *o.threads;
  if (o.rho0) c.rho0_path = *o.rho0;
  if (o.sigma0) c.sigma0_path = *o.sigma0;
  if (o.dist) c.distribution_path = *o.dist;
  if (o.kind) c.kind = qx::typicality_from_string(*o.kind);
  if (!o.n_list.empty()) c.n_list = o.n_list;
  if (!o.eps_list.empty()) c.eps_list = o.eps_list;
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qx::Error(qx::ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

void emit(const ex::ExperimentConfig& config, const std::string& text) {
  if (config.output_path.empty()) {
    std::cout << text;
  } else {
    write_text(config.output_path, text);
  }
}

void emit_run(const ex::ExperimentConfig& config, const ex::RunOutput& run) {
  emit(config, run.csv);
  if (!config.output_path.empty()) {
    write_text(config.output_path.string() + ".dat", run.sidecar);
    write_text(config.output_path.string() + ".json", run.json.dump(2) + "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum data compression with a mismatched source model"};
  app.require_subcommand(1);

  std::string entropy_path;
  auto* entropy = app.add_subcommand("entropy", "Von Neumann entropy of a density matrix");
  entropy->add_option("source", entropy_path, "Density matrix JSON")->required();

  std::string rates_rho, rates_sigma;
  auto* rates = app.add_subcommand("rates", "S(rho), S(sigma), S(rho, sigma) and the fallback rate");
  rates->add_option("rho0", rates_rho, "True source JSON")->required();
  rates->add_option("sigma0", rates_sigma, "Believed source JSON")->required();

  Overrides mass_o;
  auto* mass = app.add_subcommand("typical-mass", "Probability of the strong/weak typical set");
  add_run_flags(mass, mass_o);
  mass->add_option("--dist", mass_o.dist, "Distribution JSON {\"probs\": [...]}");
  mass->add_option("--kind", mass_o.kind, "strong or weak");

  Overrides sim_o;
  auto* sim = app.add_subcommand("simulate", "Protocol report per N");
  add_run_flags(sim, sim_o);
  sim->add_option("--rho0", sim_o.rho0, "True source JSON");
  sim->add_option("--sigma0", sim_o.sigma0, "Believed source JSON");

  Overrides sweep_o;
  auto* sweep = app.add_subcommand("sweep", "Protocol reports over N x eps");
  add_run_flags(sweep, sweep_o);
  sweep->add_option("--rho0", sweep_o.rho0, "True source JSON");
  sweep->add_option("--sigma0", sweep_o.sigma0, "Believed source JSON");
  sweep->add_option("--eps-list", sweep_o.eps_list, "Window half-widths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*entropy) {
      std::cout << ex::entropy_text(ex::load_source(entropy_path));
    } else if (*rates) {
      std::cout << ex::rates_text(ex::load_source(rates_rho), ex::load_source(rates_sigma));
    } else if (*mass) {
      const auto config = resolve_config(mass_o);
      emit(config, ex::typical_mass_csv(config));
    } else if (*sim) {
      const auto config = resolve_config(sim_o);
      ex::validate(config);
      emit_run(config, ex::simulate(config, ex::load_source(config.rho0_path),
                                    ex::load_source(config.sigma0_path)));
    } else if (*sweep) {
      const auto config = resolve_config(sweep_o);
      ex::validate(config);
      emit_run(config, ex::sweep(config, ex::load_source(config.rho0_path),
                                 ex::load_source(config.sigma0_path)));
    }
  } catch (const qx::Error& e) {
    std::cerr << "qxcomp: " << e.what() << "\n";
    return ex::exit_code_for(e.code());
  }
  return 0;
}
