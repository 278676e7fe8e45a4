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

#include "qxcomp/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "qxcomp/csv.hpp"

namespace qxcomp::experiments {

namespace {

std::string fixed6(double x) {
  if (std::isinf(x)) return csv::format_double(x);
  return fmt::format("{:.6f}", x);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::ParseError, std::string("config field \"") + key + "\" has the wrong type");
  }
}

ProtocolOptions protocol_options(const ExperimentConfig& config, std::size_t n, double eps,
                                 std::uint32_t stream) {
  ProtocolOptions options;
  options.n = n;
  options.eps = eps;
  options.mode = config.mode;
  options.exact_cap = config.exact_cap;
  options.monte_carlo.trials = config.trials;
  options.monte_carlo.seed = config.seed;
  options.monte_carlo.stream = stream;
  options.monte_carlo.threads = config.threads;
  return options;
}

RunOutput render(const std::vector<ProtocolReport>& reports) {
  RunOutput out;
  out.csv = std::string(csv::kSchemaLine) + "\n" + report_csv_header() + "\n";
  out.sidecar = "# N pi_mass\n";
  out.json = nlohmann::json::array();
  for (const ProtocolReport& r : reports) {
    out.csv += report_csv_row(r) + "\n";
    out.sidecar += std::to_string(r.n) + " " + csv::format_double(r.pi_mass.estimate) + "\n";
    out.json.push_back(report_to_json(r));
  }
  return out;
}

}  // namespace

std::uint64_t default_exact_cap() {
  const char* env = std::getenv(kExactCapEnv);
  if (env == nullptr || *env == '\0') return kDefaultExactCap;
  try {
    std::size_t used = 0;
    const std::uint64_t cap = std::stoull(env, &used);
    if (used != std::string(env).size() || cap == 0) throw std::invalid_argument(env);
    return cap;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(kExactCapEnv) + " must be a positive integer, got '" + env + "'");
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  static const std::set<std::string> known = {
      "rho0_path", "sigma0_path", "distribution_path", "probs",  "kind",        "N_list",
      "eps",       "eps_list",    "mode",              "trials", "seed",        "exact_cap",
      "threads",   "output_path"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::ParseError, "unknown config field \"" + key + "\"");
  }

  ExperimentConfig c;
  c.exact_cap = default_exact_cap();
  if (j.contains("rho0_path")) c.rho0_path = resolve(base_dir, get_field<std::string>(j, "rho0_path"));
  if (j.contains("sigma0_path")) c.sigma0_path = resolve(base_dir, get_field<std::string>(j, "sigma0_path"));
  if (j.contains("distribution_path")) {
    c.distribution_path = resolve(base_dir, get_field<std::string>(j, "distribution_path"));
  }
  if (j.contains("probs")) c.probs = get_field<std::vector<double>>(j, "probs");
  if (j.contains("kind")) c.kind = typicality_from_string(get_field<std::string>(j, "kind"));
  if (j.contains("N_list")) c.n_list = get_field<std::vector<std::size_t>>(j, "N_list");
  if (j.contains("eps")) c.eps = get_field<double>(j, "eps");
  if (j.contains("eps_list")) c.eps_list = get_field<std::vector<double>>(j, "eps_list");
  if (j.contains("mode")) c.mode = length_mode_from_string(get_field<std::string>(j, "mode"));
  if (j.contains("trials")) c.trials = get_field<std::uint64_t>(j, "trials");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("exact_cap")) c.exact_cap = get_field<std::uint64_t>(j, "exact_cap");
  if (j.contains("threads")) c.threads = get_field<unsigned>(j, "threads");
  if (j.contains("output_path")) c.output_path = resolve(base_dir, get_field<std::string>(j, "output_path"));
  return c;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path), path.parent_path());
}

void validate(const ExperimentConfig& config) {
  if (config.n_list.empty()) throw Error(ErrorCode::InvalidArgument, "N_list must not be empty");
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    if (config.n_list[i] == 0) throw Error(ErrorCode::InvalidArgument, "N_list entries must be positive");
    if (i > 0 && config.n_list[i] <= config.n_list[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "N_list must be strictly ascending");
    }
  }
  if (config.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (!(config.eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  for (double e : config.eps_list) {
    if (!(e > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_list entries must be positive");
  }
  if (config.exact_cap == 0) throw Error(ErrorCode::InvalidArgument, "exact_cap must be positive");
  if (config.threads == 0) throw Error(ErrorCode::InvalidArgument, "threads must be at least 1");
}

QuantumSource load_source(const std::filesystem::path& path) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "no source file given");
  try {
    return source_from_json(read_json_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

Distribution load_distribution(const ExperimentConfig& config) {
  if (!config.probs.empty()) return Distribution(config.probs);
  if (config.distribution_path.empty()) {
    throw Error(ErrorCode::InvalidArgument, "typical-mass needs \"probs\" or \"distribution_path\"");
  }
  return distribution_from_json(read_json_file(config.distribution_path));
}

std::string entropy_text(const QuantumSource& src) {
  std::string out = "S = " + fixed6(von_neumann_entropy(src)) + "\n";
  out += "eigenvalues =";
  for (double lambda : src.spectrum().eigenvalues) out += " " + fixed6(lambda);
  return out + "\n";
}

std::string rates_text(const QuantumSource& rho0, const QuantumSource& sigma0) {
  if (rho0.dim() != sigma0.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "rho0 and sigma0 have different dimensions");
  }
  const double s_cross = quantum_cross_entropy(rho0, sigma0);
  std::uint32_t log_d = 0;
  while ((std::size_t{1} << log_d) < rho0.dim()) ++log_d;
  std::string out;
  out += "S_rho = " + fixed6(von_neumann_entropy(rho0)) + "\n";
  out += "S_sigma = " + fixed6(von_neumann_entropy(sigma0)) + "\n";
  out += "S_cross = " + fixed6(s_cross) + "\n";
  out += "log2_D_ceil = " + std::to_string(log_d) + "\n";
  out += std::string("fallback_recommended = ") + (s_cross >= log_d ? "yes" : "no") + "\n";
  return out;
}

std::string typical_mass_csv(const ExperimentConfig& config) {
  validate(config);
  const Distribution p = load_distribution(config);
  std::string out = std::string(csv::kSchemaLine) + "\n" + mass_csv_header() + "\n";
  for (std::size_t cell = 0; cell < config.n_list.size(); ++cell) {
    const std::size_t n = config.n_list[cell];
    MassEstimate m;
    bool exact = true;
    try {
      require_within_exact_cap(p.size(), n, config.exact_cap);
    } catch (const Error&) {
      exact = false;
    }
    if (exact) {
      m = typical_mass_exact(n, p, config.eps, config.kind, config.exact_cap);
    } else {
      MonteCarloOptions mc{config.trials, config.seed, static_cast<std::uint32_t>(cell), config.threads};
      m = typical_mass_mc(n, p, config.eps, config.kind, mc);
    }
    out += mass_csv_row(n, config.eps, config.kind, m) + "\n";
  }
  return out;
}

RunOutput simulate(const ExperimentConfig& config, const QuantumSource& rho0,
                   const QuantumSource& sigma0) {
  validate(config);
  std::vector<ProtocolReport> reports;
  for (std::size_t cell = 0; cell < config.n_list.size(); ++cell) {
    reports.push_back(protocol_report(
        rho0, sigma0,
        protocol_options(config, config.n_list[cell], config.eps, static_cast<std::uint32_t>(cell))));
  }
  return render(reports);
}

RunOutput sweep(const ExperimentConfig& config, const QuantumSource& rho0,
                const QuantumSource& sigma0) {
  validate(config);
  const std::vector<double> eps_list = config.eps_list.empty() ? std::vector<double>{config.eps}
                                                               : config.eps_list;
  std::vector<ProtocolReport> reports;
  std::uint32_t cell = 0;
  for (std::size_t n : config.n_list) {
    for (double eps : eps_list) {
      reports.push_back(protocol_report(rho0, sigma0, protocol_options(config, n, eps, cell)));
      ++cell;
    }
  }
  return render(reports);
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::SupportMismatch:
    case ErrorCode::DomainError:
    case ErrorCode::EmptyProjector:
    case ErrorCode::SizeOverflow:
      return 3;
    default:
      return 2;
  }
}

}  // namespace qxcomp::experiments
