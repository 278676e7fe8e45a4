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

#pragma once

// Reproducible experiment runs behind the qxcomp command-line tool. Each
// command renders its whole output as text so runs can be compared byte for
// byte.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qxcomp/error.hpp"
#include "qxcomp/protocol.hpp"
#include "qxcomp/source_coding.hpp"
#include "qxcomp/typicality.hpp"

namespace qxcomp::experiments {

inline constexpr const char* kExactCapEnv = "QXCOMP_EXACT_CAP";

struct ExperimentConfig {
  std::filesystem::path rho0_path;
  std::filesystem::path sigma0_path;
  /// Source distribution for typical-mass runs: a file or inline probabilities.
  std::filesystem::path distribution_path;
  std::vector<double> probs;
  Typicality kind = Typicality::Strong;
  std::vector<std::size_t> n_list;
  double eps = 0.1;
  /// Sweep only; empty means {eps}.
  std::vector<double> eps_list;
  LengthMode mode = LengthMode::Real;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::uint64_t exact_cap = kDefaultExactCap;
  unsigned threads = 1;
  std::filesystem::path output_path;
};

/// Default cap honouring QXCOMP_EXACT_CAP. Throws InvalidArgument on a bad value.
std::uint64_t default_exact_cap();

/// Relative paths are resolved against base_dir. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// N_list nonempty and strictly ascending, trials >= 1, eps (and eps_list) > 0.
void validate(const ExperimentConfig& config);

nlohmann::json read_json_file(const std::filesystem::path& path);
QuantumSource load_source(const std::filesystem::path& path);
Distribution load_distribution(const ExperimentConfig& config);

/// "S = x.xxxxxx" and the eigenvalues.
std::string entropy_text(const QuantumSource& src);
/// S_rho, S_sigma, S_cross, ceil(log2 D) and the fallback flag, one per line.
std::string rates_text(const QuantumSource& rho0, const QuantumSource& sigma0);

/// Versioned mass CSV, one row per N.
std::string typical_mass_csv(const ExperimentConfig& config);

struct RunOutput {
  std::string csv;
  /// Two columns (N, pi_mass) for gnuplot.
  std::string sidecar;
  nlohmann::json json;
};

/// One report per N; cell i uses Monte Carlo stream i.
RunOutput simulate(const ExperimentConfig& config, const QuantumSource& rho0,
                   const QuantumSource& sigma0);
/// Reports over N_list x eps_list, N outermost; cell index i_N * |eps_list| + i_eps.
RunOutput sweep(const ExperimentConfig& config, const QuantumSource& rho0,
                const QuantumSource& sigma0);

/// 0 success, 2 input/config error, 3 numerical failure.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace qxcomp::experiments
