// Copyright 2026 The qhid Authors
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

#include "qhid/config.hpp"
#include "qhid/error.hpp"
#include "qhid/liealg.hpp"
#include "qhid/noisemodel.hpp"
#include "qhid/statespace.hpp"
#include "qhid/tfmatch.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qhid::cli {

using ParameterValues = std::map<std::string, double>;

/// A parsed config resolved against its basis: observables expanded, the
/// accessible set fixed, and model builders for ground truth and for the
/// identification unknowns.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const noexcept { return config_; }
  const liealg::BasisSet& basis() const noexcept { return *basis_; }
  const std::vector<int>& accessible() const noexcept { return accessible_; }
  const std::vector<Eigen::VectorXd>& observables() const noexcept { return observables_; }

  /// Ground-truth values of every declared parameter. Throws a config error
  /// when one is marked unknown.
  ParameterValues true_values() const;

  liealg::HamiltonianCoeffs hamiltonian(const ParameterValues& values) const;
  statespace::StateSpaceModel quantum_model(const ParameterValues& values) const;

  /// Noise order of the configured (true) noise; 0 without noise.
  int noise_order() const;
  /// Shaping filter in the model time unit. Only for PSD-specified noise.
  noisemodel::NoiseTransfer noise_transfer() const;
  /// Configured noise realization; order 0 without noise.
  noisemodel::NoiseRealization noise_realization() const;

  statespace::AugmentedModel true_model() const;

  /// Unknowns: bounded parameters in declaration order, then the noise
  /// parameters for `noise_order` (defaults to identify.noise_order, which
  /// defaults to the true order).
  tfmatch::ParameterSpec parameter_spec(std::optional<int> noise_order = std::nullopt) const;

 private:
  ExperimentConfig config_;
  std::shared_ptr<const liealg::BasisSet> basis_;
  std::vector<Eigen::VectorXd> observables_;
  std::vector<int> accessible_;
};

struct SimulationOutput {
  statespace::Trajectory measured;
  statespace::Trajectory clean;
  statespace::AugmentedModel truth;
};

SimulationOutput run_simulation(const Experiment& exp);

tfmatch::IdentifyOptions identify_options(const ExperimentConfig& config);

struct NoiseCheckOutput {
  Eigen::VectorXd omega;
  Eigen::VectorXd theory;
  Eigen::VectorXd welch_tf;
  Eigen::VectorXd welch_realization;
};

NoiseCheckOutput run_noise_check(const Experiment& exp);

/// Flag overrides shared by the subcommands.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
};

void apply_overrides(ExperimentConfig& config, const Overrides& o, const std::string& command);

/// Subcommands. Each writes its artifacts into out_dir and returns a short
/// human-readable summary.
std::string cmd_simulate(const ExperimentConfig& config, const std::string& out_dir);
std::string cmd_identify(const ExperimentConfig& config, const std::string& trajectory_csv, const std::string& out_dir);
std::string cmd_noise_check(const ExperimentConfig& config, const std::string& out_dir);
void cmd_basis(const ExperimentConfig& config, std::ostream& out);

/// 2 for config and I/O problems, 3 for numerical failures.
int exit_code(const Error& e) noexcept;

}  // namespace qhid::cli
