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

// Experiment configuration. The on-disk format is YAML; the schema is
// documented in configs/README.md.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qhid::cli {

/// scale * (value of `param`), or just scale when param is empty. Used for
/// Hamiltonian terms, observable terms and initial expectations.
struct Term {
  std::string label;
  double scale = 1.0;
  std::string param;
  bool operator==(const Term&) const = default;
};

struct Observable {
  std::string name;
  std::vector<Term> terms;
  bool operator==(const Observable&) const = default;
};

struct ParameterDecl {
  std::string name;
  /// ground-truth value; absent means "unknown" (simulate refuses)
  std::optional<double> value;
  /// present iff the parameter is estimated by identify
  std::optional<std::pair<double, double>> bounds;
  bool operator==(const ParameterDecl&) const = default;
};

struct SystemConfig {
  /// "pauli" (qubits) or "gell-mann" (dim)
  std::string basis = "pauli";
  int qubits = 1;
  int dim = 2;
  /// "hamiltonian" or "full"
  std::string filtration = "hamiltonian";
  std::vector<Term> hamiltonian;
  std::vector<Observable> observables;
  std::vector<Term> initial;
  bool operator==(const SystemConfig&) const = default;
};

struct NoiseConfig {
  /// "none", "psd" or "realization"
  std::string source = "none";
  std::vector<double> psd_num;
  std::vector<double> psd_den;
  /// model time unit expressed in the PSD's time unit (1e-6: PSD in 1/s, model in us)
  double psd_time_unit = 1.0;
  /// "minimum_phase" or "template"
  std::string zero_selection = "minimum_phase";
  std::vector<int> zero_template;
  /// explicit realization, row-major E
  std::vector<std::vector<double>> E;
  std::vector<double> G;
  std::vector<double> xi0;
  bool operator==(const NoiseConfig&) const = default;
};

struct SamplingConfig {
  double dt = 0.1;
  double duration = 12.0;
  double shot_sigma = 0.0;
  std::uint64_t seed = 1;
  int steps() const;
  bool operator==(const SamplingConfig&) const = default;
};

struct IdentifyConfig {
  int r = 20;
  int s = 100;
  double gap_ratio = 1e-6;
  int starts = 200;
  std::uint64_t seed = 7;
  double tolerance = 1e-6;
  /// order of the parameterized noise model; -1 uses the true noise order
  int noise_order = -1;
  /// "companion" or "full"
  std::string noise_mode = "companion";
  std::vector<std::pair<double, double>> alpha_bounds;
  std::pair<double, double> entry_bounds{-50.0, 50.0};
  std::pair<double, double> xi0_bounds{-10.0, 10.0};
  bool operator==(const IdentifyConfig&) const = default;
};

struct NoiseCheckConfig {
  double dt = 0.02;
  int segment = 65536;
  int segments = 30;
  double overlap = 0.5;
  std::uint64_t seed = 3;
  bool operator==(const NoiseCheckConfig&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string time_unit = "1";
  SystemConfig system;
  std::vector<ParameterDecl> parameters;
  NoiseConfig noise;
  SamplingConfig sampling;
  IdentifyConfig identify;
  NoiseCheckConfig noise_check;
  bool operator==(const ExperimentConfig&) const = default;

  const ParameterDecl* find_parameter(std::string_view name) const;
};

/// Throws Error(Config) with a message naming the offending key.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);
std::string emit_config(const ExperimentConfig& config);

}  // namespace qhid::cli
