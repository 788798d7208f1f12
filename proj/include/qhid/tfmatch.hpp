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

#include "qhid/statespace.hpp"
#include "qhid/sysid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qhid::tfmatch {

/// Coefficients of C (sI - A)^{-1} x0 = num(s) / den(s), descending powers.
/// den is monic with n + 1 entries; num holds one length-n vector per
/// output channel.
struct TransferCoeffs {
  Eigen::VectorXd den;
  std::vector<Eigen::VectorXd> num;

  int order() const noexcept { return static_cast<int>(den.size()) - 1; }
  int channels() const noexcept { return static_cast<int>(num.size()); }
};

/// Faddeev-LeVerrier: the same recursion gives the characteristic
/// polynomial and the adjugate sequence adj(sI - A) = sum_k M_k s^{n-k},
/// from which num_k = C M_k x0.
TransferCoeffs transfer_coeffs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c, const Eigen::VectorXd& x0);
TransferCoeffs transfer_coeffs(const statespace::StateSpaceModel& model);

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Unknowns of the identification problem and the map from a parameter
/// vector to the augmented model.
struct ParameterSpec {
  std::vector<std::string> names;
  std::vector<Bounds> bounds;
  std::function<statespace::AugmentedModel(const Eigen::VectorXd&)> builder;
  /// parameters whose sign flip is tested as a residual symmetry
  std::vector<int> sign_candidates;

  int size() const noexcept { return static_cast<int>(names.size()); }
  Eigen::VectorXd midpoint() const;
  /// state dimension of the model the builder produces
  int model_order() const;
};

/// Weighted coefficient mismatch between the model built from params and
/// the target: the n non-leading denominator entries followed by the n
/// numerator entries of every channel, each divided by max(1, |target|).
Eigen::VectorXd residual(const Eigen::VectorXd& params, const ParameterSpec& spec, const TransferCoeffs& target);

struct Solution {
  Eigen::VectorXd params;
  double residual_norm = 0.0;
  /// ratio of extreme singular values of the weighted Jacobian
  double condition = 0.0;
  int iterations = 0;
  int start = 0;
  bool converged = false;
  /// number of starts that landed in this equivalence class
  int members = 1;
};

struct SolveOptions {
  int starts = 200;
  std::uint64_t seed = 0;
  /// tried first, before the quasi-random starts
  std::vector<Eigen::VectorXd> initial_guesses;
  /// a start counts as a solution when its residual 2-norm is below this
  double tolerance = 1e-6;
  /// descent stops early once the residual is below this
  double polish_tolerance = 1e-11;
  int max_iterations = 300;
  /// when false, unconverged local minima are reported instead of failing
  bool require_convergence = true;
  double cluster_distance = 1e-6;
};

struct IdentificationResult {
  std::vector<std::string> names;
  /// one representative per equivalence class, ordered by residual then
  /// lexicographically by parameters
  std::vector<Solution> solutions;
  int best = -1;
  /// parameters whose sign flip leaves the residual unchanged
  std::vector<int> sign_symmetries;
  std::vector<std::string> equivalence_notes;
  /// residual norm per iteration for every start
  std::vector<std::vector<double>> histories;
  TransferCoeffs target;
  sysid::EraResult era;
  sysid::OrderSelection order_selection;
  /// true when the ERA order was set to the parameterized model order
  /// instead of the detected one
  bool order_forced = false;
  int converged_starts = 0;
};

/// Multistart damped Gauss-Newton (Levenberg-Marquardt) in the bounds box
/// from Halton points with a seeded rotation. Deterministic per seed.
IdentificationResult solve(const ParameterSpec& spec, const TransferCoeffs& target, const SolveOptions& options);

struct IdentifyOptions {
  int r = 20;
  int s = 100;
  double gap_ratio = 1e-6;
  SolveOptions solve;
};

/// build_hankel -> select_order -> era -> continuous_lift ->
/// transfer_coeffs -> solve.
IdentificationResult identify(const statespace::Trajectory& traj, const ParameterSpec& spec,
                              const IdentifyOptions& options);

}  // namespace qhid::tfmatch
