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

#include "qhid/liealg.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qhid::statespace {

/// Continuous-time initial-state model dx/dt = A x, y = C x, x(0) = x0.
/// Used for the quantum coherence model, the noise realization and their
/// augmentation alike.
struct StateSpaceModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd C;
  Eigen::VectorXd x0;
  /// Basis index of each state component; empty for non-quantum states.
  std::vector<int> labels;

  int order() const noexcept { return static_cast<int>(A.rows()); }
  int outputs() const noexcept { return static_cast<int>(C.rows()); }
  /// Throws a shape error on inconsistent dimensions or non-finite entries.
  void validate() const;
};

/// Block-diagonal join of a quantum model (first quantum_dim states) and a
/// noise-expectation model (last noise_dim states).
struct AugmentedModel {
  StateSpaceModel model;
  int quantum_dim = 0;
  int noise_dim = 0;
};

struct DiscreteModel {
  Eigen::MatrixXd Ad;
  Eigen::MatrixXd C;
  Eigen::VectorXd x0;
  double dt = 0.0;
};

/// Uniformly sampled multi-channel record. samples is T x L, row k holds
/// the outputs at time k * dt.
struct Trajectory {
  double dt = 0.0;
  Eigen::MatrixXd samples;
  std::vector<std::string> channel_names;

  int steps() const noexcept { return static_cast<int>(samples.rows()); }
  int channels() const noexcept { return static_cast<int>(samples.cols()); }
  void validate() const;
};

enum class FiltrationMode {
  /// bracket only with basis directions present in H (a_m != 0)
  HamiltonianDirections,
  /// bracket with every basis element
  FullAlgebra,
};

/// A(j, l) = i * sum_m a_m C(m, mu_j, mu_l). Antisymmetric for a Hermitian
/// orthogonal basis.
Eigen::MatrixXd build_generator(const liealg::HamiltonianCoeffs& coeffs, std::span<const int> indices);

/// Saturated accessible set grown from the observable support, returned
/// in ascending basis order.
std::vector<int> filtration(std::span<const int> observable_indices,
                            const liealg::HamiltonianCoeffs& coeffs,
                            FiltrationMode mode = FiltrationMode::HamiltonianDirections);

/// Basis indices with a nonzero coefficient in any of the observables.
std::vector<int> observable_support(const std::vector<Eigen::VectorXd>& observables);

/// Reduced model on the filtration-closed set seeded by the observables.
/// observables hold basis coefficients (length M); x0_full is the full
/// coherence vector.
StateSpaceModel build_reduced_model(const liealg::HamiltonianCoeffs& coeffs,
                                    const std::vector<Eigen::VectorXd>& observables,
                                    const Eigen::VectorXd& x0_full,
                                    FiltrationMode mode = FiltrationMode::HamiltonianDirections);

/// Same, on an explicitly given accessible set.
StateSpaceModel build_reduced_model(const liealg::HamiltonianCoeffs& coeffs,
                                    const std::vector<Eigen::VectorXd>& observables,
                                    const Eigen::VectorXd& x0_full,
                                    std::span<const int> accessible);

AugmentedModel augment(const StateSpaceModel& quantum, const StateSpaceModel& noise);

Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

DiscreteModel discretize(const StateSpaceModel& model, double dt);

/// y(k) = C Ad^k x0 for k < steps, by repeated propagation. shot_sigma > 0
/// adds i.i.d. Gaussian perturbations (seeded, deterministic).
Trajectory simulate(const DiscreteModel& model, int steps, double shot_sigma = 0.0,
                    std::uint64_t seed = 0);

}  // namespace qhid::statespace
