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

#include <Eigen/Dense>

namespace qhid::sysid {

/// Block Hankel matrices H_rs(0) and H_rs(1) with consecutive spacing:
/// block (i, j) of H_rs(k) is y(k + i + j), an L x 1 column.
struct HankelPair {
  Eigen::MatrixXd H0;
  Eigen::MatrixXd H1;
  int r = 0;
  int s = 0;
  int L = 0;
  double dt = 0.0;

  /// The r + s samples the pair was built from, recovered from its blocks
  /// (T x L).
  Eigen::MatrixXd samples() const;
};

HankelPair build_hankel(const statespace::Trajectory& traj, int r, int s);

Eigen::VectorXd singular_values(const HankelPair& pair);

struct OrderSelection {
  int order = 0;
  /// false when no ratio fell below the gap threshold and the order was
  /// taken from the numerical rank instead
  bool clear_gap = true;
};

/// Smallest i with sigma_{i+1} / sigma_i < gap_ratio; falls back to the
/// numerical rank (sigma_i > eps * sigma_1 * max(rL, s)).
OrderSelection select_order(const Eigen::VectorXd& singular_values, double gap_ratio = 1e-6,
                            Eigen::Index max_dim = 0);

struct EraResult {
  Eigen::VectorXd singular_values;
  int order = 0;
  Eigen::MatrixXd Ad_hat;
  Eigen::MatrixXd C_hat;
  Eigen::VectorXd x0_hat;
  /// continuous-time generator; empty until continuous_lift
  Eigen::MatrixXd A_hat;
  double dt = 0.0;
  /// max_k ||C Ad^k x0 - y(k)|| over the samples in the Hankel pair
  double residual = 0.0;
};

/// Discrete realization of the given order from the SVD of H_rs(0).
EraResult era(const HankelPair& pair, int order);

/// A_hat = principal log(Ad_hat) / dt, realified.
EraResult continuous_lift(EraResult era);

/// Principal matrix logarithm of a real matrix, returned real. Throws
/// branch-ambiguity for eigenvalues on the closed negative real axis and
/// aliasing-suspected when the imaginary residue exceeds 1e-8.
Eigen::MatrixXd real_logm(const Eigen::MatrixXd& m);

/// Sampling guard on a known generator: throws aliasing-suspected when
/// dt * max|Im eig(A)| >= pi.
void require_unaliased(const Eigen::MatrixXd& a, double dt);

}  // namespace qhid::sysid
