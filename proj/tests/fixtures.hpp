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

// Shared inputs: the two-qubit coupled system measured through X on the
// first qubit, and its colored-noise model.

#include "qhid/liealg.hpp"
#include "qhid/noisemodel.hpp"
#include "qhid/statespace.hpp"

#include <string>
#include <vector>

namespace fixture {

inline constexpr double kOmega1 = 1.3;
inline constexpr double kOmega2 = 2.4;
inline constexpr double kDelta1 = 4.3;

inline qhid::liealg::HamiltonianCoeffs two_qubit_h(double w1 = kOmega1, double w2 = kOmega2, double d = kDelta1) {
  static const auto basis = qhid::liealg::pauli_basis(2);
  qhid::liealg::HamiltonianCoeffs h;
  h.a = Eigen::VectorXd::Zero(basis->size());
  h.a(basis->index_of("ZI")) = 0.5 * w1;
  h.a(basis->index_of("IZ")) = 0.5 * w2;
  h.a(basis->index_of("XX")) = 0.5 * d;
  h.a(basis->index_of("YY")) = 0.5 * d;
  h.basis = basis;
  return h;
}

inline Eigen::VectorXd unit(const qhid::liealg::BasisSet& b, const std::string& label, double scale = 1.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(b.size());
  v(b.index_of(label)) = scale;
  return v;
}

inline qhid::statespace::StateSpaceModel two_qubit_model(double w1 = kOmega1, double w2 = kOmega2,
                                                         double d = kDelta1) {
  // structural accessible set, independent of the values
  const auto h = two_qubit_h(w1, w2, d);
  const auto& b = *h.basis;
  const std::vector<int> acc{b.index_of("XI"), b.index_of("YI"), b.index_of("ZX"), b.index_of("ZY")};
  return qhid::statespace::build_reduced_model(h, {unit(b, "XI")}, unit(b, "YI"), acc);
}

inline qhid::noisemodel::RationalPsd colored_psd() {
  Eigen::VectorXd num(2), den(3);
  num << 1.0e12, 4.0e26;
  den << 1.0, -3.999e13, 4.0e26;
  return {num, den};
}

/// Shaping filter (s - 20) / (s^2 + 0.1 s + 20), time in microseconds.
inline qhid::noisemodel::NoiseTransfer scaled_noise_tf() {
  return {Eigen::Vector2d(1.0, -20.0), Eigen::Vector2d(0.1, 20.0)};
}

inline qhid::statespace::AugmentedModel two_qubit_augmented() {
  const auto real = qhid::noisemodel::canonical_realization(scaled_noise_tf(), Eigen::Vector2d(0.015, 0.0));
  return qhid::statespace::augment(two_qubit_model(), real.as_model());
}

}  // namespace fixture
