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

#include "qhid/statespace.hpp"

#include "qhid/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <random>
#include <set>

namespace qhid::statespace {

using liealg::cplx;

void StateSpaceModel::validate() const {
  if (A.rows() != A.cols()) throw Error(ErrorCode::Shape, "A must be square");
  if (C.cols() != A.rows()) throw Error(ErrorCode::Shape, "C column count must equal the state dimension");
  if (x0.size() != A.rows()) throw Error(ErrorCode::Shape, "x0 length must equal the state dimension");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != A.rows())
    throw Error(ErrorCode::Shape, "label count must equal the state dimension");
  if (!A.allFinite() || !C.allFinite() || !x0.allFinite())
    throw Error(ErrorCode::Shape, "model has non-finite entries");
}

void Trajectory::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::Length, "trajectory sample interval must be positive");
  if (samples.rows() < 2) throw Error(ErrorCode::Length, "trajectory needs at least 2 samples");
  if (!samples.allFinite()) throw Error(ErrorCode::Length, "trajectory has non-finite samples");
  if (!channel_names.empty() && static_cast<Eigen::Index>(channel_names.size()) != samples.cols())
    throw Error(ErrorCode::Shape, "channel name count does not match sample width");
}

Eigen::MatrixXd build_generator(const liealg::HamiltonianCoeffs& coeffs, std::span<const int> indices) {
  const auto& basis = *coeffs.basis;
  const int k = static_cast<int>(indices.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < k; ++l) {
      cplx acc{0.0, 0.0};
      for (int m = 0; m < basis.size(); ++m) {
        if (coeffs.a(m) == 0.0) continue;
        acc += coeffs.a(m) * basis.structure(m, indices[j], indices[l]);
      }
      const cplx entry = cplx(0.0, 1.0) * acc;
      if (std::abs(entry.imag()) >= 1e-9)
        throw Error(ErrorCode::InconsistentStructure,
                    "generator entry has imaginary part " + std::to_string(entry.imag()));
      a(j, l) = entry.real();
    }
  return a;
}

std::vector<int> filtration(std::span<const int> observable_indices, const liealg::HamiltonianCoeffs& coeffs,
                            FiltrationMode mode) {
  const auto& basis = *coeffs.basis;
  std::vector<int> directions;
  for (int m = 0; m < basis.size(); ++m)
    if (mode == FiltrationMode::FullAlgebra || coeffs.a(m) != 0.0) directions.push_back(m);

  std::set<int> found(observable_indices.begin(), observable_indices.end());
  std::vector<int> frontier(found.begin(), found.end());
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int g : frontier)
      for (int h : directions)
        for (int l = 0; l < basis.size(); ++l)
          if (std::abs(basis.structure(g, h, l)) > 1e-12 && found.insert(l).second) next.push_back(l);
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

std::vector<int> observable_support(const std::vector<Eigen::VectorXd>& observables) {
  std::set<int> support;
  for (const auto& o : observables)
    for (Eigen::Index j = 0; j < o.size(); ++j)
      if (std::abs(o(j)) > 1e-12) support.insert(static_cast<int>(j));
  return {support.begin(), support.end()};
}

StateSpaceModel build_reduced_model(const liealg::HamiltonianCoeffs& coeffs,
                                    const std::vector<Eigen::VectorXd>& observables,
                                    const Eigen::VectorXd& x0_full, FiltrationMode mode) {
  const auto support = observable_support(observables);
  const auto accessible = filtration(support, coeffs, mode);
  return build_reduced_model(coeffs, observables, x0_full, accessible);
}

StateSpaceModel build_reduced_model(const liealg::HamiltonianCoeffs& coeffs,
                                    const std::vector<Eigen::VectorXd>& observables,
                                    const Eigen::VectorXd& x0_full, std::span<const int> accessible) {
  const int m = coeffs.basis->size();
  if (x0_full.size() != m) throw Error(ErrorCode::Shape, "initial coherence vector must have length M");
  if (observables.empty()) throw Error(ErrorCode::Shape, "at least one observable is required");
  const int k = static_cast<int>(accessible.size());

  StateSpaceModel model;
  model.labels.assign(accessible.begin(), accessible.end());
  model.A = build_generator(coeffs, accessible);
  model.C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(observables.size()), k);
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const auto& o = observables[i];
    if (o.size() != m) throw Error(ErrorCode::Shape, "observable expansion must have length M");
    double outside = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto pos = std::find(accessible.begin(), accessible.end(), j);
      if (pos == accessible.end()) outside = std::max(outside, std::abs(o(j)));
      else model.C(static_cast<Eigen::Index>(i), pos - accessible.begin()) = o(j);
    }
    if (outside > 1e-12)
      throw Error(ErrorCode::InternalInconsistency,
                  "observable " + std::to_string(i) + " has support outside the accessible set");
  }
  model.x0.resize(k);
  for (int j = 0; j < k; ++j) model.x0(j) = x0_full(accessible[j]);
  model.validate();
  return model;
}

AugmentedModel augment(const StateSpaceModel& quantum, const StateSpaceModel& noise) {
  quantum.validate();
  const int kq = quantum.order();
  const int kn = noise.order();
  AugmentedModel out;
  out.quantum_dim = kq;
  out.noise_dim = kn;
  if (kn == 0) {
    out.model = quantum;
    return out;
  }
  noise.validate();
  if (noise.C.rows() != 1) throw Error(ErrorCode::Shape, "noise model must have a single output row G");
  const int n = kq + kn;
  const Eigen::Index outputs = quantum.C.rows();
  auto& m = out.model;
  m.A = Eigen::MatrixXd::Zero(n, n);
  m.A.topLeftCorner(kq, kq) = quantum.A;
  m.A.bottomRightCorner(kn, kn) = noise.A;
  m.C.resize(outputs, n);
  m.C.leftCols(kq) = quantum.C;
  m.C.rightCols(kn) = noise.C.row(0).replicate(outputs, 1);
  m.x0.resize(n);
  m.x0 << quantum.x0, noise.x0;
  m.labels = quantum.labels;
  if (!m.labels.empty()) m.labels.resize(static_cast<std::size_t>(n), -1);
  return out;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return a;
  return a.exp();
}

DiscreteModel discretize(const StateSpaceModel& model, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::Length, "sample interval must be positive");
  model.validate();
  return DiscreteModel{expm(model.A * dt), model.C, model.x0, dt};
}

Trajectory simulate(const DiscreteModel& model, int steps, double shot_sigma, std::uint64_t seed) {
  if (steps < 2) throw Error(ErrorCode::Length, "simulation needs at least 2 steps");
  if (shot_sigma < 0.0) throw Error(ErrorCode::Length, "shot_sigma must be nonnegative");
  Trajectory traj;
  traj.dt = model.dt;
  traj.samples.resize(steps, model.C.rows());
  for (Eigen::Index i = 0; i < model.C.rows(); ++i) traj.channel_names.push_back("y" + std::to_string(i + 1));

  Eigen::VectorXd x = model.x0;
  for (int k = 0; k < steps; ++k) {
    traj.samples.row(k) = (model.C * x).transpose();
    x = model.Ad * x;
  }
  if (shot_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, shot_sigma);
    for (int k = 0; k < steps; ++k)
      for (Eigen::Index c = 0; c < traj.samples.cols(); ++c) traj.samples(k, c) += gauss(rng);
  }
  return traj;
}

}  // namespace qhid::statespace
