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

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qhid/error.hpp"
#include "qhid/sysid.hpp"
#include "qhid/tfmatch.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace qhid;
using liealg::cplx;

namespace {

statespace::Trajectory sampled(const statespace::StateSpaceModel& m, double dt, int steps) {
  return statespace::simulate(statespace::discretize(m, dt), steps);
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InternalInconsistency;
}

Eigen::Matrix2d rotation_generator(double w) {
  Eigen::Matrix2d a;
  a << 0, -w, w, 0;
  return a;
}

/// true when every eigenvalue in a has a partner in b within tol
bool same_spectrum(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < b.size() && !found; ++j)
      if (!used[static_cast<std::size_t>(j)] && std::abs(a(i) - b(j)) < tol) used[static_cast<std::size_t>(j)] = found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("sysid: Hankel layout") {
  statespace::Trajectory t;
  t.dt = 0.1;
  t.samples.resize(6, 1);
  t.samples << 10, 11, 12, 13, 14, 15;
  const auto p = sysid::build_hankel(t, 2, 3);
  Eigen::MatrixXd h0(2, 3), h1(2, 3);
  h0 << 10, 11, 12, 11, 12, 13;
  h1 << 11, 12, 13, 12, 13, 14;
  CHECK(p.H0 == h0);
  CHECK(p.H1 == h1);
  CHECK(p.samples() == t.samples.topRows(5));
  CHECK(code_of([&] { sysid::build_hankel(t, 3, 4); }) == ErrorCode::Length);

  const auto big = sysid::build_hankel(sampled(fixture::two_qubit_model(), 0.1, 120), 20, 100);
  CHECK(big.H0.rows() == 20);
  CHECK(big.H0.cols() == 100);
}

TEST_CASE("sysid: Hankel rank equals the minimal order") {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 6; ++n) {
    const statespace::StateSpaceModel m{oracle::random_lti_generator(n, rng), oracle::random_matrix(1, n, rng),
                                        oracle::random_matrix(n, 1, rng), {}};
    const auto sv = sysid::singular_values(sysid::build_hankel(sampled(m, 0.1, 40), 12, 28));
    CHECK(sysid::select_order(sv).order == n);
  }
}

TEST_CASE("sysid: order selection") {
  Eigen::VectorXd sv(5);
  sv << 1.0, 0.5, 1e-12, 1e-13, 1e-14;
  const auto sel = sysid::select_order(sv);
  CHECK(sel.order == 2);
  CHECK(sel.clear_gap);
  CHECK(code_of([] { sysid::select_order(Eigen::VectorXd::Zero(4)); }) == ErrorCode::DegenerateData);

  const auto clean = sampled(fixture::two_qubit_model(), 0.1, 120);
  CHECK(sysid::select_order(sysid::singular_values(sysid::build_hankel(clean, 20, 100))).order == 4);
  const auto polluted = sampled(fixture::two_qubit_augmented().model, 0.1, 120);
  const auto sv6 = sysid::singular_values(sysid::build_hankel(polluted, 20, 100));
  CHECK(sysid::select_order(sv6).order == 6);
  CHECK(sysid::select_order(sv6, 1e-1).order == 6);
}

TEST_CASE("sysid: ERA round trip on random stable systems") {
  std::mt19937_64 rng(31);
  const double dt = 0.3;
  for (int n = 2; n <= 8; ++n) {
    for (int outputs = 1; outputs <= 2; ++outputs) {
      CAPTURE(n);
      const statespace::StateSpaceModel m{oracle::random_lti_generator(n, rng),
                                          oracle::random_matrix(outputs, n, rng), oracle::random_matrix(n, 1, rng), {}};
      const auto traj = sampled(m, dt, 80);
      const auto pair = sysid::build_hankel(traj, 20, 60);
      const auto est = sysid::continuous_lift(sysid::era(pair, n));
      const double ymax = traj.samples.rowwise().norm().maxCoeff();
      CHECK(est.residual < 1e-8 * ymax);

      Eigen::EigenSolver<Eigen::MatrixXd> e1(m.A, false), e2(est.A_hat, false);
      CHECK(same_spectrum(e1.eigenvalues(), e2.eigenvalues(), 1e-8 * (1.0 + m.A.norm())));
      const auto t_true = tfmatch::transfer_coeffs(m);
      const auto t_est = tfmatch::transfer_coeffs(est.A_hat, est.C_hat, est.x0_hat);
      CHECK((t_true.den - t_est.den).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + t_true.den.cwiseAbs().maxCoeff()));
      for (int l = 0; l < outputs; ++l)
        CHECK((t_true.num[l] - t_est.num[l]).cwiseAbs().maxCoeff() <
              1e-8 * (1.0 + t_true.num[l].cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("sysid: ERA on the augmented two-qubit data") {
  const auto aug = fixture::two_qubit_augmented();
  const double dt = 0.1;
  const auto pair = sysid::build_hankel(sampled(aug.model, dt, 120), 20, 100);
  const auto est = sysid::era(pair, 6);
  Eigen::EigenSolver<Eigen::MatrixXd> ea(aug.model.A, false), ed(est.Ad_hat, false);
  Eigen::VectorXcd expected = (ea.eigenvalues() * dt).array().exp();
  CHECK(same_spectrum(expected, ed.eigenvalues(), 1e-6));
  CHECK(est.residual < 1e-9);

  const auto zero = sysid::era(pair, 0);
  CHECK(zero.order == 0);
  CHECK(zero.residual == doctest::Approx(pair.samples().rowwise().norm().maxCoeff()));
  CHECK(code_of([&] { sysid::era(pair, 7); }) == ErrorCode::RankDeficiency);
}

TEST_CASE("sysid: matrix logarithm") {
  std::mt19937_64 rng(12);
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXd a = oracle::random_lti_generator(n, rng);
    const Eigen::MatrixXd back = sysid::real_logm(statespace::expm(a * 0.1)) / 0.1;
    CHECK((back - a).norm() < 1e-8 * a.norm());
  }
  CHECK(sysid::real_logm(Eigen::MatrixXd::Identity(3, 3)).isZero(1e-15));

  // Jordan block: eigenvector matrix is singular, exercised through the Schur route
  Eigen::Matrix2d jordan;
  jordan << 0.9, 1.0, 0.0, 0.9;
  CHECK((statespace::expm(sysid::real_logm(jordan)) - jordan).norm() < 1e-10);

  CHECK(code_of([] { sysid::real_logm(-Eigen::MatrixXd::Identity(2, 2)); }) == ErrorCode::BranchAmbiguity);
}

TEST_CASE("sysid: branch cut and the sampling guard") {
  const double dt = 1.0;
  const Eigen::Matrix2d below = rotation_generator(std::numbers::pi - 0.1);
  const Eigen::Matrix2d above = rotation_generator(std::numbers::pi + 0.1);

  CHECK((sysid::real_logm(statespace::expm(below * dt)) - below * dt).norm() < 1e-10);
  CHECK_NOTHROW(sysid::require_unaliased(below, dt));

  // beyond the Nyquist-like bound the sampled data is that of the folded
  // rotation; only the guard on the known generator can flag it
  const Eigen::MatrixXd folded = sysid::real_logm(statespace::expm(above * dt));
  CHECK((folded - rotation_generator(-(std::numbers::pi - 0.1))).norm() < 1e-10);
  CHECK(code_of([&] { sysid::require_unaliased(above, dt); }) == ErrorCode::AliasingSuspected);
}
