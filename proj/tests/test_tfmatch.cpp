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

#include <random>

using namespace qhid;

namespace {

/// omega1, omega2, delta1, then companion noise alpha_1..n and xi0_1..n with G = 1.
tfmatch::ParameterSpec two_qubit_spec(int noise_order) {
  tfmatch::ParameterSpec spec;
  spec.names = {"omega1", "omega2", "delta1"};
  spec.bounds = {{0, 10}, {0, 10}, {-10, 10}};
  spec.sign_candidates = {0, 1, 2};
  for (int i = 0; i < noise_order; ++i) {
    spec.names.push_back("alpha" + std::to_string(i + 1));
    spec.bounds.push_back({0, i == 0 ? 10.0 : 100.0});
  }
  for (int i = 0; i < noise_order; ++i) {
    spec.names.push_back("xi0_" + std::to_string(i + 1));
    spec.bounds.push_back({-10, 10});
  }
  spec.builder = [noise_order](const Eigen::VectorXd& p) {
    const auto q = fixture::two_qubit_model(p(0), p(1), p(2));
    statespace::StateSpaceModel noise;
    const int n = noise_order;
    noise.A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) noise.A(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) noise.A(n - 1, j) = -p(3 + n - 1 - j);
    noise.C = Eigen::MatrixXd::Ones(1, n);
    noise.x0 = p.segment(3 + n, n);
    return statespace::augment(q, noise);
  };
  return spec;
}

/// the true system written in the parameterization of two_qubit_spec(2)
Eigen::VectorXd truth_params() {
  // G = [-20, 1], xi0 = (0.015, 0) is similar to G = [1, 1] with
  // xi0' = T xi0, where T maps into the basis that makes G all ones
  const auto aug = fixture::two_qubit_augmented();
  const Eigen::Matrix2d e = aug.model.A.bottomRightCorner(2, 2);
  const Eigen::RowVector2d g = aug.model.C.rightCols(2);
  Eigen::Matrix2d obs_true, obs_ones;
  obs_true << g, g * e;
  const Eigen::RowVector2d ones(1.0, 1.0);
  obs_ones << ones, ones * e;
  const Eigen::Vector2d xi = obs_ones.inverse() * obs_true * aug.model.x0.tail(2);
  Eigen::VectorXd p(7);
  p << 1.3, 2.4, 4.3, 0.1, 20.0, xi(0), xi(1);
  return p;
}

tfmatch::TransferCoeffs polluted_target() {
  const auto aug = fixture::two_qubit_augmented();
  const auto traj = statespace::simulate(statespace::discretize(aug.model, 0.1), 120);
  const auto lifted = sysid::continuous_lift(sysid::era(sysid::build_hankel(traj, 20, 100), 6));
  return tfmatch::transfer_coeffs(lifted.A_hat, lifted.C_hat, lifted.x0_hat);
}

}  // namespace

TEST_CASE("tfmatch: transfer coefficients of a rotation") {
  const double w = 1.7;
  Eigen::Matrix2d a;
  a << 0, -w, w, 0;
  const auto tc = tfmatch::transfer_coeffs(a, Eigen::RowVector2d(1, 0), Eigen::Vector2d(0, 1));
  CHECK(tc.den.isApprox(Eigen::Vector3d(1, 0, w * w)));
  REQUIRE(tc.channels() == 1);
  CHECK(tc.num[0](0) == doctest::Approx(0.0));
  CHECK(tc.num[0](1) == doctest::Approx(-w));
}

TEST_CASE("tfmatch: Faddeev-LeVerrier agrees with eigenvalue products and interpolation") {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 8; ++n) {
    CAPTURE(n);
    const Eigen::MatrixXd a = oracle::random_matrix(n, n, rng);
    const Eigen::MatrixXd c = oracle::random_matrix(2, n, rng);
    const Eigen::VectorXd x0 = oracle::random_matrix(n, 1, rng);
    const auto tc = tfmatch::transfer_coeffs(a, c, x0);
    const Eigen::VectorXd den = oracle::charpoly(a);
    CHECK((tc.den - den).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + den.cwiseAbs().maxCoeff()));
    const Eigen::MatrixXd num = oracle::numerators_by_interpolation(a, c, x0);
    for (int l = 0; l < 2; ++l)
      CHECK((tc.num[l] - num.row(l).transpose()).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + num.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("tfmatch: transfer coefficients are similarity invariant") {
  std::mt19937_64 rng(43);
  const auto aug = fixture::two_qubit_augmented().model;
  const auto base = tfmatch::transfer_coeffs(aug);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd t = oracle::random_matrix(6, 6, rng) + 4.0 * Eigen::MatrixXd::Identity(6, 6);
    const Eigen::MatrixXd ti = t.inverse();
    const auto tc = tfmatch::transfer_coeffs(t * aug.A * ti, aug.C * ti, t * aug.x0);
    worst = std::max(worst, (tc.den - base.den).cwiseAbs().maxCoeff() / base.den.cwiseAbs().maxCoeff());
    worst = std::max(worst, (tc.num[0] - base.num[0]).cwiseAbs().maxCoeff() / base.num[0].cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("tfmatch: ERA target matches the true model") {
  const auto truth = tfmatch::transfer_coeffs(fixture::two_qubit_augmented().model);
  const auto target = polluted_target();
  for (Eigen::Index i = 0; i < truth.den.size(); ++i)
    CHECK(std::abs(target.den(i) - truth.den(i)) < 1e-6 * std::max(1.0, std::abs(truth.den(i))));
  for (Eigen::Index i = 0; i < truth.num[0].size(); ++i)
    CHECK(std::abs(target.num[0](i) - truth.num[0](i)) < 1e-6 * std::max(1.0, std::abs(truth.num[0](i))));
  // leading numerator coefficient is y(0), the -0.3 initial noise offset
  CHECK(target.num[0](0) == doctest::Approx(-0.3).epsilon(1e-9));
}

TEST_CASE("tfmatch: residual behaviour") {
  const auto spec = two_qubit_spec(2);
  const auto target = polluted_target();
  const Eigen::VectorXd p = truth_params();
  CHECK(tfmatch::residual(p, spec, target).cwiseAbs().maxCoeff() < 1e-8);

  double previous = 0.0;
  for (double eps : {1e-3, 1e-2, 3e-2, 1e-1}) {
    Eigen::VectorXd q = p;
    q(0) += eps;
    const double r = tfmatch::residual(q, spec, target).norm();
    CHECK(r > previous);
    previous = r;
  }

  Eigen::VectorXd flipped = p;
  flipped(2) = -flipped(2);
  CHECK(tfmatch::residual(flipped, spec, target).norm() < 1e-8);

  tfmatch::ParameterSpec fixed;
  fixed.builder = [](const Eigen::VectorXd&) { return fixture::two_qubit_augmented(); };
  const auto r0 = tfmatch::residual(Eigen::VectorXd(0), fixed, target);
  CHECK(r0.size() == 12);
  CHECK(r0.cwiseAbs().maxCoeff() < 1e-8);

  tfmatch::ParameterSpec broken = spec;
  broken.builder = [](const Eigen::VectorXd&) -> statespace::AugmentedModel {
    throw Error(ErrorCode::Shape, "bad");
  };
  try {
    tfmatch::residual(p, broken, target);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpecError);
  }
}

TEST_CASE("tfmatch: solve recovers the two-qubit parameters and reports the sign symmetry") {
  const auto spec = two_qubit_spec(2);
  const auto target = polluted_target();
  tfmatch::SolveOptions opt;
  opt.starts = 60;
  opt.seed = 5;
  const auto res = tfmatch::solve(spec, target, opt);
  REQUIRE(res.best >= 0);
  const auto& best = res.solutions[static_cast<std::size_t>(res.best)];
  CHECK(best.converged);
  CHECK(oracle::rel_err(best.params(0), 1.3) < 1e-6);
  CHECK(oracle::rel_err(best.params(1), 2.4) < 1e-6);
  CHECK(oracle::rel_err(best.params(2), 4.3) < 1e-6);
  CHECK(res.sign_symmetries == std::vector<int>{2});
  CHECK(res.histories.size() == 60);

  const auto again = tfmatch::solve(spec, target, opt);
  REQUIRE(again.solutions.size() == res.solutions.size());
  for (std::size_t i = 0; i < res.solutions.size(); ++i) CHECK(again.solutions[i].params == res.solutions[i].params);
}

TEST_CASE("tfmatch: a start at the truth converges without iterating") {
  const auto spec = two_qubit_spec(2);
  tfmatch::SolveOptions opt;
  opt.starts = 1;
  opt.initial_guesses = {truth_params()};
  const auto res = tfmatch::solve(spec, tfmatch::transfer_coeffs(spec.builder(truth_params()).model), opt);
  REQUIRE(res.solutions.size() == 1);
  CHECK(res.solutions[0].iterations == 0);
  CHECK(res.solutions[0].converged);
}

TEST_CASE("tfmatch: no convergent start is reported with the best residual") {
  auto spec = two_qubit_spec(2);
  spec.bounds[0] = {5.0, 6.0};  // excludes omega1 = 1.3
  tfmatch::SolveOptions opt;
  opt.starts = 5;
  try {
    tfmatch::solve(spec, polluted_target(), opt);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSolutionFound);
    CHECK(std::string(e.what()).find("best residual") != std::string::npos);
  }
}

TEST_CASE("tfmatch: identify end to end, with and without the noise block") {
  const auto aug = fixture::two_qubit_augmented();
  const auto polluted = statespace::simulate(statespace::discretize(aug.model, 0.1), 120);
  tfmatch::IdentifyOptions opt;
  opt.solve.starts = 40;
  const auto res = tfmatch::identify(polluted, two_qubit_spec(2), opt);
  CHECK_FALSE(res.order_forced);
  CHECK(res.era.order == 6);
  const auto& best = res.solutions[static_cast<std::size_t>(res.best)];
  CHECK(oracle::rel_err(best.params(0), 1.3) < 1e-4);
  CHECK(oracle::rel_err(best.params(1), 2.4) < 1e-4);
  CHECK(oracle::rel_err(best.params(2), 4.3) < 1e-4);

  // un-augmented fit of polluted data: biased, higher residual floor
  tfmatch::IdentifyOptions zs = opt;
  zs.solve.require_convergence = false;
  const auto biased = tfmatch::identify(polluted, two_qubit_spec(0), zs);
  CHECK(biased.order_forced);
  const auto& b = biased.solutions[static_cast<std::size_t>(biased.best)];
  CHECK(b.residual_norm > 1e3 * best.residual_norm);

  // un-augmented fit of clean data: exact
  const auto clean = statespace::simulate(statespace::discretize(fixture::two_qubit_model(), 0.1), 120);
  const auto exact = tfmatch::identify(clean, two_qubit_spec(0), opt);
  const auto& e = exact.solutions[static_cast<std::size_t>(exact.best)];
  CHECK(oracle::rel_err(e.params(0), 1.3) < 1e-6);
  CHECK(oracle::rel_err(e.params(1), 2.4) < 1e-6);
  CHECK(oracle::rel_err(e.params(2), 4.3) < 1e-6);
}
