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
#include "qhid/statespace.hpp"

#include <doctest.h>

#include <random>

using namespace qhid;
using liealg::cplx;

TEST_CASE("statespace: two-qubit filtration and reduced model") {
  const auto h = fixture::two_qubit_h();
  const auto& b = *h.basis;
  const std::vector<int> seed{b.index_of("XI")};
  const auto acc = statespace::filtration(seed, h);
  CHECK(acc == std::vector<int>{b.index_of("XI"), b.index_of("YI"), b.index_of("ZX"), b.index_of("ZY")});

  const auto m = fixture::two_qubit_model();
  Eigen::Matrix4d want;
  want << 0, -1.3, 0, 4.3,
          1.3, 0, -4.3, 0,
          0, 4.3, 0, -2.4,
          -4.3, 0, 2.4, 0;
  CHECK(m.A == want);
  CHECK(m.C == Eigen::RowVector4d(1, 0, 0, 0));
  CHECK(m.x0 == Eigen::Vector4d(0, 1, 0, 0));
}

TEST_CASE("statespace: commuting observable stays a singleton") {
  const auto b = liealg::gell_mann_basis(2);
  liealg::HamiltonianCoeffs h{Eigen::Vector3d(0, 0, 0.65), b, 0.0};
  const std::vector<int> seed{2};
  CHECK(statespace::filtration(seed, h) == std::vector<int>{2});
}

TEST_CASE("statespace: filtration agrees with a brute-force matrix closure") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(0.25);
  for (const auto& b : {liealg::pauli_basis(2), liealg::gell_mann_basis(3), liealg::gell_mann_basis(4)}) {
    for (int trial = 0; trial < 10; ++trial) {
      liealg::HamiltonianCoeffs h;
      h.basis = b;
      h.a = Eigen::VectorXd::Zero(b->size());
      std::vector<int> dirs;
      for (int m = 0; m < b->size(); ++m)
        if (keep(rng)) {
          h.a(m) = u(rng);
          dirs.push_back(m);
        }
      const std::vector<int> seed{trial % b->size()};
      CHECK(statespace::filtration(seed, h) == oracle::filtration_bruteforce(b->elements, dirs, seed));
    }
  }
}

TEST_CASE("statespace: full Hamiltonian saturates the two-qubit algebra") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  auto h = fixture::two_qubit_h();
  for (int m = 0; m < h.a.size(); ++m) h.a(m) = u(rng);
  const std::vector<int> seed{h.basis->index_of("XI")};
  CHECK(statespace::filtration(seed, h).size() == 15);
  // full-algebra mode saturates even for a sparse H
  const auto sparse = fixture::two_qubit_h();
  CHECK(statespace::filtration(seed, sparse, statespace::FiltrationMode::FullAlgebra).size() == 15);
}

TEST_CASE("statespace: observable scaling and multiple observables") {
  const auto h = fixture::two_qubit_h();
  const auto& b = *h.basis;
  const Eigen::VectorXd x0 = fixture::unit(b, "YI");
  const auto m2 = statespace::build_reduced_model(h, {fixture::unit(b, "XI", 2.0)}, x0);
  CHECK(m2.C == Eigen::RowVector4d(2, 0, 0, 0));
  const auto mm = statespace::build_reduced_model(h, {fixture::unit(b, "XI"), fixture::unit(b, "YI")}, x0);
  REQUIRE(mm.C.rows() == 2);
  CHECK(mm.C.row(0) == Eigen::RowVector4d(1, 0, 0, 0));
  CHECK(mm.C.row(1) == Eigen::RowVector4d(0, 1, 0, 0));
}

TEST_CASE("statespace: observable outside the accessible set is an internal inconsistency") {
  const auto h = fixture::two_qubit_h();
  const auto& b = *h.basis;
  const std::vector<int> acc{b.index_of("XI"), b.index_of("YI"), b.index_of("ZX"), b.index_of("ZY")};
  try {
    statespace::build_reduced_model(h, {fixture::unit(b, "IZ")}, fixture::unit(b, "YI"), acc);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InternalInconsistency);
  }
}

TEST_CASE("statespace: zero Hamiltonian gives a zero generator") {
  const auto b = liealg::pauli_basis(2);
  liealg::HamiltonianCoeffs h{Eigen::VectorXd::Zero(15), b, 0.0};
  const std::vector<int> idx{0, 3, 7};
  CHECK(statespace::build_generator(h, idx).isZero(0.0));
}

TEST_CASE("statespace: reduced model output matches density-matrix evolution") {
  const auto h = fixture::two_qubit_h();
  const auto& b = *h.basis;
  const auto model = fixture::two_qubit_model();
  const double dt = 0.1;
  const auto traj = statespace::simulate(statespace::discretize(model, dt), 120);

  const Eigen::MatrixXcd hm = liealg::reconstruct(h);
  const Eigen::MatrixXcd rho0 = (Eigen::MatrixXcd::Identity(4, 4) + b.elements[b.index_of("YI")]) / 4.0;
  const Eigen::MatrixXcd u = oracle::expm_taylor<Eigen::MatrixXcd>(cplx(0.0, -dt) * hm);
  Eigen::MatrixXcd rho = rho0;
  const Eigen::MatrixXcd obs = b.elements[b.index_of("XI")];
  double worst = 0.0;
  for (int k = 0; k < 120; ++k) {
    worst = std::max(worst, std::abs((obs * rho).trace().real() - traj.samples(k, 0)));
    rho = u * rho * u.adjoint();
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("statespace: augmentation") {
  const auto q = fixture::two_qubit_model();
  const auto aug = fixture::two_qubit_augmented();
  CHECK(aug.quantum_dim == 4);
  CHECK(aug.noise_dim == 2);
  CHECK(aug.model.order() == 6);
  CHECK(aug.model.A.topRightCorner(4, 2).isZero(0.0));
  CHECK(aug.model.A.bottomLeftCorner(2, 4).isZero(0.0));
  Eigen::RowVectorXd c(6);
  c << 1, 0, 0, 0, -20, 1;
  CHECK(aug.model.C == c);

  statespace::StateSpaceModel none{Eigen::MatrixXd(0, 0), Eigen::MatrixXd(1, 0), Eigen::VectorXd(0), {}};
  const auto same = statespace::augment(q, none);
  CHECK(same.model.A == q.A);
  CHECK(same.model.C == q.C);
  CHECK(same.model.x0 == q.x0);

  statespace::StateSpaceModel bad{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2), {}};
  CHECK_THROWS_AS(statespace::augment(q, bad), Error);
}

TEST_CASE("statespace: matrix exponential") {
  const double w = 1.7, dt = 0.3;
  Eigen::Matrix2d a;
  a << 0, -w, w, 0;
  Eigen::Matrix2d rot;
  rot << std::cos(w * dt), -std::sin(w * dt), std::sin(w * dt), std::cos(w * dt);
  CHECK((statespace::expm(a * dt) - rot).norm() < 1e-14);
  CHECK(statespace::expm(Eigen::MatrixXd::Zero(3, 3)) == Eigen::MatrixXd::Identity(3, 3));

  const auto ad = statespace::discretize(fixture::two_qubit_model(), 0.1).Ad;
  CHECK((ad.transpose() * ad - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);

  std::mt19937_64 rng(8);
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXd m = oracle::random_matrix(n, n, rng);
    CHECK((statespace::expm(m) - oracle::expm_taylor<Eigen::MatrixXd>(m)).norm() <
          1e-10 * statespace::expm(m).norm());
  }
}

TEST_CASE("statespace: simulation details") {
  const auto model = fixture::two_qubit_augmented().model;
  const auto t2 = statespace::simulate(statespace::discretize(model, 0.1), 2);
  REQUIRE(t2.steps() == 2);
  CHECK(t2.samples(0, 0) == (model.C * model.x0)(0));
  CHECK(t2.samples(0, 0) == doctest::Approx(-0.3));

  const auto noisy1 = statespace::simulate(statespace::discretize(model, 0.1), 50, 0.01, 9);
  const auto noisy2 = statespace::simulate(statespace::discretize(model, 0.1), 50, 0.01, 9);
  const auto noisy3 = statespace::simulate(statespace::discretize(model, 0.1), 50, 0.01, 10);
  CHECK(noisy1.samples == noisy2.samples);
  CHECK(noisy1.samples != noisy3.samples);
  CHECK_THROWS_AS(statespace::simulate(statespace::discretize(model, 0.1), 1), Error);
}
