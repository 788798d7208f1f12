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

#include "qhid/poly.hpp"

#include <doctest.h>

#include <random>

using qhid::poly::cplx;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("poly: trim and degree") {
  CHECK(qhid::poly::degree(vec({0, 0, 3, 1})) == 1);
  CHECK(qhid::poly::trim(vec({0, 0})).size() == 1);
  CHECK(qhid::poly::degree(vec({2})) == 0);
}

TEST_CASE("poly: multiply matches hand expansion") {
  const auto p = qhid::poly::multiply(vec({1, 2}), vec({1, -3, 4}));
  CHECK(p.isApprox(vec({1, -1, -2, 8})));
}

TEST_CASE("poly: roots of a quadratic with distinct real roots") {
  const auto r = qhid::poly::roots(vec({1, -3, 2}));
  REQUIRE(r.size() == 2);
  CHECK(r[0].real() == doctest::Approx(1.0));
  CHECK(r[1].real() == doctest::Approx(2.0));
}

TEST_CASE("poly: roots with widely scaled coefficients") {
  // u^2 - 3.999e13 u + 4e26 has a complex pair near 2e13
  const auto r = qhid::poly::roots(vec({1.0, -3.999e13, 4.0e26}));
  REQUIRE(r.size() == 2);
  for (const auto& z : r) {
    CHECK(std::abs(qhid::poly::eval(vec({1.0, -3.999e13, 4.0e26}), z)) < 1e-6 * 4e26);
    CHECK(z.real() == doctest::Approx(1.9995e13).epsilon(1e-10));
    CHECK(std::abs(z.imag()) > 1e11);
  }
}

TEST_CASE("poly: zero roots are split off") {
  const auto r = qhid::poly::roots(vec({1, -1, 0, 0}));
  REQUIRE(r.size() == 3);
  CHECK(std::abs(r[0]) == 0.0);
  CHECK(std::abs(r[1]) == 0.0);
  CHECK(r[2].real() == doctest::Approx(1.0));
}

TEST_CASE("poly: from_roots inverts roots for random real polynomials") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 7;
    Eigen::VectorXd p(n + 1);
    p(0) = 1.0;
    for (int i = 1; i <= n; ++i) p(i) = g(rng);
    const auto back = qhid::poly::from_roots(qhid::poly::roots(p));
    CHECK((back - p).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + p.cwiseAbs().maxCoeff()));
  }
}
