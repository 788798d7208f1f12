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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qhid::poly {

Eigen::VectorXd trim(const Eigen::VectorXd& p) {
  Eigen::Index first = 0;
  while (first < p.size() - 1 && p(first) == 0.0) ++first;
  if (p.size() == 0) return Eigen::VectorXd::Zero(1);
  return p.tail(p.size() - first);
}

int degree(const Eigen::VectorXd& p) { return static_cast<int>(trim(p).size()) - 1; }

cplx eval(const Eigen::VectorXd& p, cplx x) {
  cplx acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < p.size(); ++i) acc = acc * x + p(i);
  return acc;
}

cplx eval(const Eigen::VectorXcd& p, cplx x) {
  cplx acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < p.size(); ++i) acc = acc * x + p(i);
  return acc;
}

Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i + j) += a(i) * b(j);
  return out;
}

namespace {

cplx newton_polish(const Eigen::VectorXd& p, cplx z) {
  const Eigen::Index n = p.size() - 1;
  Eigen::VectorXd dp(n);
  for (Eigen::Index i = 0; i < n; ++i) dp(i) = p(i) * static_cast<double>(n - i);
  for (int it = 0; it < 4; ++it) {
    const cplx f = eval(p, z);
    const cplx df = eval(dp, z);
    if (std::abs(df) == 0.0) break;
    const cplx step = f / df;
    const cplx next = z - step;
    // improving steps only
    if (std::abs(eval(p, next)) >= std::abs(f)) break;
    z = next;
  }
  return z;
}

}  // namespace

std::vector<cplx> roots(const Eigen::VectorXd& p_in) {
  const Eigen::VectorXd p = trim(p_in);
  const Eigen::Index n = p.size() - 1;
  std::vector<cplx> out;
  if (n <= 0) return out;

  // zero roots are split off exactly
  Eigen::Index zeros = 0;
  while (zeros < n && p(n - zeros) == 0.0) ++zeros;
  const Eigen::Index m = n - zeros;
  out.assign(static_cast<std::size_t>(zeros), cplx{0.0, 0.0});
  if (m == 0) return out;
  const Eigen::VectorXd q = p.head(m + 1);

  // x = scale * u with scale ~ geometric mean of root magnitudes
  const double scale = std::pow(std::abs(q(m) / q(0)), 1.0 / static_cast<double>(m));
  Eigen::VectorXd qs(m + 1);
  for (Eigen::Index i = 0; i <= m; ++i)
    qs(i) = q(i) / q(0) / std::pow(scale, static_cast<double>(i));

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) companion(0, j) = -qs(j + 1);
  for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  for (Eigen::Index i = 0; i < m; ++i)
    out.push_back(newton_polish(q, solver.eigenvalues()(i) * scale));

  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

Eigen::VectorXd from_roots(const std::vector<cplx>& r) {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Ones(1);
  for (const cplx z : r) {
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(acc.size() + 1);
    next.head(acc.size()) += acc;
    next.tail(acc.size()) -= z * acc;
    acc = next;
  }
  return acc.real();
}

}  // namespace qhid::poly
