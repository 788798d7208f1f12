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

#include "qhid/sysid.hpp"

#include "qhid/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace qhid::sysid {

using cplx = std::complex<double>;

Eigen::MatrixXd HankelPair::samples() const {
  Eigen::MatrixXd y(r + s, L);
  for (int j = 0; j < s; ++j) y.row(j) = H0.block(0, j, L, 1).transpose();
  for (int i = 1; i < r; ++i) y.row(s - 1 + i) = H0.block(i * L, s - 1, L, 1).transpose();
  y.row(r + s - 1) = H1.block((r - 1) * L, s - 1, L, 1).transpose();
  return y;
}

HankelPair build_hankel(const statespace::Trajectory& traj, int r, int s) {
  if (r < 1 || s < 1) throw Error(ErrorCode::Length, "Hankel block counts r and s must be positive");
  if (traj.steps() < r + s)
    throw Error(ErrorCode::Length, "Hankel matrices with r = " + std::to_string(r) + ", s = " + std::to_string(s) +
                                       " need at least " + std::to_string(r + s) + " samples, trajectory has " +
                                       std::to_string(traj.steps()) + "; record longer or lower r and s");
  const int L = traj.channels();
  HankelPair p;
  p.r = r;
  p.s = s;
  p.L = L;
  p.dt = traj.dt;
  p.H0.resize(r * L, s);
  p.H1.resize(r * L, s);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < s; ++j) {
      p.H0.block(i * L, j, L, 1) = traj.samples.row(i + j).transpose();
      p.H1.block(i * L, j, L, 1) = traj.samples.row(i + j + 1).transpose();
    }
  return p;
}

Eigen::VectorXd singular_values(const HankelPair& pair) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(pair.H0).singularValues();
}

OrderSelection select_order(const Eigen::VectorXd& sv, double gap_ratio, Eigen::Index max_dim) {
  if (sv.size() == 0 || !(sv(0) > 0.0)) throw Error(ErrorCode::DegenerateData, "singular spectrum is all zero");
  for (Eigen::Index i = 0; i + 1 < sv.size(); ++i) {
    if (sv(i) <= 0.0) break;
    if (sv(i + 1) / sv(i) < gap_ratio) return {static_cast<int>(i + 1), true};
  }
  if (max_dim <= 0) max_dim = sv.size();
  const double cut = std::numeric_limits<double>::epsilon() * sv(0) * static_cast<double>(max_dim);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return {rank, false};
}

EraResult era(const HankelPair& pair, int order) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pair.H0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cut = std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0) *
                     static_cast<double>(std::max(pair.H0.rows(), pair.H0.cols()));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  if (order < 0 || order > rank)
    throw Error(ErrorCode::RankDeficiency, "requested order " + std::to_string(order) +
                                               " exceeds the numerical rank " + std::to_string(rank));

  EraResult out;
  out.singular_values = sv;
  out.order = order;
  out.dt = pair.dt;
  const Eigen::MatrixXd p1 = svd.matrixU().leftCols(order);
  const Eigen::MatrixXd q1 = svd.matrixV().leftCols(order);
  const Eigen::VectorXd d_half = sv.head(order).cwiseSqrt();
  const Eigen::VectorXd d_inv_half = d_half.cwiseInverse();

  out.Ad_hat = d_inv_half.asDiagonal() * (p1.transpose() * pair.H1 * q1) * d_inv_half.asDiagonal();
  out.C_hat = p1.topRows(pair.L) * d_half.asDiagonal();
  out.x0_hat = d_half.asDiagonal() * q1.row(0).transpose();

  const Eigen::MatrixXd y = pair.samples();
  Eigen::VectorXd x = out.x0_hat;
  for (Eigen::Index k = 0; k < y.rows(); ++k) {
    const Eigen::VectorXd pred = order > 0 ? Eigen::VectorXd(out.C_hat * x) : Eigen::VectorXd::Zero(pair.L);
    out.residual = std::max(out.residual, (pred - y.row(k).transpose()).norm());
    if (order > 0) x = out.Ad_hat * x;
  }
  return out;
}

Eigen::MatrixXd real_logm(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::BranchAmbiguity, "eigendecomposition failed");
  const Eigen::VectorXcd lambda = es.eigenvalues();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx l = lambda(i);
    if (std::abs(l) == 0.0 || (l.real() < 0.0 && std::abs(l.imag()) <= 1e-12 * std::abs(l)))
      throw Error(ErrorCode::BranchAmbiguity,
                  "eigenvalue " + std::to_string(l.real()) + " lies on the closed negative real axis");
  }

  const Eigen::MatrixXcd v = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> cond_svd(v);
  const auto vs = cond_svd.singularValues();
  const double cond = vs(0) / vs(vs.size() - 1);

  Eigen::MatrixXcd log_c;
  if (std::isfinite(cond) && cond < 1e8) {
    Eigen::VectorXcd log_lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) log_lambda(i) = std::log(lambda(i));
    log_c = v * log_lambda.asDiagonal() * v.inverse();
  } else {
    // nearly defective: Schur-Parlett
    log_c = m.cast<cplx>().log();
  }
  const double scale = std::max(1.0, log_c.real().norm());
  if (log_c.imag().cwiseAbs().maxCoeff() >= 1e-8 * scale)
    throw Error(ErrorCode::AliasingSuspected, "matrix logarithm has a large imaginary residue");
  return log_c.real();
}

EraResult continuous_lift(EraResult era) {
  if (!(era.dt > 0.0)) throw Error(ErrorCode::Length, "realization has no sample interval");
  era.A_hat = real_logm(era.Ad_hat) / era.dt;
  return era;
}

void require_unaliased(const Eigen::MatrixXd& a, double dt) {
  if (a.size() == 0) return;
  const Eigen::VectorXcd lambda = a.eigenvalues();
  const double worst = dt * lambda.imag().cwiseAbs().maxCoeff();
  if (worst >= std::numbers::pi)
    throw Error(ErrorCode::AliasingSuspected,
                "dt * max|Im eig(A)| = " + std::to_string(worst) + " >= pi; sampled data is aliased");
}

}  // namespace qhid::sysid
