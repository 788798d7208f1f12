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

#include "qhid/tfmatch.hpp"

#include "qhid/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace qhid::tfmatch {

TransferCoeffs transfer_coeffs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c, const Eigen::VectorXd& x0) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || c.cols() != n || x0.size() != n)
    throw Error(ErrorCode::Shape, "transfer_coeffs: incompatible A, C, x0");
  TransferCoeffs out;
  out.den = Eigen::VectorXd::Zero(n + 1);
  out.den(0) = 1.0;
  out.num.assign(static_cast<std::size_t>(c.rows()), Eigen::VectorXd::Zero(n));

  // M_1 = I, M_{k+1} = A M_k + c_k I, c_k = -tr(A M_k) / k
  Eigen::MatrixXd mk = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const Eigen::VectorXd mx = mk * x0;
    for (Eigen::Index ch = 0; ch < c.rows(); ++ch) out.num[static_cast<std::size_t>(ch)](k - 1) = c.row(ch).dot(mx);
    const Eigen::MatrixXd am = a * mk;
    out.den(k) = -am.trace() / static_cast<double>(k);
    mk = am + out.den(k) * Eigen::MatrixXd::Identity(n, n);
  }
  return out;
}

TransferCoeffs transfer_coeffs(const statespace::StateSpaceModel& model) {
  return transfer_coeffs(model.A, model.C, model.x0);
}

Eigen::VectorXd ParameterSpec::midpoint() const {
  Eigen::VectorXd p(size());
  for (int i = 0; i < size(); ++i) p(i) = 0.5 * (bounds[i].lo + bounds[i].hi);
  return p;
}

int ParameterSpec::model_order() const { return builder(midpoint()).model.order(); }

Eigen::VectorXd residual(const Eigen::VectorXd& params, const ParameterSpec& spec, const TransferCoeffs& target) {
  if (params.size() != spec.size()) throw Error(ErrorCode::SpecError, "parameter vector has the wrong length");
  if (!spec.builder) throw Error(ErrorCode::SpecError, "parameter spec has no model builder");
  statespace::AugmentedModel model;
  try {
    model = spec.builder(params);
  } catch (const Error& e) {
    throw Error(ErrorCode::SpecError, std::string("model builder failed: ") + e.what());
  }
  const TransferCoeffs got = transfer_coeffs(model.model);
  if (got.order() != target.order() || got.channels() != target.channels())
    throw Error(ErrorCode::SpecError, "model order " + std::to_string(got.order()) + " / " +
                                          std::to_string(got.channels()) + " channels does not match target order " +
                                          std::to_string(target.order()) + " / " +
                                          std::to_string(target.channels()) + " channels");
  const int n = target.order();
  Eigen::VectorXd r(n * (1 + target.channels()));
  auto weighted = [](double mine, double theirs) { return (mine - theirs) / std::max(1.0, std::abs(theirs)); };
  for (int k = 0; k < n; ++k) r(k) = weighted(got.den(k + 1), target.den(k + 1));
  for (int ch = 0; ch < target.channels(); ++ch)
    for (int k = 0; k < n; ++k)
      r(n * (1 + ch) + k) = weighted(got.num[ch](k), target.num[ch](k));
  return r;
}

namespace {

constexpr std::array<int, 24> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                         41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double radical_inverse(unsigned index, int base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % static_cast<unsigned>(base));
    index /= static_cast<unsigned>(base);
    f /= base;
  }
  return result;
}

Eigen::VectorXd clamp_to(const Eigen::VectorXd& p, const std::vector<Bounds>& b) {
  Eigen::VectorXd q = p;
  for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = std::clamp(q(i), b[i].lo, b[i].hi);
  return q;
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& p, const Eigen::VectorXd& r0, const ParameterSpec& spec,
                         const TransferCoeffs& target) {
  Eigen::MatrixXd j(r0.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(p(i)));
    const auto& b = spec.bounds[static_cast<std::size_t>(i)];
    Eigen::VectorXd up = p, dn = p;
    up(i) = std::min(p(i) + h, b.hi);
    dn(i) = std::max(p(i) - h, b.lo);
    if (up(i) - dn(i) <= 0.0) {
      j.col(i).setZero();
      continue;
    }
    const Eigen::VectorXd ru = up(i) == p(i) ? r0 : residual(up, spec, target);
    const Eigen::VectorXd rd = dn(i) == p(i) ? r0 : residual(dn, spec, target);
    j.col(i) = (ru - rd) / (up(i) - dn(i));
  }
  return j;
}

double condition_of(const Eigen::MatrixXd& j) {
  if (j.cols() == 0) return 1.0;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(j).singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

struct Descent {
  Solution solution;
  std::vector<double> history;
};

Descent descend(Eigen::VectorXd p, const ParameterSpec& spec, const TransferCoeffs& target,
                const SolveOptions& opt) {
  Descent out;
  p = clamp_to(p, spec.bounds);
  Eigen::VectorXd r = residual(p, spec, target);
  double cost = r.squaredNorm();
  out.history.push_back(std::sqrt(cost));
  double lambda = 1e-3;
  int it = 0;
  Eigen::MatrixXd j;
  if (p.size() > 0) {
    while (it < opt.max_iterations && std::sqrt(cost) > opt.polish_tolerance) {
      j = jacobian(p, r, spec, target);
      const Eigen::MatrixXd jtj = j.transpose() * j;
      const Eigen::VectorXd g = j.transpose() * r;
      Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12 * std::max(1.0, jtj.diagonal().maxCoeff()));
      bool improved = false;
      while (lambda < 1e16) {
        Eigen::MatrixXd lhs = jtj;
        lhs.diagonal() += lambda * diag;
        const Eigen::VectorXd step = lhs.ldlt().solve(-g);
        const Eigen::VectorXd trial = clamp_to(p + step, spec.bounds);
        if (!trial.allFinite()) {
          lambda *= 10.0;
          continue;
        }
        Eigen::VectorXd rt;
        try {
          rt = residual(trial, spec, target);
        } catch (const Error&) {
          lambda *= 10.0;
          continue;
        }
        const double ct = rt.squaredNorm();
        if (std::isfinite(ct) && ct < cost) {
          const double moved = (trial - p).cwiseAbs().maxCoeff();
          p = trial;
          r = rt;
          const double rel_gain = (cost - ct) / cost;
          cost = ct;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = moved > 1e-15 * std::max(1.0, p.cwiseAbs().maxCoeff()) && rel_gain > 1e-15;
          break;
        }
        lambda *= 4.0;
      }
      ++it;
      out.history.push_back(std::sqrt(cost));
      if (!improved) break;
    }
  }
  out.solution.params = p;
  out.solution.residual_norm = std::sqrt(cost);
  out.solution.iterations = it;
  out.solution.converged = out.solution.residual_norm < opt.tolerance;
  return out;
}

double scaled_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a(i) - b(i)) / std::max(1.0, std::max(std::abs(a(i)), std::abs(b(i)))));
  return d;
}

bool ordered_before(const Solution& a, const Solution& b) {
  if (a.residual_norm != b.residual_norm) return a.residual_norm < b.residual_norm;
  for (Eigen::Index i = 0; i < a.params.size(); ++i)
    if (a.params(i) != b.params(i)) return a.params(i) < b.params(i);
  return a.start < b.start;
}

bool in_bounds(const Eigen::VectorXd& p, const std::vector<Bounds>& b) {
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) < b[i].lo || p(i) > b[i].hi) return false;
  return true;
}

// residual unchanged under a sign flip of parameter i at p
bool flip_is_symmetry(const Eigen::VectorXd& p, int i, double base, const ParameterSpec& spec,
                      const TransferCoeffs& target, double tol) {
  Eigen::VectorXd q = p;
  q(i) = -q(i);
  if (!in_bounds(q, spec.bounds)) return false;
  double flipped;
  try {
    flipped = residual(q, spec, target).norm();
  } catch (const Error&) {
    return false;
  }
  return std::abs(flipped - base) <= std::max(tol, 1e-6 * base);
}

}  // namespace

IdentificationResult solve(const ParameterSpec& spec, const TransferCoeffs& target, const SolveOptions& opt) {
  if (opt.starts < 1) throw Error(ErrorCode::SpecError, "at least one start is required");
  if (static_cast<int>(spec.bounds.size()) != spec.size())
    throw Error(ErrorCode::SpecError, "every parameter needs bounds");
  for (const auto& b : spec.bounds)
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
      throw Error(ErrorCode::SpecError, "parameter bounds must be finite with lo <= hi");

  const int dim = spec.size();
  if (dim > static_cast<int>(kPrimes.size()))
    throw Error(ErrorCode::SpecError, "too many unknowns for the quasi-random start generator");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd shift(dim);
  for (int i = 0; i < dim; ++i) shift(i) = unit(rng);

  std::vector<Eigen::VectorXd> starts;
  for (const auto& g : opt.initial_guesses) {
    if (static_cast<int>(starts.size()) >= opt.starts) break;
    if (g.size() != dim) throw Error(ErrorCode::SpecError, "initial guess has the wrong length");
    starts.push_back(g);
  }
  for (unsigned idx = 1; static_cast<int>(starts.size()) < opt.starts; ++idx) {
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) {
      const double u = std::fmod(radical_inverse(idx, kPrimes[static_cast<std::size_t>(i)]) + shift(i), 1.0);
      p(i) = spec.bounds[i].lo + u * (spec.bounds[i].hi - spec.bounds[i].lo);
    }
    starts.push_back(p);
  }

  IdentificationResult out;
  out.names = spec.names;
  out.target = target;
  std::vector<Solution> found;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Descent d = descend(starts[s], spec, target, opt);
    d.solution.start = static_cast<int>(s);
    out.histories.push_back(std::move(d.history));
    if (d.solution.converged) ++out.converged_starts;
    found.push_back(std::move(d.solution));
  }

  std::vector<Solution> pool;
  for (const auto& s : found)
    if (s.converged || !opt.require_convergence) pool.push_back(s);
  if (pool.empty()) {
    const auto best = std::min_element(found.begin(), found.end(), ordered_before);
    throw Error(ErrorCode::NoSolutionFound, "no start converged below " + std::to_string(opt.tolerance) +
                                                "; best residual " + std::to_string(best->residual_norm));
  }
  std::sort(pool.begin(), pool.end(), ordered_before);

  // sign symmetries, probed at the best point
  const Solution& lead = pool.front();
  for (int i : spec.sign_candidates)
    if (lead.params(i) != 0.0 && flip_is_symmetry(lead.params, i, lead.residual_norm, spec, target, opt.tolerance)) {
      out.sign_symmetries.push_back(i);
      out.equivalence_notes.push_back(spec.names[static_cast<std::size_t>(i)] + " -> -" +
                                      spec.names[static_cast<std::size_t>(i)] +
                                      " leaves the residual unchanged; nonnegative representative reported");
    }
  for (auto& s : pool)
    for (int i : out.sign_symmetries)
      if (s.params(i) < 0.0 && flip_is_symmetry(s.params, i, s.residual_norm, spec, target, opt.tolerance))
        s.params(i) = -s.params(i);
  std::sort(pool.begin(), pool.end(), ordered_before);

  for (const auto& s : pool) {
    auto same = std::find_if(out.solutions.begin(), out.solutions.end(), [&](const Solution& rep) {
      return scaled_distance(rep.params, s.params) < opt.cluster_distance;
    });
    if (same != out.solutions.end()) {
      ++same->members;
    } else {
      out.solutions.push_back(s);
    }
  }
  for (auto& s : out.solutions) {
    const Eigen::VectorXd r = residual(s.params, spec, target);
    s.condition = condition_of(jacobian(s.params, r, spec, target));
  }
  out.best = 0;
  return out;
}

IdentificationResult identify(const statespace::Trajectory& traj, const ParameterSpec& spec,
                              const IdentifyOptions& options) {
  traj.validate();
  const auto pair = sysid::build_hankel(traj, options.r, options.s);
  const Eigen::VectorXd sv = sysid::singular_values(pair);
  const auto selection =
      sysid::select_order(sv, options.gap_ratio, std::max<Eigen::Index>(pair.H0.rows(), pair.H0.cols()));

  const int model_order = spec.model_order();
  const bool forced = selection.order != model_order;
  auto lifted = sysid::continuous_lift(sysid::era(pair, model_order));
  const TransferCoeffs target = transfer_coeffs(lifted.A_hat, lifted.C_hat, lifted.x0_hat);

  IdentificationResult result = solve(spec, target, options.solve);
  result.era = std::move(lifted);
  result.order_selection = selection;
  result.order_forced = forced;
  return result;
}

}  // namespace qhid::tfmatch
