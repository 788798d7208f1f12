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

#include "qhid/noisemodel.hpp"

#include "qhid/error.hpp"
#include "qhid/poly.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qhid::noisemodel {

namespace {

bool on_imaginary_axis(cplx s) { return std::abs(s.real()) <= 1e-10 * std::abs(s); }

// Root s of s^2 = -u with nonnegative real part.
cplx half_plane_root(cplx u) {
  cplx s = std::sqrt(-u);
  if (s.real() < 0.0) s = -s;
  return s;
}

struct ZeroGroup {
  std::vector<cplx> right;  // members with Re > 0
};

}  // namespace

double RationalPsd::operator()(double omega) const {
  const double u = omega * omega;
  return poly::eval(num, u).real() / poly::eval(den, u).real();
}

void RationalPsd::validate() const {
  const Eigen::VectorXd n = poly::trim(num);
  const Eigen::VectorXd d = poly::trim(den);
  if (d.size() < 2 || (d.size() == 1 && d(0) == 0.0))
    throw Error(ErrorCode::InvalidPsd, "denominator must have positive degree");
  if (!num.allFinite() || !den.allFinite()) throw Error(ErrorCode::InvalidPsd, "non-finite coefficients");
  if (poly::degree(n) >= poly::degree(d))
    throw Error(ErrorCode::InvalidPsd, "PSD must be strictly proper (deg num < deg den)");

  for (const cplx u : poly::roots(d))
    if (std::abs(u.imag()) <= 1e-10 * std::abs(u) && u.real() >= 0.0)
      throw Error(ErrorCode::DegeneratePsd, "denominator vanishes at real omega = " +
                                                std::to_string(std::sqrt(std::max(u.real(), 0.0))));

  // sample on a log grid spanning the root scales
  double lo = 1.0, hi = 1.0;
  for (const auto& p : {n, d})
    for (const cplx u : poly::roots(p)) {
      if (u == 0.0) continue;
      const double w = std::sqrt(std::abs(u));
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  const double a = std::log10(lo) - 3.0, b = std::log10(hi) + 3.0;
  constexpr int kGrid = 600;
  for (int i = 0; i <= kGrid; ++i) {
    const double w = i == 0 ? 0.0 : std::pow(10.0, a + (b - a) * (i - 1) / (kGrid - 1));
    if ((*this)(w) < 0.0)
      throw Error(ErrorCode::InvalidPsd, "PSD is negative at omega = " + std::to_string(w));
  }
}

Eigen::VectorXd NoiseTransfer::denominator() const {
  Eigen::VectorXd d(alpha.size() + 1);
  d << 1.0, alpha;
  return d;
}

cplx NoiseTransfer::operator()(cplx s) const { return poly::eval(beta, s) / poly::eval(denominator(), s); }

bool is_hurwitz(const NoiseTransfer& tf) {
  for (const cplx p : poly::roots(tf.denominator()))
    if (!(p.real() < 0.0)) return false;
  return true;
}

NoiseTransfer spectral_factorize(const RationalPsd& psd, const FactorizeOptions& options) {
  psd.validate();
  const Eigen::VectorXd num = poly::trim(psd.num);
  const Eigen::VectorXd den = poly::trim(psd.den);

  const double gain_sq = num(0) / den(0);
  if (!(gain_sq > 0.0)) throw Error(ErrorCode::InvalidPsd, "PSD is negative at high frequency");

  // poles: left half-plane member of each +-s pair
  std::vector<cplx> poles;
  for (const cplx u : poly::roots(den)) {
    const cplx s = half_plane_root(u);
    if (on_imaginary_axis(s)) throw Error(ErrorCode::DegeneratePsd, "pole on the imaginary axis");
    poles.push_back(-s);
  }

  // zeros, conjugate pairs grouped
  std::vector<ZeroGroup> groups;
  const auto num_roots = poly::roots(num);
  for (const cplx u : num_roots) {
    const bool real_u = std::abs(u.imag()) <= 1e-10 * std::abs(u);
    const cplx s = half_plane_root(real_u ? cplx(u.real(), 0.0) : u);
    if (s == 0.0 || on_imaginary_axis(s))
      throw Error(ErrorCode::DegeneratePsd, "zero on the imaginary axis; factorization is not unique");
    if (real_u) {
      groups.push_back({{cplx(s.real(), 0.0)}});
    } else if (u.imag() > 0.0) {
      groups.push_back({{s, std::conj(s)}});
    }
  }
  std::stable_sort(groups.begin(), groups.end(), [](const ZeroGroup& a, const ZeroGroup& b) {
    return std::abs(a.right.front()) < std::abs(b.right.front());
  });
  if (options.selection == ZeroSelection::Template && options.zero_template.size() != groups.size())
    throw Error(ErrorCode::InvalidPsd, "zero template has " + std::to_string(options.zero_template.size()) +
                                           " entries but the PSD has " + std::to_string(groups.size()) +
                                           " zero groups");

  std::vector<cplx> zeros;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const bool keep_right = options.selection == ZeroSelection::Template && options.zero_template[g] > 0;
    for (const cplx z : groups[g].right) zeros.push_back(keep_right ? z : -z);
  }

  const Eigen::VectorXd den_s = poly::from_roots(poles);
  const Eigen::VectorXd num_s = std::sqrt(gain_sq) * poly::from_roots(zeros);
  const int n = static_cast<int>(den_s.size()) - 1;

  NoiseTransfer tf;
  tf.alpha = den_s.tail(n);
  tf.beta = Eigen::VectorXd::Zero(n);
  tf.beta.tail(num_s.size()) = num_s;
  return tf;
}

NoiseTransfer rescale_time(const NoiseTransfer& tf, double unit) {
  if (!(unit > 0.0)) throw Error(ErrorCode::InvalidPsd, "time unit must be positive");
  NoiseTransfer out = tf;
  for (int i = 0; i < tf.order(); ++i) {
    const double f = std::pow(unit, i + 1);
    out.alpha(i) *= f;
    out.beta(i) *= f;
  }
  return out;
}

RationalPsd rescale_time(const RationalPsd& psd, double unit) {
  if (!(unit > 0.0)) throw Error(ErrorCode::InvalidPsd, "time unit must be positive");
  // S'(w') = S(w' / unit): coefficient of u^k picks up unit^{-2k}
  auto scale = [unit](const Eigen::VectorXd& p) {
    Eigen::VectorXd q = poly::trim(p);
    const Eigen::Index deg = q.size() - 1;
    for (Eigen::Index i = 0; i <= deg; ++i) q(i) *= std::pow(unit, -2.0 * static_cast<double>(deg - i));
    return q;
  };
  RationalPsd out{scale(psd.num), scale(psd.den)};
  const double lead = out.den(0);
  out.num /= lead;
  out.den /= lead;
  return out;
}

NoiseRealization canonical_realization(const NoiseTransfer& tf, const Eigen::VectorXd& xi0) {
  const int n = tf.order();
  if (tf.beta.size() != n) throw Error(ErrorCode::Shape, "beta and alpha must have equal length");
  if (xi0.size() != n) throw Error(ErrorCode::Shape, "xi0 length must equal the noise order");
  NoiseRealization r;
  r.E = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) r.E(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) r.E(n - 1, j) = -tf.alpha(n - 1 - j);
  r.F = Eigen::VectorXd::Zero(n);
  if (n > 0) r.F(n - 1) = 1.0;
  r.G.resize(n);
  for (int j = 0; j < n; ++j) r.G(j) = tf.beta(n - 1 - j);
  r.xi0 = xi0;
  return r;
}

cplx NoiseRealization::transfer(cplx s) const {
  const int n = order();
  const Eigen::MatrixXcd pencil = s * Eigen::MatrixXcd::Identity(n, n) - E.cast<cplx>();
  const Eigen::VectorXcd x = pencil.partialPivLu().solve(F.cast<cplx>());
  return (G.cast<cplx>() * x)(0);
}

statespace::StateSpaceModel NoiseRealization::as_model() const {
  statespace::StateSpaceModel m;
  m.A = E;
  m.C = G;
  m.x0 = xi0;
  return m;
}

statespace::Trajectory noise_expectation(const NoiseRealization& real, double dt, int steps) {
  auto traj = statespace::simulate(statespace::discretize(real.as_model(), dt), steps);
  traj.channel_names = {"v"};
  return traj;
}

statespace::Trajectory sample_colored_noise(const NoiseRealization& real, double dt, int steps,
                                            std::uint64_t seed) {
  if (!(dt > 0.0)) throw Error(ErrorCode::Length, "sample interval must be positive");
  if (steps < 2) throw Error(ErrorCode::Length, "need at least 2 steps");
  const int n = real.order();
  if (n > 0) {
    const Eigen::VectorXcd eig = real.E.eigenvalues();
    const double max_im = eig.imag().cwiseAbs().maxCoeff();
    if (dt * max_im >= std::numbers::pi)
      throw Error(ErrorCode::Aliasing, "dt * max|Im eig(E)| = " + std::to_string(dt * max_im) + " >= pi");
  }

  // zero-order-hold discretization of (E, F)
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n + 1, n + 1);
  block.topLeftCorner(n, n) = real.E;
  block.topRightCorner(n, 1) = real.F;
  const Eigen::MatrixXd phi = statespace::expm(block * dt);
  const Eigen::MatrixXd ad = phi.topLeftCorner(n, n);
  const Eigen::VectorXd bd = phi.topRightCorner(n, 1);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double drive = 1.0 / std::sqrt(dt);

  statespace::Trajectory traj;
  traj.dt = dt;
  traj.samples.resize(steps, 1);
  traj.channel_names = {"v"};
  Eigen::VectorXd xi = real.xi0;
  for (int k = 0; k < steps; ++k) {
    traj.samples(k, 0) = n > 0 ? real.G.dot(xi) : 0.0;
    if (n > 0) xi = ad * xi + bd * (drive * gauss(rng));
  }
  return traj;
}

statespace::Trajectory sample_through_transfer(const NoiseTransfer& tf, double dt, int steps,
                                               std::uint64_t seed) {
  if (!(dt > 0.0)) throw Error(ErrorCode::Length, "sample interval must be positive");
  if (steps < 2) throw Error(ErrorCode::Length, "need at least 2 steps");
  // zero-padded to twice the record length
  std::size_t len = 1;
  while (len < 2 * static_cast<std::size_t>(steps)) len <<= 1;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> white(len);
  const double drive = 1.0 / std::sqrt(dt);
  for (auto& w : white) w = drive * gauss(rng);

  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, white);
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(len) * dt);
  for (std::size_t k = 0; k <= len / 2; ++k) {
    const cplx g = tf(cplx(0.0, dw * static_cast<double>(k)));
    spec[k] *= g;
    if (k != 0 && k != len - k) spec[len - k] *= std::conj(g);
  }
  // real Nyquist bin
  spec[len / 2] = spec[len / 2].real();
  std::vector<double> shaped;
  fft.inv(shaped, spec);

  statespace::Trajectory traj;
  traj.dt = dt;
  traj.samples.resize(steps, 1);
  traj.channel_names = {"v"};
  const std::size_t offset = len - static_cast<std::size_t>(steps);
  for (int k = 0; k < steps; ++k) traj.samples(k, 0) = shaped[offset + static_cast<std::size_t>(k)];
  return traj;
}

PsdEstimate welch_psd(const statespace::Trajectory& signal, int segment_len, double overlap_frac, int channel) {
  if (channel < 0 || channel >= signal.channels()) throw Error(ErrorCode::Shape, "channel out of range");
  if (segment_len < 2 || segment_len > signal.steps())
    throw Error(ErrorCode::InvalidSegmentation, "segment length " + std::to_string(segment_len) +
                                                    " does not fit a signal of " + std::to_string(signal.steps()) +
                                                    " samples");
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0))
    throw Error(ErrorCode::InvalidSegmentation, "overlap fraction must lie in [0, 1)");

  const int hop = std::max(1, static_cast<int>(std::lround(segment_len * (1.0 - overlap_frac))));
  std::vector<double> window(static_cast<std::size_t>(segment_len));
  double power = 0.0;
  for (int i = 0; i < segment_len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / segment_len);
    power += window[i] * window[i];
  }

  const int bins = segment_len / 2 + 1;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(bins);
  Eigen::FFT<double> fft;
  std::vector<double> seg(static_cast<std::size_t>(segment_len));
  std::vector<cplx> spec;
  int count = 0;
  for (int start = 0; start + segment_len <= signal.steps(); start += hop) {
    for (int i = 0; i < segment_len; ++i) seg[i] = window[i] * signal.samples(start + i, channel);
    fft.fwd(spec, seg);
    for (int k = 0; k < bins; ++k) acc(k) += std::norm(spec[k]);
    ++count;
  }

  PsdEstimate out;
  out.omega.resize(bins);
  for (int k = 0; k < bins; ++k) out.omega(k) = 2.0 * std::numbers::pi * k / (segment_len * signal.dt);
  out.value = acc * (signal.dt / (power * count));
  return out;
}

}  // namespace qhid::noisemodel
