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

#include "qhid/statespace.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace qhid::noisemodel {

using cplx = std::complex<double>;

/// Rational power spectral density S(omega) = num(omega^2) / den(omega^2).
/// Both coefficient vectors are polynomials in omega^2, highest degree
/// first, so {1e12, 4e26} stands for 1e12 omega^2 + 4e26.
struct RationalPsd {
  Eigen::VectorXd num;
  Eigen::VectorXd den;

  double operator()(double omega) const;
  /// Strict properness, nonnegativity on a sample grid and no real-omega
  /// poles. Throws invalid-psd or degenerate-psd.
  void validate() const;
};

/// Gamma(s) = (beta_1 s^{n-1} + ... + beta_n) / (s^n + alpha_1 s^{n-1} + ... + alpha_n)
struct NoiseTransfer {
  Eigen::VectorXd beta;
  Eigen::VectorXd alpha;

  int order() const noexcept { return static_cast<int>(alpha.size()); }
  Eigen::VectorXd numerator() const { return beta; }
  /// Monic denominator (1, alpha_1, ..., alpha_n).
  Eigen::VectorXd denominator() const;
  cplx operator()(cplx s) const;
};

enum class ZeroSelection {
  MinimumPhase,
  /// Follow a sign template: one entry per zero group (a real pair +-z or a
  /// complex quadruple +-z, +-conj(z)), groups ordered by ascending |z|.
  /// +1 keeps the right half-plane member, -1 the left one.
  Template,
};

struct FactorizeOptions {
  ZeroSelection selection = ZeroSelection::MinimumPhase;
  std::vector<int> zero_template;
};

/// S(omega) = Gamma(s) Gamma(-s) at s = i omega with a Hurwitz denominator.
NoiseTransfer spectral_factorize(const RationalPsd& psd, const FactorizeOptions& options = {});

/// Re-expresses Gamma in a time unit of `unit` old units: Gamma'(s') =
/// Gamma(s' / unit). With unit = 1e-6, a transfer function in 1/s becomes
/// one in 1/us.
NoiseTransfer rescale_time(const NoiseTransfer& tf, double unit);
RationalPsd rescale_time(const RationalPsd& psd, double unit);

bool is_hurwitz(const NoiseTransfer& tf);

/// Controllable canonical (companion) realization of a noise transfer
/// function plus the initial internal state.
struct NoiseRealization {
  Eigen::MatrixXd E;
  Eigen::VectorXd F;
  Eigen::RowVectorXd G;
  Eigen::VectorXd xi0;

  int order() const noexcept { return static_cast<int>(E.rows()); }
  /// G (sI - E)^{-1} F
  cplx transfer(cplx s) const;
  /// (A, C, x0) = (E, G, xi0) for augmentation.
  statespace::StateSpaceModel as_model() const;
};

NoiseRealization canonical_realization(const NoiseTransfer& tf, const Eigen::VectorXd& xi0);

/// Noise expectation vbar(k) = G exp(E dt)^k xi0; single channel "v".
statespace::Trajectory noise_expectation(const NoiseRealization& real, double dt, int steps);

/// Sample path of the realization driven by white noise of unit intensity
/// (zero-order hold, samples scaled by 1/sqrt(dt)). Throws aliasing when
/// dt * max|Im eig(E)| >= pi.
statespace::Trajectory sample_colored_noise(const NoiseRealization& real, double dt, int steps,
                                            std::uint64_t seed);

/// Sample path obtained by shaping band-limited white noise with
/// Gamma(i omega) in the frequency domain. Shares nothing with the
/// state-space route beyond the transfer function.
statespace::Trajectory sample_through_transfer(const NoiseTransfer& tf, double dt, int steps,
                                               std::uint64_t seed);

struct PsdEstimate {
  Eigen::VectorXd omega;
  Eigen::VectorXd value;
};

/// Welch estimate with a periodic Hann window on the nonnegative frequency
/// grid omega_k = 2 pi k / (segment_len dt). Values are on the same scale as
/// S(omega) (white noise of variance s2 gives s2 * dt).
PsdEstimate welch_psd(const statespace::Trajectory& signal, int segment_len, double overlap_frac,
                      int channel = 0);

}  // namespace qhid::noisemodel
