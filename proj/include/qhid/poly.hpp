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

// Real and complex polynomial helpers. Coefficient vectors are stored
// highest degree first throughout the library.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qhid::poly {

using cplx = std::complex<double>;

/// Drops leading zeros; an all-zero input collapses to {0}.
Eigen::VectorXd trim(const Eigen::VectorXd& p);

int degree(const Eigen::VectorXd& p);

cplx eval(const Eigen::VectorXd& p, cplx x);
cplx eval(const Eigen::VectorXcd& p, cplx x);

Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Roots of a real polynomial: eigenvalues of the companion matrix of the
/// variable-rescaled polynomial, each polished by a few Newton steps on the
/// original coefficients. Sorted by real, then imaginary part.
std::vector<cplx> roots(const Eigen::VectorXd& p);

/// Monic polynomial with the given roots. Conjugate pairs must be
/// complete; the imaginary residue of the expanded coefficients is dropped.
Eigen::VectorXd from_roots(const std::vector<cplx>& r);

}  // namespace qhid::poly
