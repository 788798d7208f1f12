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

#include "qhid/liealg.hpp"

#include "qhid/error.hpp"

#include <cmath>

namespace qhid::liealg {

namespace {

constexpr double kTol = 1e-12;

Eigen::MatrixXcd pauli(char which) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  switch (which) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::InvalidOperator, std::string("unknown Pauli factor ") + which);
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double hs_norm(const Eigen::MatrixXcd& x) { return (x * x).trace().real(); }

}  // namespace

std::optional<int> BasisSet::find(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (labels[static_cast<std::size_t>(i)] == label) return i;
  return std::nullopt;
}

int BasisSet::index_of(std::string_view label) const {
  if (auto idx = find(label)) return *idx;
  throw Error(ErrorCode::Config, "basis has no element labelled '" + std::string(label) + "'");
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return x * y - y * x;
}

StructureTensor structure_constants(const std::vector<Eigen::MatrixXcd>& elements) {
  const int m = static_cast<int>(elements.size());
  std::vector<double> norms(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    norms[j] = hs_norm(elements[j]);
    if (!(norms[j] > kTol))
      throw Error(ErrorCode::IllConditionedBasis, "basis element " + std::to_string(j) + " has zero norm");
  }
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) {
      const double overlap = std::abs((elements[j] * elements[k]).trace());
      if (overlap > 1e-10 * std::sqrt(norms[j] * norms[k]))
        throw Error(ErrorCode::IllConditionedBasis,
                    "elements " + std::to_string(j) + " and " + std::to_string(k) + " are not orthogonal");
    }

  StructureTensor c(m);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) {
      const Eigen::MatrixXcd comm = commutator(elements[j], elements[k]);
      for (int l = 0; l < m; ++l) {
        cplx v = (elements[l] * comm).trace() / norms[l];
        if (std::abs(v) < kTol) v = 0.0;
        c(j, k, l) = v;
        c(k, j, l) = -v;
      }
    }
  return c;
}

std::shared_ptr<const BasisSet> make_basis(std::vector<Eigen::MatrixXcd> elements,
                                           std::vector<std::string> labels) {
  if (elements.empty()) throw Error(ErrorCode::InvalidDimension, "empty basis");
  const Eigen::Index n = elements.front().rows();
  if (n < 2) throw Error(ErrorCode::InvalidDimension, "Hilbert-space dimension must be >= 2");
  if (labels.size() != elements.size())
    throw Error(ErrorCode::Shape, "label count does not match basis size");
  double norm = 0.0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& x = elements[i];
    if (x.rows() != n || x.cols() != n)
      throw Error(ErrorCode::Shape, "basis elements must all be " + std::to_string(n) + "x" + std::to_string(n));
    if ((x - x.adjoint()).norm() > kTol)
      throw Error(ErrorCode::IllConditionedBasis, "basis element '" + labels[i] + "' is not Hermitian");
    if (std::abs(x.trace()) > kTol)
      throw Error(ErrorCode::IllConditionedBasis, "basis element '" + labels[i] + "' is not traceless");
    const double ni = hs_norm(x);
    if (i == 0) norm = ni;
    else if (std::abs(ni - norm) > 1e-10 * norm)
      throw Error(ErrorCode::IllConditionedBasis, "basis elements do not share a common norm");
  }
  auto basis = std::make_shared<BasisSet>();
  basis->dim = static_cast<int>(n);
  basis->norm = norm;
  basis->structure = structure_constants(elements);
  basis->elements = std::move(elements);
  basis->labels = std::move(labels);
  return basis;
}

std::shared_ptr<const BasisSet> gell_mann_basis(int n) {
  if (n < 2 || n > 8)
    throw Error(ErrorCode::InvalidDimension, "su(N) requires 2 <= N <= 8, got " + std::to_string(n));
  if (n == 2) {
    return make_basis({pauli('X'), pauli('Y'), pauli('Z')}, {"X", "Y", "Z"});
  }
  std::vector<Eigen::MatrixXcd> el;
  std::vector<std::string> labels;
  const auto zero = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd s = zero;
      s(j, k) = s(k, j) = 1.0;
      el.push_back(s);
      labels.push_back("S" + std::to_string(j + 1) + std::to_string(k + 1));
    }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd a = zero;
      a(j, k) = cplx(0, -1);
      a(k, j) = cplx(0, 1);
      el.push_back(a);
      labels.push_back("A" + std::to_string(j + 1) + std::to_string(k + 1));
    }
  for (int l = 1; l < n; ++l) {
    Eigen::MatrixXcd d = zero;
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) d(j, j) = c;
    d(l, l) = -c * l;
    el.push_back(d);
    labels.push_back("D" + std::to_string(l));
  }
  return make_basis(std::move(el), std::move(labels));
}

std::shared_ptr<const BasisSet> pauli_basis(int qubits) {
  if (qubits < 1 || qubits > 3)
    throw Error(ErrorCode::InvalidDimension, "Pauli basis supports 1 to 3 qubits");
  static constexpr char kFactors[] = {'I', 'X', 'Y', 'Z'};
  int total = 1;
  for (int q = 0; q < qubits; ++q) total *= 4;
  std::vector<Eigen::MatrixXcd> el;
  std::vector<std::string> labels;
  for (int code = 1; code < total; ++code) {
    std::string label(static_cast<std::size_t>(qubits), 'I');
    int rest = code;
    for (int q = qubits - 1; q >= 0; --q) {
      label[static_cast<std::size_t>(q)] = kFactors[rest % 4];
      rest /= 4;
    }
    Eigen::MatrixXcd m = pauli(label[0]);
    for (int q = 1; q < qubits; ++q) m = kron(m, pauli(label[static_cast<std::size_t>(q)]));
    el.push_back(std::move(m));
    labels.push_back(std::move(label));
  }
  return make_basis(std::move(el), std::move(labels));
}

HamiltonianCoeffs expand_hamiltonian(const Eigen::MatrixXcd& h, std::shared_ptr<const BasisSet> basis) {
  if (!basis) throw Error(ErrorCode::InvalidOperator, "no basis given");
  if (h.rows() != basis->dim || h.cols() != basis->dim)
    throw Error(ErrorCode::Shape, "operator dimension does not match basis");
  if (!h.allFinite() || (h - h.adjoint()).norm() > 1e-12 * std::max(1.0, h.norm()))
    throw Error(ErrorCode::InvalidOperator, "operator is not Hermitian");
  HamiltonianCoeffs out;
  out.removed_trace = h.trace().real() / basis->dim;
  out.a.resize(basis->size());
  for (int m = 0; m < basis->size(); ++m)
    out.a(m) = (basis->elements[m] * h).trace().real() / basis->norm;
  out.basis = std::move(basis);
  return out;
}

Eigen::MatrixXcd reconstruct(const HamiltonianCoeffs& coeffs) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(coeffs.basis->dim, coeffs.basis->dim);
  for (int m = 0; m < coeffs.basis->size(); ++m) h += coeffs.a(m) * coeffs.basis->elements[m];
  return h;
}

}  // namespace qhid::liealg
