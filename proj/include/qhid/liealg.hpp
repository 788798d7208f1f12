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

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qhid::liealg {

using cplx = std::complex<double>;

/// Dense rank-3 tensor of structure constants, C(j, k, l) with
/// [X_j, X_k] = sum_l C(j, k, l) X_l. Entries are purely imaginary for a
/// Hermitian basis.
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(int size)
      : size_(size), data_(static_cast<std::size_t>(size) * size * size) {}

  int size() const noexcept { return size_; }
  cplx& operator()(int j, int k, int l) { return data_[index(j, k, l)]; }
  const cplx& operator()(int j, int k, int l) const { return data_[index(j, k, l)]; }

 private:
  std::size_t index(int j, int k, int l) const {
    return (static_cast<std::size_t>(j) * size_ + k) * size_ + l;
  }
  int size_ = 0;
  std::vector<cplx> data_;
};

/// Orthogonal Hermitian traceless basis of su(N) with its structure
/// constants. Immutable once built.
struct BasisSet {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> elements;
  std::vector<std::string> labels;
  /// Common Hilbert-Schmidt norm tr(X_j X_j).
  double norm = 0.0;
  StructureTensor structure;

  int size() const noexcept { return static_cast<int>(elements.size()); }
  std::optional<int> find(std::string_view label) const;
  /// Like find, but throws a config error naming the missing label.
  int index_of(std::string_view label) const;
};

/// Expansion of a Hamiltonian on a basis: H = sum_m a_m X_m.
struct HamiltonianCoeffs {
  Eigen::VectorXd a;
  std::shared_ptr<const BasisSet> basis;
  /// tr(H)/N of the input, not represented in a.
  double removed_trace = 0.0;
};

/// Generalized Gell-Mann matrices (symmetric, antisymmetric, diagonal
/// families in that order), normalized to tr(X_j X_k) = 2 delta_jk. For
/// N = 2 this is (sigma_x, sigma_y, sigma_z).
std::shared_ptr<const BasisSet> gell_mann_basis(int n);

/// Tensor products of Pauli matrices on `qubits` qubits, identity
/// excluded, each factor an unscaled Pauli matrix so tr(X_j X_k) =
/// 2^qubits delta_jk. Labels are strings over {I,X,Y,Z} with qubit 1
/// first; ordering is lexicographic in (I < X < Y < Z), e.g. for two
/// qubits: IX IY IZ XI XX XY XZ YI ... ZZ.
std::shared_ptr<const BasisSet> pauli_basis(int qubits);

/// Validates a user-supplied basis (Hermitian, traceless, mutually
/// orthogonal with a common norm) and computes its structure constants.
std::shared_ptr<const BasisSet> make_basis(std::vector<Eigen::MatrixXcd> elements,
                                           std::vector<std::string> labels);

/// C(j,k,l) = tr(X_l [X_j, X_k]) / tr(X_l^2). Throws ill-conditioned-basis
/// when the elements are not orthogonal.
StructureTensor structure_constants(const std::vector<Eigen::MatrixXcd>& elements);

HamiltonianCoeffs expand_hamiltonian(const Eigen::MatrixXcd& h,
                                     std::shared_ptr<const BasisSet> basis);

/// sum_m a_m X_m
Eigen::MatrixXcd reconstruct(const HamiltonianCoeffs& coeffs);

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y);

}  // namespace qhid::liealg
