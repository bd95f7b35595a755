// Copyright 2026 The nlbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra for few-qubit states.
//
// All types are templated on the real scalar; `Ket`, `Unitary` and
// `DensityOperator` are the double-precision instantiations used by the rest
// of the library. Multi-qubit indices put the leftmost factor in the most
// significant position, so |01> = |0> (x) |1> has amplitude 1 at index 1.

#ifndef NLBOX_QUANTUM_HPP_
#define NLBOX_QUANTUM_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlbox/errors.hpp"
#include "nlbox/io.hpp"

namespace nlbox {

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

namespace quantum_tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPositive = 1e-10;
inline constexpr double kUnitary = 1e-12;
inline constexpr double kOrthonormal = 1e-10;
}  // namespace quantum_tol

// Amplitude vector. Not required to be normalized: hybrid branches carry
// unnormalized kets whose squared norm contributes to the mixture weight.
template <typename Real>
class BasicKet {
 public:
  using Scalar = std::complex<Real>;

  explicit BasicKet(CVector<Real> amplitudes)
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw DimensionError("ket of dimension 0");
    if (!amplitudes_.allFinite()) throw ValidationError("ket not finite");
  }

  static BasicKet basis(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) throw DimensionError("basis index");
    CVector<Real> v = CVector<Real>::Zero(dim);
    v(index) = Scalar(1);
    return BasicKet(std::move(v));
  }

  // "01" -> |01>.
  static BasicKet from_label(std::string_view bits) {
    if (bits.empty() || bits.size() > 20) throw DimensionError("ket label");
    Eigen::Index index = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw ValidationError("ket label bit");
      index = 2 * index + (ch - '0');
    }
    return basis(Eigen::Index{1} << bits.size(), index);
  }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const CVector<Real>& amplitudes() const { return amplitudes_; }
  Scalar operator[](Eigen::Index i) const { return amplitudes_(i); }

  Real norm() const { return amplitudes_.norm(); }
  Real squared_norm() const { return amplitudes_.squaredNorm(); }
  bool is_normalized() const { return std::abs(norm() - Real(1)) <= 1e-12; }
  BasicKet normalized() const {
    Real n = norm();
    if (n == Real(0)) throw ValidationError("cannot normalize a zero ket");
    return BasicKet(amplitudes_ / n);
  }

  CMatrix<Real> projector() const {
    return amplitudes_ * amplitudes_.adjoint();
  }

  friend BasicKet operator+(const BasicKet& x, const BasicKet& y) {
    if (x.dim() != y.dim()) throw DimensionError("ket dimensions differ");
    return BasicKet(x.amplitudes_ + y.amplitudes_);
  }
  friend BasicKet operator*(Scalar alpha, const BasicKet& x) {
    return BasicKet(alpha * x.amplitudes_);
  }

 private:
  CVector<Real> amplitudes_;
};

template <typename Real>
class BasicUnitary {
 public:
  explicit BasicUnitary(CMatrix<Real> matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
      throw DimensionError("unitary must be square");
    }
    const auto defect =
        (matrix_.adjoint() * matrix_ -
         CMatrix<Real>::Identity(matrix_.rows(), matrix_.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (!(defect <= quantum_tol::kUnitary)) {
      throw ValidationError("matrix is not unitary");
    }
  }

  static BasicUnitary identity(Eigen::Index dim) {
    return BasicUnitary(CMatrix<Real>::Identity(dim, dim));
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix<Real>& matrix() const { return matrix_; }

  friend BasicKet<Real> operator*(const BasicUnitary& u,
                                  const BasicKet<Real>& x) {
    if (u.dim() != x.dim()) throw DimensionError("unitary/ket dimensions");
    return BasicKet<Real>(u.matrix_ * x.amplitudes());
  }
  friend BasicUnitary operator*(const BasicUnitary& u, const BasicUnitary& v) {
    if (u.dim() != v.dim()) throw DimensionError("unitary dimensions");
    return BasicUnitary(u.matrix_ * v.matrix_);
  }

 private:
  CMatrix<Real> matrix_;
};

// Positive semidefinite, Hermitian, unit-trace operator (checked on
// construction).
template <typename Real>
class BasicDensityOperator {
 public:
  using Scalar = std::complex<Real>;

  explicit BasicDensityOperator(CMatrix<Real> matrix)
      : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
      throw DimensionError("density operator must be square");
    }
    if (!matrix_.allFinite()) throw ValidationError("density not finite");
    const Real herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= quantum_tol::kHermitian)) {
      throw ValidationError("density operator is not Hermitian");
    }
    if (!(std::abs(matrix_.trace() - Scalar(1)) <= quantum_tol::kTrace)) {
      throw ValidationError("density operator trace is not 1");
    }
    // Symmetrize so downstream eigen-solvers see an exactly Hermitian input.
    matrix_ = (matrix_ + matrix_.adjoint().eval()) * Real(0.5);
    if (min_eigenvalue() < -quantum_tol::kPositive) {
      throw ValidationError("density operator is not positive");
    }
  }

  static BasicDensityOperator pure(const BasicKet<Real>& psi) {
    return BasicDensityOperator(psi.normalized().projector());
  }
  static BasicDensityOperator maximally_mixed(Eigen::Index dim) {
    return BasicDensityOperator(CMatrix<Real>::Identity(dim, dim) /
                                Real(dim));
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix<Real>& matrix() const { return matrix_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const {
    return matrix_(i, j);
  }

  Real min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(
        matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  // Conjugation by a unitary.
  BasicDensityOperator evolve(const BasicUnitary<Real>& u) const {
    if (u.dim() != dim()) throw DimensionError("unitary/density dimensions");
    return BasicDensityOperator(u.matrix() * matrix_ * u.matrix().adjoint());
  }

 private:
  CMatrix<Real> matrix_;
};

using Ket = BasicKet<double>;
using Unitary = BasicUnitary<double>;
using DensityOperator = BasicDensityOperator<double>;

// The rotation [[cos t, sin t], [-sin t, cos t]] read in row-vector form:
// |0> -> cos t |0> + sin t |1>,  |1> -> -sin t |0> + cos t |1>.
// `matrix()` is the column-vector operator, i.e. the transpose of that table.
template <typename Real = double>
BasicUnitary<Real> rotation(Real theta) {
  if (!std::isfinite(theta)) throw DomainError("rotation angle not finite");
  using std::cos;
  using std::sin;
  CMatrix<Real> m(2, 2);
  m << cos(theta), -sin(theta), sin(theta), cos(theta);
  return BasicUnitary<Real>(std::move(m));
}

template <typename Real>
BasicKet<Real> tensor(const BasicKet<Real>& x, const BasicKet<Real>& y) {
  CVector<Real> v(x.dim() * y.dim());
  for (Eigen::Index i = 0; i < x.dim(); ++i)
    v.segment(i * y.dim(), y.dim()) = x[i] * y.amplitudes();
  return BasicKet<Real>(std::move(v));
}

template <typename Real>
CMatrix<Real> kronecker(const CMatrix<Real>& x, const CMatrix<Real>& y) {
  CMatrix<Real> m(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      m.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return m;
}

template <typename Real>
BasicUnitary<Real> tensor(const BasicUnitary<Real>& x,
                          const BasicUnitary<Real>& y) {
  return BasicUnitary<Real>(kronecker<Real>(x.matrix(), y.matrix()));
}

template <typename Real>
BasicDensityOperator<Real> tensor(const BasicDensityOperator<Real>& x,
                                  const BasicDensityOperator<Real>& y) {
  return BasicDensityOperator<Real>(kronecker<Real>(x.matrix(), y.matrix()));
}

template <typename Real>
struct WeightedKet {
  Real weight;
  BasicKet<Real> ket;
};

// rho = sum_i w_i |psi_i><psi_i| / trace. Kets need not be normalized.
template <typename Real>
BasicDensityOperator<Real> density_from_mixture(
    std::span<const WeightedKet<Real>> branches) {
  if (branches.empty()) throw ValidationError("empty mixture");
  const Eigen::Index dim = branches.front().ket.dim();
  CMatrix<Real> rho = CMatrix<Real>::Zero(dim, dim);
  for (const auto& [w, ket] : branches) {
    if (ket.dim() != dim) throw DimensionError("mixture dimensions differ");
    if (!(w >= Real(0)) || !std::isfinite(w)) {
      throw ValidationError("mixture weight must be finite and >= 0");
    }
    if (w > Real(0)) rho.noalias() += w * ket.projector();
  }
  const Real trace = rho.trace().real();
  if (!(trace > Real(0))) throw ValidationError("mixture has zero weight");
  return BasicDensityOperator<Real>(rho / trace);
}

template <typename Real>
BasicDensityOperator<Real> density_from_mixture(
    const std::vector<WeightedKet<Real>>& branches) {
  return density_from_mixture(std::span<const WeightedKet<Real>>(branches));
}

// Reduced operator on factor `keep` of a system with factor dimensions
// `dims` (leftmost most significant).
template <typename Real>
BasicDensityOperator<Real> partial_trace(const BasicDensityOperator<Real>& rho,
                                         std::size_t keep,
                                         std::span<const Eigen::Index> dims) {
  if (keep >= dims.size()) throw DimensionError("partial_trace: keep index");
  Eigen::Index total = 1;
  for (auto d : dims) {
    if (d < 1) throw DimensionError("partial_trace: factor dimension");
    total *= d;
  }
  if (total != rho.dim()) {
    throw DimensionError("partial_trace: factors do not multiply to dim");
  }
  Eigen::Index left = 1, right = 1;
  for (std::size_t i = 0; i < keep; ++i) left *= dims[i];
  for (std::size_t i = keep + 1; i < dims.size(); ++i) right *= dims[i];
  const Eigen::Index kept = dims[keep];

  CMatrix<Real> reduced = CMatrix<Real>::Zero(kept, kept);
  for (Eigen::Index k = 0; k < kept; ++k)
    for (Eigen::Index k2 = 0; k2 < kept; ++k2)
      for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index r = 0; r < right; ++r)
          reduced(k, k2) +=
              rho((l * kept + k) * right + r, (l * kept + k2) * right + r);
  return BasicDensityOperator<Real>(std::move(reduced));
}

template <typename Real>
BasicDensityOperator<Real> partial_trace(
    const BasicDensityOperator<Real>& rho, std::size_t keep,
    std::initializer_list<Eigen::Index> dims) {
  return partial_trace(rho, keep,
                       std::span<const Eigen::Index>(dims.begin(), dims.size()));
}

// (1/2) sum |eig(rho - sigma)|.
template <typename Real>
Real trace_distance(const BasicDensityOperator<Real>& rho,
                    const BasicDensityOperator<Real>& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance dims");
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(
      rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
  return Real(0.5) * solver.eigenvalues().cwiseAbs().sum();
}

// Rotates the first component of magnitude above 1e-12 onto the positive
// real axis.
template <typename Real>
CVector<Real> fix_phase(CVector<Real> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > Real(1e-12)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }
  return v;
}

template <typename Real>
struct HelstromResult {
  Real success_probability;
  // Projector onto the positive eigenspace of prior1 rho1 - prior0 rho0;
  // outcome "in the projector" decides rho1.
  CMatrix<Real> witness;
  // Eigenbasis of prior1 rho1 - prior0 rho0, eigenvalues descending.
  std::vector<BasicKet<Real>> basis;
  std::vector<Real> eigenvalues;
};

template <typename Real>
HelstromResult<Real> helstrom(const BasicDensityOperator<Real>& rho0,
                              const BasicDensityOperator<Real>& rho1,
                              Real prior0 = Real(0.5)) {
  if (rho0.dim() != rho1.dim()) throw DimensionError("helstrom dims");
  if (!(prior0 >= Real(0) && prior0 <= Real(1))) {
    throw DomainError("helstrom prior must lie in [0,1]");
  }
  const Real prior1 = Real(1) - prior0;
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(
      prior1 * rho1.matrix() - prior0 * rho0.matrix());
  const auto& values = solver.eigenvalues();
  const Eigen::Index dim = rho0.dim();

  HelstromResult<Real> result;
  result.success_probability =
      Real(0.5) + Real(0.5) * values.cwiseAbs().sum();
  result.witness = CMatrix<Real>::Zero(dim, dim);
  // Eigen sorts ascending.
  for (Eigen::Index k = dim - 1; k >= 0; --k) {
    CVector<Real> v = fix_phase<Real>(solver.eigenvectors().col(k));
    if (values(k) > Real(0)) result.witness.noalias() += v * v.adjoint();
    result.basis.emplace_back(std::move(v));
    result.eigenvalues.push_back(values(k));
  }
  return result;
}

// p_k = <b_k| rho |b_k>. The basis must be orthonormal and complete.
template <typename Real>
std::vector<Real> measure_probs(const BasicDensityOperator<Real>& rho,
                                std::span<const BasicKet<Real>> basis) {
  const Eigen::Index dim = rho.dim();
  if (static_cast<Eigen::Index>(basis.size()) != dim) {
    throw DimensionError("measurement basis must have dim elements");
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].dim() != dim) throw DimensionError("basis ket dimension");
    for (std::size_t j = i; j < basis.size(); ++j) {
      const auto overlap =
          basis[i].amplitudes().dot(basis[j].amplitudes());
      const Real expected = i == j ? Real(1) : Real(0);
      if (std::abs(overlap - std::complex<Real>(expected)) >
          quantum_tol::kOrthonormal) {
        throw ValidationError("measurement basis is not orthonormal");
      }
    }
  }
  std::vector<Real> probs;
  probs.reserve(basis.size());
  for (const auto& b : basis) {
    const auto& v = b.amplitudes();
    probs.push_back((v.adjoint() * rho.matrix() * v)(0, 0).real());
  }
  return probs;
}

template <typename Real>
std::vector<Real> measure_probs(const BasicDensityOperator<Real>& rho,
                                const std::vector<BasicKet<Real>>& basis) {
  return measure_probs(rho, std::span<const BasicKet<Real>>(basis));
}

template <typename Real = double>
std::vector<BasicKet<Real>> computational_basis(Eigen::Index dim) {
  std::vector<BasicKet<Real>> basis;
  for (Eigen::Index i = 0; i < dim; ++i)
    basis.push_back(BasicKet<Real>::basis(dim, i));
  return basis;
}

// (|+>, |->) with |+-> = (|0> +- |1>)/sqrt 2.
template <typename Real = double>
std::vector<BasicKet<Real>> plus_minus_basis() {
  const Real h = Real(1) / std::sqrt(Real(2));
  CVector<Real> plus(2), minus(2);
  plus << h, h;
  minus << h, -h;
  return {BasicKet<Real>(plus), BasicKet<Real>(minus)};
}

// Tensor product of single-factor bases (leftmost most significant).
template <typename Real>
std::vector<BasicKet<Real>> product_basis(
    const std::vector<BasicKet<Real>>& first,
    const std::vector<BasicKet<Real>>& second) {
  std::vector<BasicKet<Real>> basis;
  for (const auto& x : first)
    for (const auto& y : second) basis.push_back(tensor(x, y));
  return basis;
}

// CSV `row,col,re,im`, one line per entry in row-major order.
template <typename Real>
void write_density_csv(std::ostream& out, const BasicDensityOperator<Real>& rho,
                       int digits = kFullPrecision) {
  out << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < rho.dim(); ++i)
    for (Eigen::Index j = 0; j < rho.dim(); ++j)
      out << i << ',' << j << ','
          << format_double(static_cast<double>(rho(i, j).real()), digits)
          << ','
          << format_double(static_cast<double>(rho(i, j).imag()), digits)
          << '\n';
}

}  // namespace nlbox

#endif  // NLBOX_QUANTUM_HPP_
