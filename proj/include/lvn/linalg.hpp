#pragma once

// Dense complex linear algebra shared by every part of the simulator.
//
// Everything here is a free function template over Eigen expressions, so
// callers can pass blocks, products or adjoints without materialising them
// first. The library itself only instantiates Real = double.

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "lvn/errors.hpp"

namespace lvn {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Ket = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = ComplexMatrix<double>;
using CKet = Ket<double>;
using RVector = RealVector<double>;
using Eigen::Index;

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double psd_clamp = 1e-10;
inline constexpr double eigen_cluster = 1e-8;
inline constexpr double normalized = 1e-12;
}  // namespace tol

enum class Keep { A, B };

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  double tolerance = tol::hermitian) {
  return m.rows() == m.cols() && hermiticity_error(m) <= tolerance;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tolerance = 1e-9) {
  if (u.rows() != u.cols()) return false;
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return max_abs(M(u.adjoint() * u) - M::Identity(u.rows(), u.cols())) <= tolerance;
}

template <typename Derived>
bool is_power_of_two(const Eigen::MatrixBase<Derived>& m) {
  const auto n = m.rows();
  return n > 0 && (n & (n - 1)) == 0;
}

/// |k><k|
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> outer(
    const Eigen::MatrixBase<Derived>& k) {
  return k * k.adjoint();
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  static_assert(std::is_same_v<typename DerivedA::Scalar, typename DerivedB::Scalar>,
                "kron operands must share a scalar type");
  using M = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M lhs = a;
  const M rhs = b;
  return Eigen::kroneckerProduct(lhs, rhs).eval();
}

template <typename Real>
struct HermitianEigen {
  RealVector<Real> values;       // ascending
  ComplexMatrix<Real> vectors;   // column i pairs with values(i)

  Ket<Real> vector(Index i) const { return vectors.col(i); }
};

namespace detail {

// Modified Gram-Schmidt over columns [begin, end), in index order.
template <typename Real>
void orthonormalize_columns(ComplexMatrix<Real>& v, Index begin, Index end) {
  for (Index k = begin; k < end; ++k) {
    Ket<Real> col = v.col(k);
    for (Index j = begin; j < k; ++j) col -= v.col(j) * v.col(j).dot(col);
    v.col(k) = col / col.norm();
  }
}

template <typename Real>
Real roundoff_floor(const RealVector<Real>& values) {
  const Real scale = values.size() ? std::max<Real>(1, values.cwiseAbs().maxCoeff()) : 1;
  return 64 * std::numeric_limits<Real>::epsilon() * scale;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrised before decomposition, so it only has to be
/// Hermitian to within tol::hermitian. Eigenvalues come back ascending.
/// Inside a cluster of eigenvalues closer than tol::eigen_cluster the
/// eigenvectors are re-orthonormalised in index order; no particular
/// in-cluster basis is promised.
template <typename Derived>
HermitianEigen<typename Derived::RealScalar> eig_hermitian(
    const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  if (h.rows() != h.cols()) throw DimensionMismatch("eig_hermitian: matrix is not square");
  const Real err = hermiticity_error(h);
  if (!(err <= tol::hermitian))
    throw NotHermitian("eig_hermitian: max |h - h^dagger| = " + std::to_string(err));

  const ComplexMatrix<Real> sym = (h + h.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: solver did not converge");

  HermitianEigen<Real> out{solver.eigenvalues(), solver.eigenvectors()};
  const Index n = out.values.size();
  Index start = 0;
  for (Index i = 1; i <= n; ++i) {
    if (i == n || out.values(i) - out.values(i - 1) >= Real(tol::eigen_cluster)) {
      if (i - start > 1) detail::orthonormalize_columns(out.vectors, start, i);
      start = i;
    }
  }
  return out;
}

/// V f(diag(lambda)) V^dagger for Hermitian h.
template <typename Derived, typename Fn>
ComplexMatrix<typename Derived::RealScalar> hermitian_function(
    const Eigen::MatrixBase<Derived>& h, Fn&& fn) {
  using Real = typename Derived::RealScalar;
  const auto eig = eig_hermitian(h);
  Ket<Real> diag(eig.values.size());
  for (Index i = 0; i < diag.size(); ++i) diag(i) = fn(eig.values(i));
  return eig.vectors * diag.asDiagonal() * eig.vectors.adjoint();
}

/// exp(-i h t).
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> matexp_hermitian(
    const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar t) {
  using Real = typename Derived::RealScalar;
  return hermitian_function(h, [t](Real lambda) {
    return std::polar(Real(1), -lambda * t);
  });
}

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues down to -tol::psd_clamp are treated as roundoff and clamped
/// to zero, as are positive eigenvalues at the level of double roundoff
/// (their square roots would otherwise surface as ~1e-8 noise).
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> matsqrt_psd(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  const auto eig = eig_hermitian(m);
  if (eig.values.size() && eig.values.minCoeff() < -Real(tol::psd_clamp))
    throw NotPSD("matsqrt_psd: eigenvalue " + std::to_string(eig.values.minCoeff()));
  const Real floor = detail::roundoff_floor(eig.values);
  Ket<Real> diag(eig.values.size());
  for (Index i = 0; i < diag.size(); ++i)
    diag(i) = eig.values(i) <= floor ? Real(0) : std::sqrt(eig.values(i));
  return eig.vectors * diag.asDiagonal() * eig.vectors.adjoint();
}

/// Partial trace of a (dA*dB)-square operator on A (x) B, A being the
/// leftmost tensor factor.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& rho,
                                                          Index dA, Index dB, Keep keep) {
  using Real = typename Derived::RealScalar;
  if (dA <= 0 || dB <= 0 || rho.rows() != dA * dB || rho.cols() != dA * dB)
    throw DimensionMismatch("partial_trace: operator is not (dA*dB)-square");
  if (keep == Keep::A) {
    ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(dA, dA);
    for (Index i = 0; i < dA; ++i)
      for (Index j = 0; j < dA; ++j)
        for (Index k = 0; k < dB; ++k) out(i, j) += rho(i * dB + k, j * dB + k);
    return out;
  }
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(dB, dB);
  for (Index i = 0; i < dA; ++i) out += rho.block(i * dB, i * dB, dB, dB);
  return out;
}

}  // namespace lvn
