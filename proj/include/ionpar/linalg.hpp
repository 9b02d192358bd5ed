#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ionpar {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Kronecker product a (x) b. The first factor is the most significant index.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace pauli {
template <typename Real = double>
Matrix<std::complex<Real>> identity() {
  return Matrix<std::complex<Real>>::Identity(2, 2);
}
template <typename Real = double>
Matrix<std::complex<Real>> x() {
  Matrix<std::complex<Real>> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
template <typename Real = double>
Matrix<std::complex<Real>> y() {
  using C = std::complex<Real>;
  Matrix<C> m(2, 2);
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}
template <typename Real = double>
Matrix<std::complex<Real>> z() {
  Matrix<std::complex<Real>> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

/// Embed a single-qubit operator on `target` of an n-qubit register
/// (qubit 0 is the most significant bit).
template <typename Derived>
Matrix<typename Derived::Scalar> embed(const Eigen::MatrixBase<Derived>& op, int target,
                                       int n_qubits) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out = Matrix<Scalar>::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    if (q == target) {
      out = kron(out, op);
    } else {
      out = kron(out, Matrix<Scalar>::Identity(2, 2));
    }
  }
  return out;
}

/// Flip the sign of each column so its largest-magnitude entry is positive.
/// Ties (within a relative 1e-9) resolve to the lowest row index.
template <typename Derived>
void fix_column_signs(Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const auto col = m.col(c);
    const double peak = col.cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (std::abs(col(r)) >= peak * (1.0 - 1e-9)) {
        if (col(r) < 0) m.col(c) *= -1;
        break;
      }
    }
  }
}

/// Distance between two unitaries insensitive to a global phase:
/// sqrt(1 - |tr(A^dag B)| / d).
template <typename DerivedA, typename DerivedB>
double phase_insensitive_distance(const Eigen::MatrixBase<DerivedA>& a,
                                  const Eigen::MatrixBase<DerivedB>& b) {
  const double overlap = std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
  return std::sqrt(std::max(0.0, 1.0 - overlap));
}

/// Von Neumann entropy (natural log) of a Hermitian density matrix.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

}  // namespace ionpar
