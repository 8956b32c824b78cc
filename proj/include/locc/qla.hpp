#pragma once

#include "locc/types.hpp"

namespace locc {

// Kronecker product, subsystem 0 on the left (most significant index).
template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a,
            const Eigen::MatrixBase<DerivedB>& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
  return out;
}

template <typename Derived>
Matrix dagger(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint();
}

inline Real hermiticity_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Principal square root of a Hermitian PSD matrix. Eigenvalues in
// [-tol, 0) are clamped to zero; anything below -tol raises NotPsdError.
Matrix psd_sqrt(const Matrix& m, Real tol = kStructuralTol);

// Pseudo-inverse square root: 1/sqrt(lambda) on eigenvalues > tol, zero on
// the kernel.
Matrix psd_pinv_sqrt(const Matrix& m, Real tol = kStructuralTol);

// Unitary U such that U n U^dag has all-zero diagonal, for traceless n.
// Built from complex 2x2 plane rotations; throws NotTracelessError when
// |tr n| exceeds traceTol.
Matrix zero_diagonal_unitary(const Matrix& n, Real tol = 1e-10,
                             Real traceTol = kStructuralTol);

// Reorders subsystems: perm[k] is the new position of subsystem k.
StateVector permute_subsystems(const StateVector& s,
                               const std::vector<Index>& perm);

// Lifts an operator acting on subsystem k to the full tensor product space.
Matrix embed_at(const Matrix& op, const std::vector<Index>& dims, Index k);

// Frobenius distance to the closest normalization: |‖v‖ - 1|.
inline Real norm_residual(const Vector& v) { return std::abs(v.norm() - 1.0); }

}  // namespace locc
