#include "locc/qla.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace locc {

namespace {

void check_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw DomainError(std::string(who) + ": matrix must be square");
}

// Eigendecomposition of a Hermitian matrix with eigenvalues ascending.
Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eig(const Matrix& m,
                                                    Real tol,
                                                    const char* who) {
  check_square(m, who);
  if (hermiticity_residual(m) > tol)
    throw NotPsdError(std::string(who) + ": matrix is not Hermitian (residual " +
                      std::to_string(hermiticity_residual(m)) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success)
    throw DomainError(std::string(who) + ": eigendecomposition failed");
  return es;
}

// 2x2 plane rotation [[c, s e^{i phi}], [-s e^{-i phi}, c]] that zeroes the
// (0,0) entry of G M G^dag. Requires 0 in the convex hull of the diagonal:
// M(1,1) = -t M(0,0) with t >= 0 (or M(0,0) = 0).
Matrix2 pair_zeroing_rotation(const Complex& d1, const Complex& d2,
                              const Complex& m01, const Complex& m10) {
  Matrix2 g = Matrix2::Identity();
  const Real m1 = std::abs(d1);
  if (m1 < 1e-300) return g;
  const Real psi = std::arg(d1);
  const Complex ephase = std::polar(1.0, -psi);
  const Complex u = ephase * m01;
  const Complex v = ephase * m10;
  // Choose phi so that e^{-i phi} u + e^{i phi} v is real (same axis as d1).
  const Real phi = std::atan2(u.imag() + v.imag(), u.real() - v.real());
  const Real r = (std::polar(1.0, -phi) * u + std::polar(1.0, phi) * v).real();
  // In the rotated frame the diagonal is real: solve
  //   tau' + delta' cos(2 theta) + (r/2) sin(2 theta) = 0.
  const Real tauP = (ephase * (d1 + d2)).real() / 2.0;
  const Real deltaP = (ephase * (d1 - d2)).real() / 2.0;
  const Real radius = std::hypot(deltaP, r / 2.0);
  if (radius < 1e-300) return g;
  const Real gamma = std::atan2(r / 2.0, deltaP);
  const Real ratio = std::clamp(-tauP / radius, -1.0, 1.0);
  const Real half = std::acos(ratio);
  // Both acos roots zero the real part; the imaginary leak of a slightly
  // misaligned pair scales with sin^2(theta), so evaluate the true entry at
  // each root and keep the better one.
  Real best = std::numeric_limits<Real>::infinity();
  for (const Real theta : {0.5 * (gamma + half), 0.5 * (gamma - half)}) {
    const Real c = std::cos(theta), s = std::sin(theta);
    const Complex entry =
        c * c * d1 + s * s * d2 +
        c * s * (std::polar(1.0, -phi) * m01 + std::polar(1.0, phi) * m10);
    if (std::abs(entry) < best) {
      best = std::abs(entry);
      g(0, 0) = c;
      g(0, 1) = s * std::polar(1.0, phi);
      g(1, 0) = -s * std::polar(1.0, -phi);
      g(1, 1) = c;
    }
  }
  return g;
}

// Applies the plane rotation g on indices (i, j) to w (conjugation) and
// accumulates it into u (left multiplication).
void apply_rotation(Matrix& w, Matrix& u, const Matrix2& g, Index i, Index j) {
  const Index d = w.rows();
  for (Index k = 0; k < d; ++k) {
    const Complex wi = w(i, k), wj = w(j, k);
    w(i, k) = g(0, 0) * wi + g(0, 1) * wj;
    w(j, k) = g(1, 0) * wi + g(1, 1) * wj;
    const Complex ui = u(i, k), uj = u(j, k);
    u(i, k) = g(0, 0) * ui + g(0, 1) * uj;
    u(j, k) = g(1, 0) * ui + g(1, 1) * uj;
  }
  for (Index k = 0; k < d; ++k) {
    const Complex wi = w(k, i), wj = w(k, j);
    w(k, i) = wi * std::conj(g(0, 0)) + wj * std::conj(g(0, 1));
    w(k, j) = wi * std::conj(g(1, 0)) + wj * std::conj(g(1, 1));
  }
}

}  // namespace

Matrix psd_sqrt(const Matrix& m, Real tol) {
  auto es = hermitian_eig(m, tol, "psd_sqrt");
  RealVector evals = es.eigenvalues();
  if (evals.minCoeff() < -tol)
    throw NotPsdError("psd_sqrt: negative eigenvalue " +
                      std::to_string(evals.minCoeff()));
  RealVector roots(evals.size());
  for (Index i = 0; i < evals.size(); ++i)
    roots[i] = std::sqrt(std::max(evals[i], 0.0));
  return es.eigenvectors() * roots.asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix psd_pinv_sqrt(const Matrix& m, Real tol) {
  auto es = hermitian_eig(m, tol, "psd_pinv_sqrt");
  RealVector evals = es.eigenvalues();
  if (evals.minCoeff() < -tol)
    throw NotPsdError("psd_pinv_sqrt: negative eigenvalue " +
                      std::to_string(evals.minCoeff()));
  RealVector roots(evals.size());
  for (Index i = 0; i < evals.size(); ++i)
    roots[i] = evals[i] > tol ? 1.0 / std::sqrt(evals[i]) : 0.0;
  return es.eigenvectors() * roots.asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix zero_diagonal_unitary(const Matrix& n, Real tol, Real traceTol) {
  check_square(n, "zero_diagonal_unitary");
  const Index d = n.rows();
  const Real scale = std::max(n.cwiseAbs().maxCoeff(), 1.0);
  if (std::abs(n.trace()) > traceTol * scale * static_cast<Real>(d))
    throw NotTracelessError("zero_diagonal_unitary: trace magnitude " +
                            std::to_string(std::abs(n.trace())));

  Matrix w = n;
  Matrix u = Matrix::Identity(d, d);
  const long maxRotations = 100 * d * d;
  long rotations = 0;
  Matrix2 swapG;
  swapG << 0, 1, -1, 0;

  auto rotate = [&](const Matrix2& g, Index i, Index j) {
    apply_rotation(w, u, g, i, j);
    ++rotations;
  };

  for (Index k = 0; k + 1 < d && rotations < maxRotations; ++k) {
    // Deflation step: make w(k, k) ~ 0 using rotations among indices >= k,
    // then leave row/column k alone. The trailing block stays traceless.
    std::vector<Index> act;
    for (Index i = k; i < d; ++i) act.push_back(i);

    auto diag_at = [&](Index i) { return w(i, i); };
    Real maxDiag = 0;
    for (Index i : act) maxDiag = std::max(maxDiag, std::abs(diag_at(i)));
    if (maxDiag < tol * scale) break;

    const Real eps0 = 1e-14 * scale;

    // Already-zero entry: swap it into position k.
    Index zi = -1;
    for (Index i : act)
      if (std::abs(diag_at(i)) < eps0) { zi = i; break; }

    if (zi < 0) {
      // Anti-proportional pair (i, j): d_j = -t d_i, t >= 0.
      Index pi = -1, pj = -1;
      for (size_t ii = 0; ii < act.size() && pi < 0; ++ii) {
        for (size_t jj = 0; jj < act.size(); ++jj) {
          if (ii == jj) continue;
          const Complex di = diag_at(act[ii]), dj = diag_at(act[jj]);
          const Complex prod = std::conj(di) * dj;
          if (std::abs(prod.imag()) <= 1e-12 * std::abs(prod) + 1e-28 &&
              prod.real() < 0) {
            pi = act[ii];
            pj = act[jj];
            break;
          }
        }
      }
      if (pi >= 0) {
        rotate(pair_zeroing_rotation(w(pi, pi), w(pj, pj), w(pi, pj),
                                     w(pj, pi)),
               pi, pj);
        zi = pi;
      } else {
        // Triple: pick the largest entry d_i; since the diagonal sums to 0,
        // -d_i lies in the cone of the remaining entries and (2D Caratheodory)
        // in the cone of some pair (b, c): d_i + mu_b d_b + mu_c d_c = 0.
        Index bi = act[0];
        for (Index i : act)
          if (std::abs(diag_at(i)) > std::abs(diag_at(bi))) bi = i;
        const Complex di = diag_at(bi);
        Index tb = -1, tc = -1;
        Real muB = 0;
        for (size_t ii = 0; ii < act.size() && tb < 0; ++ii) {
          if (act[ii] == bi) continue;
          for (size_t jj = ii + 1; jj < act.size(); ++jj) {
            if (act[jj] == bi) continue;
            const Complex db = diag_at(act[ii]), dc = diag_at(act[jj]);
            const Real det = db.real() * dc.imag() - db.imag() * dc.real();
            if (std::abs(det) < 1e-30) continue;
            const Real mb =
                (-di.real() * dc.imag() + di.imag() * dc.real()) / det;
            const Real mc =
                (-db.real() * di.imag() + db.imag() * di.real()) / det;
            if (mb >= -1e-9 && mc >= -1e-9) {
              tb = act[ii];
              tc = act[jj];
              muB = std::max(mb, 0.0);
              break;
            }
          }
        }
        if (tb < 0) {
          // Roundoff leak from earlier steps can shrink the hull until no
          // exact combination remains; zero the most anti-aligned pair as
          // well as possible (the clamped solve bounds the leftover by the
          // leak itself).
          Index fi = -1, fj = -1;
          Real bestMis = std::numeric_limits<Real>::infinity();
          for (Index i : act) {
            for (Index j : act) {
              if (i == j) continue;
              const Complex prod = std::conj(diag_at(i)) * diag_at(j);
              if (prod.real() >= 0) continue;
              const Real mis = std::abs(prod.imag()) / std::abs(prod);
              if (mis < bestMis) { bestMis = mis; fi = i; fj = j; }
            }
          }
          if (fi < 0)
            throw DomainError(
                "zero_diagonal_unitary: no zeroing rotation found");
          rotate(pair_zeroing_rotation(w(fi, fi), w(fj, fj), w(fi, fj),
                                       w(fj, fi)),
                 fi, fj);
          zi = fi;
        } else {
          // First move d_i to z = (d_i + muB d_b) / (1 + muB) (a shifted pair
          // zeroing), then z and d_c are anti-proportional; zero exactly.
          const Complex z = (di + muB * diag_at(tb)) / (1.0 + muB);
          if (std::abs(z - di) > 1e-16 * scale) {
            rotate(pair_zeroing_rotation(w(bi, bi) - z, w(tb, tb) - z,
                                         w(bi, tb), w(tb, bi)),
                   bi, tb);
          }
          rotate(pair_zeroing_rotation(w(bi, bi), w(tc, tc), w(bi, tc),
                                       w(tc, bi)),
                 bi, tc);
          zi = bi;
        }
      }
    }
    if (zi != k) rotate(swapG, k, zi);
  }

  Real residual = 0;
  for (Index i = 0; i < d; ++i) residual = std::max(residual, std::abs(w(i, i)));
  if (residual > tol * scale)
    throw DomainError("zero_diagonal_unitary: residual diagonal " +
                      std::to_string(residual) + " above tolerance");
  return u;
}

StateVector permute_subsystems(const StateVector& s,
                               const std::vector<Index>& perm) {
  const size_t m = s.dims.size();
  if (perm.size() != m)
    throw BadPermutationError("permute_subsystems: length mismatch");
  std::vector<bool> seen(m, false);
  for (Index p : perm) {
    if (p < 0 || static_cast<size_t>(p) >= m || seen[p])
      throw BadPermutationError("permute_subsystems: not a permutation");
    seen[p] = true;
  }
  if (s.amps.size() != product(s.dims))
    throw DomainError("permute_subsystems: amplitude count mismatch");

  std::vector<Index> newDims(m);
  for (size_t k = 0; k < m; ++k) newDims[perm[k]] = s.dims[k];

  std::vector<Index> newStride(m, 1);
  for (size_t k = m; k-- > 1;)
    for (size_t j = 0; j < k; ++j) newStride[j] *= newDims[k];

  StateVector out{newDims, Vector::Zero(s.amps.size())};
  std::vector<Index> idx(m, 0);
  for (Index flat = 0; flat < s.amps.size(); ++flat) {
    Index target = 0;
    for (size_t k = 0; k < m; ++k) target += idx[k] * newStride[perm[k]];
    out.amps[target] = s.amps[flat];
    for (size_t k = m; k-- > 0;) {
      if (++idx[k] < s.dims[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

Matrix embed_at(const Matrix& op, const std::vector<Index>& dims, Index k) {
  if (k < 0 || static_cast<size_t>(k) >= dims.size())
    throw DomainError("embed_at: subsystem index out of range");
  check_square(op, "embed_at");
  if (op.rows() != dims[k])
    throw DomainError("embed_at: operator dimension mismatch");
  Index pre = 1, post = 1;
  for (Index i = 0; i < k; ++i) pre *= dims[i];
  for (size_t i = k + 1; i < dims.size(); ++i) post *= dims[i];
  return kron(kron(Matrix::Identity(pre, pre), op),
              Matrix::Identity(post, post));
}

}  // namespace locc
