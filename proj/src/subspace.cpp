#include "locc/subspace.hpp"

#include "locc/povm.hpp"

#include <algorithm>
#include <cmath>

namespace locc {

namespace {

// Deterministic unit vector orthogonal to unit v (dim >= 2): Gram-Schmidt of
// the basis vector with the smallest overlap.
Vector orthogonal_completion(const Vector& v) {
  Index best = 0;
  for (Index k = 1; k < v.size(); ++k)
    if (std::abs(v[k]) < std::abs(v[best])) best = k;
  Vector w = Vector::Zero(v.size());
  w[best] = 1.0;
  w -= v * std::conj(v[best]);
  const Real n = w.norm();
  if (n < 1e-8) throw DomainError("orthogonal_completion: degenerate input");
  return w / n;
}

Vector fixed_unit(Index dim, Index k = 0) {
  Vector v = Vector::Zero(dim);
  v[std::min(k, dim - 1)] = 1.0;
  return v;
}

}  // namespace

void validate_subspace(const LogicalSubspace& ls, Real tol) {
  if (ls.ket0L.size() != product(ls.dims) ||
      ls.ket1L.size() != product(ls.dims))
    throw DomainError("logical subspace: amplitude count mismatch");
  if (norm_residual(ls.ket0L) > tol || norm_residual(ls.ket1L) > tol)
    throw NotNormalizedError("logical subspace: basis vectors not unit norm");
  if (std::abs(ls.ket0L.dot(ls.ket1L)) > tol)
    throw NotOrthogonalError("logical subspace: basis vectors not orthogonal");
}

Vector WalgateDecomposition::chi(int which) const {
  const Index dA = cutDim();
  const Index dB = product(dims) / dA;
  // chi = sum_i sqrt(w_i) |a_i> (x) |rest_i>
  Vector out = Vector::Zero(dA * dB);
  for (Index i = 0; i < dA; ++i) {
    const Real w = which == 0 ? p[i] : q[i];
    if (w <= 0) continue;
    const Vector& rest = which == 0 ? eta[i] : etaPerp[i];
    for (Index r = 0; r < dA; ++r)
      for (Index j = 0; j < dB; ++j)
        out[r * dB + j] += std::sqrt(w) * basisA(r, i) * rest[j];
  }
  return out;
}

WalgateDecomposition walgate_decompose(const StateVector& chi0,
                                       const StateVector& chi1, Index cut,
                                       Real tol) {
  if (chi0.dims != chi1.dims)
    throw DomainError("walgate_decompose: dimension mismatch");
  if (cut < 0 || static_cast<size_t>(cut) >= chi0.dims.size())
    throw DomainError("walgate_decompose: cut out of range");

  StateVector s0 = chi0, s1 = chi1;
  std::vector<Index> dims = chi0.dims;
  if (cut != 0) {
    // Bring the cut subsystem to the front.
    std::vector<Index> perm(dims.size());
    perm[cut] = 0;
    Index pos = 1;
    for (size_t k = 0; k < dims.size(); ++k)
      if (static_cast<Index>(k) != cut) perm[k] = pos++;
    s0 = permute_subsystems(s0, perm);
    s1 = permute_subsystems(s1, perm);
    dims = s0.dims;
  }

  // Accept small orthonormality drift (roundoff from upstream stages) and
  // squash it here so it cannot accumulate; reject anything larger.
  constexpr Real kDriftTol = 1e-8;
  if (norm_residual(s0.amps) > kDriftTol || norm_residual(s1.amps) > kDriftTol)
    throw NotNormalizedError("walgate_decompose: inputs must be unit norm");
  s0.amps.normalize();
  const Complex ov = s0.amps.dot(s1.amps);
  if (std::abs(ov) > kDriftTol)
    throw NotOrthogonalError("walgate_decompose: inputs must be orthogonal");
  s1.amps -= s0.amps * ov;
  s1.amps.normalize();

  const Index dA = dims[0];
  const Index dB = product(dims) / dA;

  // Coefficient matrices across the cut; orthogonality makes M0 M1^dag
  // traceless, so a zero-diagonal basis for it exists.
  Matrix m0 = Eigen::Map<const Matrix>(s0.amps.data(), dB, dA).transpose();
  Matrix m1 = Eigen::Map<const Matrix>(s1.amps.data(), dB, dA).transpose();
  const Matrix n = m0 * m1.adjoint();
  const Matrix u = zero_diagonal_unitary(n, tol);

  const Matrix t0 = u * m0;
  const Matrix t1 = u * m1;

  WalgateDecomposition wd;
  wd.cut = cut;
  wd.dims = dims;
  wd.basisA = u.adjoint();  // columns are the rotated cut-basis kets
  wd.p.resize(dA);
  wd.q.resize(dA);
  wd.eta.resize(dA);
  wd.etaPerp.resize(dA);

  for (Index i = 0; i < dA; ++i) {
    const Vector r0 = t0.row(i).transpose();
    const Vector r1 = t1.row(i).transpose();
    wd.p[i] = r0.squaredNorm();
    wd.q[i] = r1.squaredNorm();
    const bool live0 = wd.p[i] > kDeadBranchTol;
    const bool live1 = wd.q[i] > kDeadBranchTol;
    if (live0) wd.eta[i] = r0 / r0.norm();
    if (live1) wd.etaPerp[i] = r1 / r1.norm();
    // Degenerate rows: fill the undefined side deterministically, keeping
    // the orthogonality invariant where it is required.
    if (!live0 && live1)
      wd.eta[i] = dB >= 2 ? orthogonal_completion(wd.etaPerp[i])
                          : fixed_unit(dB);
    if (live0 && !live1)
      wd.etaPerp[i] = dB >= 2 ? orthogonal_completion(wd.eta[i])
                              : fixed_unit(dB);
    if (!live0 && !live1) {
      wd.eta[i] = fixed_unit(dB, 0);
      wd.etaPerp[i] = dB >= 2 ? fixed_unit(dB, 1) : fixed_unit(dB);
    }
  }
  return wd;
}

CoarseGrain coarse_grain(const WalgateDecomposition& wd, Real deadTol) {
  const Index dA = wd.cutDim();
  CoarseGrain cg;
  cg.P0 = Matrix::Zero(dA, dA);
  cg.P1 = Matrix::Zero(dA, dA);
  for (Index i = 0; i < dA; ++i) {
    const Matrix proj =
        wd.basisA.col(i) * wd.basisA.col(i).adjoint();
    if (wd.p[i] <= deadTol && wd.q[i] <= deadTol) {
      cg.dead.push_back(i);
      cg.P0 += proj;  // dead directions carry no amplitude; park them in P0
      continue;
    }
    if (wd.p[i] >= wd.q[i]) {
      cg.group0.push_back(i);
      cg.P0 += proj;
      cg.p += wd.p[i];
      cg.q += wd.q[i];
    } else {
      cg.group1.push_back(i);
      cg.P1 += proj;
    }
  }
  return cg;
}

Matrix embed(const LogicalSubspace& ls, const Matrix2& logicalOp) {
  Matrix v(ls.ket0L.size(), 2);
  v.col(0) = ls.ket0L;
  v.col(1) = ls.ket1L;
  return v * logicalOp * v.adjoint();
}

namespace {

// Self-inverse permutation placing the p_i >= q_i block first: misplaced
// elements on each side are swapped pairwise (product of disjoint
// transpositions, hence an involution).
std::vector<Index> partition_involution(const RealVector& p,
                                        const RealVector& q) {
  const Index n = p.size();
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    if (p[i] >= q[i]) ++k;
  std::vector<Index> perm(n);
  for (Index i = 0; i < n; ++i) perm[i] = i;
  std::vector<Index> misLeft, misRight;
  for (Index i = 0; i < k; ++i)
    if (p[i] < q[i]) misLeft.push_back(i);
  for (Index i = k; i < n; ++i)
    if (p[i] >= q[i]) misRight.push_back(i);
  for (size_t t = 0; t < misLeft.size(); ++t)
    std::swap(perm[misLeft[t]], perm[misRight[t]]);
  return perm;
}

void apply_perm(WalgateDecomposition& wd, const std::vector<Index>& perm) {
  const Index dA = wd.cutDim();
  Matrix basis(dA, dA);
  RealVector p(dA), q(dA);
  std::vector<Vector> eta(dA), etaPerp(dA);
  for (Index i = 0; i < dA; ++i) {
    basis.col(i) = wd.basisA.col(perm[i]);
    p[i] = wd.p[perm[i]];
    q[i] = wd.q[perm[i]];
    eta[i] = wd.eta[perm[i]];
    etaPerp[i] = wd.etaPerp[perm[i]];
  }
  wd.basisA = basis;
  wd.p = p;
  wd.q = q;
  wd.eta = std::move(eta);
  wd.etaPerp = std::move(etaPerp);
}

void logical_swap(WalgateDecomposition& wd, TwoOutcomeOp& op) {
  std::swap(op.a, op.b);
  op.inBasis.col(0).swap(op.inBasis.col(1));
  op.outBasis0.col(0).swap(op.outBasis0.col(1));
  op.outBasis1.col(0).swap(op.outBasis1.col(1));
  wd.p.swap(wd.q);
  wd.eta.swap(wd.etaPerp);
}

}  // namespace

RelabelRecord normalize_ordering(WalgateDecomposition& wd, TwoOutcomeOp& op) {
  RelabelRecord rec;
  if (op.a < op.b) {
    logical_swap(wd, op);
    rec.logicalSwapped = true;
  }
  rec.aPerm = partition_involution(wd.p, wd.q);
  apply_perm(wd, rec.aPerm);
  return rec;
}

void apply_relabel(WalgateDecomposition& wd, TwoOutcomeOp& op,
                   const RelabelRecord& rec) {
  if (rec.logicalSwapped) logical_swap(wd, op);
  if (!rec.aPerm.empty()) apply_perm(wd, rec.aPerm);
}

}  // namespace locc
