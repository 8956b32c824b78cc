#include "locc/qss.hpp"

#include "locc/qla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace locc {
namespace {

const Real kInvSqrt2 = Real(1) / std::sqrt(Real(2));

// The four Bell kets on two qubits, in outcome order Phi+, Phi-, Psi+, Psi-.
Vector bell_ket(int k) {
  Vector v = Vector::Zero(4);
  switch (k) {
    case 0: v(0) = kInvSqrt2; v(3) = kInvSqrt2; break;
    case 1: v(0) = kInvSqrt2; v(3) = -kInvSqrt2; break;
    case 2: v(1) = kInvSqrt2; v(2) = kInvSqrt2; break;
    default: v(1) = kInvSqrt2; v(2) = -kInvSqrt2; break;
  }
  return v;
}

// Contracts the two leading qubits of psi (dim 4 * rest) against a bra.
Vector project_leading(const Vector& bra, const Vector& psi) {
  const Index rest = psi.size() / 4;
  Vector out = Vector::Zero(rest);
  for (Index i = 0; i < 4; ++i)
    out += std::conj(bra(i)) * psi.segment(i * rest, rest);
  return out;
}

Matrix2 pauli_x() {
  Matrix2 x = Matrix2::Zero();
  x(0, 1) = 1;
  x(1, 0) = 1;
  return x;
}

Matrix2 pauli_z() {
  Matrix2 z = Matrix2::Identity();
  z(1, 1) = -1;
  return z;
}

}  // namespace

QssEncoding make_qss_encoding(const Vector& chi0, const Vector& chi1) {
  if (chi0.size() != 4 || chi1.size() != 4)
    throw ValidationError("qss encoding: expected two-qubit states");

  QssEncoding enc;
  enc.chi0 = chi0;
  enc.chi1 = chi1;
  WalgateDecomposition wd = walgate_decompose(
      StateVector{{2, 2}, chi0}, StateVector{{2, 2}, chi1}, 0);

  Index i0 = 0, i1 = 1;
  if (wd.p[0] < wd.q[0]) std::swap(i0, i1);  // fix the order so p >= q

  enc.p = wd.p[i0];
  enc.q = wd.q[i0];
  enc.basisA.col(0) = wd.basisA.col(i0);
  enc.basisA.col(1) = wd.basisA.col(i1);
  enc.eta0 = wd.eta[i0];
  enc.eta0Perp = wd.etaPerp[i0];
  enc.eta1 = wd.eta[i1];
  enc.eta1Perp = wd.etaPerp[i1];

  enc.u0.col(0) = enc.eta0;
  enc.u0.col(1) = enc.eta0Perp;
  enc.u1.col(0) = enc.eta1;
  enc.u1.col(1) = enc.eta1Perp;

  enc.k0 = Matrix2::Zero();
  enc.k0(0, 0) = std::sqrt(enc.p);
  enc.k0(1, 1) = std::sqrt(enc.q);
  enc.k1 = Matrix2::Zero();
  enc.k1(0, 0) = std::sqrt(1 - enc.p);
  enc.k1(1, 1) = std::sqrt(1 - enc.q);

  enc.teleportLike = std::abs(enc.p - enc.q) < 1e-12;
  enc.productLike = enc.p > 1 - 1e-12 && enc.q < 1e-12;
  enc.basesAligned = std::abs(enc.eta0.dot(enc.eta1)) > 1 - 1e-10;
  return enc;
}

std::vector<GhzRun> run_ghz_protocol(Complex alpha, Complex beta) {
  const Real n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1) > 1e-8)
    throw NotNormalizedError("ghz protocol: secret must be unit norm");

  Vector secret(2);
  secret << alpha, beta;
  Vector ghz = Vector::Zero(8);
  ghz(0) = kInvSqrt2;  // |000>
  ghz(7) = kInvSqrt2;  // |111>
  const Vector psi = kron(secret, ghz);  // (in, A, B, C)

  Vector plusBra(2), minusBra(2);
  plusBra << kInvSqrt2, kInvSqrt2;
  minusBra << kInvSqrt2, -kInvSqrt2;

  std::vector<GhzRun> runs;
  for (int a = 0; a < 4; ++a) {
    const Vector bc = project_leading(bell_ket(a), psi);  // dim 4: (B, C)
    for (int bOut = 0; bOut < 2; ++bOut) {
      const Vector& bra = bOut == 0 ? plusBra : minusBra;
      Vector c = Vector::Zero(2);
      for (Index i = 0; i < 2; ++i)
        c += std::conj(bra(i)) * bc.segment(i * 2, 2);
      GhzRun run;
      run.aliceOutcome = a;
      run.bobOutcome = bOut;
      run.probability = c.squaredNorm();
      run.charlieState = c / c.norm();
      const bool flip = a >= 2;                       // Psi outcomes
      const int signA = (a == 1 || a == 3) ? -1 : 1;  // minus Bell states
      const int signB = bOut == 0 ? 1 : -1;
      const bool phase = signA * signB < 0;
      run.correction = Matrix2::Identity();
      if (flip) run.correction = pauli_x() * run.correction;
      if (phase) run.correction = pauli_z() * run.correction;
      run.corrected = run.correction * run.charlieState;
      run.fidelity = std::norm(run.corrected.dot(secret));
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

std::vector<ModifiedRun> run_modified_protocol(const QssEncoding& enc,
                                               Complex alpha, Complex beta) {
  const Real n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1) > 1e-8)
    throw NotNormalizedError("modified protocol: secret must be unit norm");

  Vector secret(2);
  secret << alpha, beta;
  Vector e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const Vector shared =
      kInvSqrt2 * (kron(e0, enc.chi0) + kron(e1, enc.chi1));  // (A, B, C)
  const Vector psi = kron(secret, shared);  // (in, A, B, C)

  // Coordinates of the collapsed state in the (chi0, chi1) frame.
  const auto coords = [&](const Vector& bc) {
    Vector2 z;
    z(0) = enc.chi0.dot(bc);
    z(1) = enc.chi1.dot(bc);
    return z;
  };

  std::vector<ModifiedRun> runs;
  for (int a = 0; a < 4; ++a) {
    const Vector bc = project_leading(bell_ket(a), psi);
    ModifiedRun run;
    run.aliceOutcome = a;
    run.probability = bc.squaredNorm();
    run.bcState = bc / bc.norm();
    run.logical = coords(run.bcState);
    runs.push_back(std::move(run));
  }
  return runs;
}

TransferReport check_perfect_transfer(const QssEncoding& enc, int gridTheta,
                                      int gridPhi) {
  if (gridTheta < 2 || gridPhi < 1)
    throw DomainError("check_perfect_transfer: grid too small");
  const Real pi = std::acos(Real(-1));

  const auto deviation = [&](Real theta, Real phi) -> Real {
    const Complex c0 = std::cos(theta / 2);
    const Complex c1 = std::polar(std::sin(theta / 2), phi);
    const Matrix2 k = std::conj(c0) * (enc.u0 * enc.k0) +
                      std::conj(c1) * (enc.u1 * enc.k1);
    const Matrix2 g = k.adjoint() * k;
    const Real tr = g.trace().real();
    if (tr < 1e-14) return 2;  // degenerate direction, nothing transfers
    return (2 / tr * g - Matrix2::Identity()).norm();
  };

  TransferReport rep;
  rep.gridTheta = gridTheta;
  rep.gridPhi = gridPhi;
  rep.minDeviation = std::numeric_limits<Real>::infinity();
  const Real dTheta = pi / (gridTheta - 1);
  const Real dPhi = 2 * pi / gridPhi;
  for (int i = 0; i < gridTheta; ++i) {
    for (int j = 0; j < gridPhi; ++j) {
      const Real theta = i * dTheta;
      const Real phi = j * dPhi;
      const Real d = deviation(theta, phi);
      rep.maxDeviation = std::max(rep.maxDeviation, d);
      if (d < rep.minDeviation) {
        rep.minDeviation = d;
        rep.thetaStar = theta;
        rep.phiStar = phi;
      }
    }
  }

  // One local refinement pass around the coarse argmin.
  const int fine = 21;
  const Real t0 = rep.thetaStar, p0 = rep.phiStar;
  for (int i = 0; i < fine; ++i) {
    for (int j = 0; j < fine; ++j) {
      const Real theta = std::clamp(
          t0 + (i - fine / 2) * dTheta / (fine / 2), Real(0), pi);
      const Real phi = p0 + (j - fine / 2) * dPhi / (fine / 2);
      const Real d = deviation(theta, phi);
      if (d < rep.minDeviation) {
        rep.minDeviation = d;
        rep.thetaStar = theta;
        rep.phiStar = phi;
      }
    }
  }
  return rep;
}

BasisInfoReport check_basis_info(const QssEncoding& enc) {
  BasisInfoReport rep;
  Matrix2 ratio = Matrix2::Zero();
  if (1 - enc.p > 1e-12) {
    // K1 is invertible (q <= p keeps both entries away from 1).
    ratio(0, 0) = std::sqrt(enc.p / (1 - enc.p));
    ratio(1, 1) = std::sqrt(enc.q / (1 - enc.q));
    rep.inverted = "K1";
  } else if (enc.q > 1e-12) {
    ratio(0, 0) = std::sqrt((1 - enc.p) / enc.p);
    ratio(1, 1) = std::sqrt((1 - enc.q) / enc.q);
    rep.inverted = "K0";
  } else {
    throw ExcludedCaseError(
        "check_basis_info: factorized pair, neither side invertible");
  }
  const Matrix2 n = enc.u1 * ratio * enc.u0.adjoint();
  rep.commutatorNorm =
      (n * n.adjoint() - n.adjoint() * n).norm();
  return rep;
}

}  // namespace locc
