#pragma once

#include "locc/subspace.hpp"
#include "locc/types.hpp"

#include <string>
#include <vector>

namespace locc {

// A two-qubit shared pair in its cut-adapted form
//   chi0 = sqrt(p) |0~>|eta0> + sqrt(1-p) |1~>|eta1>
//   chi1 = sqrt(q) |0~>|eta0perp> + sqrt(1-q) |1~>|eta1perp>
// with the index order fixed so that p >= q. K_i collects the conditional
// amplitudes of cut index i; U_i maps the computational basis onto that
// index's eta pair.
struct QssEncoding {
  std::vector<Index> dims{2, 2};
  Vector chi0, chi1;
  Real p = 0, q = 0;
  Matrix2 basisA;  // columns: |0~>, |1~>
  Vector eta0, eta0Perp, eta1, eta1Perp;
  Matrix2 u0, u1;  // U_i = |eta_i><0| + |eta_i perp><1|
  Matrix2 k0, k1;  // K_0 = diag(sqrt p, sqrt q), K_1 the complement
  bool teleportLike = false;  // p == q: first qubit carries no weight skew
  bool productLike = false;   // p == 1, q == 0: the pair factorizes
  bool basesAligned = false;  // eta1 parallel to eta0 (up to phase)
};

QssEncoding make_qss_encoding(const Vector& chi0, const Vector& chi1);

// Three-qubit GHZ secret splitting: the dealer Bell-measures the secret
// against her share, the second party measures diagonally, the third
// applies the announced Pauli correction. All eight outcome combinations.
struct GhzRun {
  int aliceOutcome = 0;  // 0 Phi+, 1 Phi-, 2 Psi+, 3 Psi-
  int bobOutcome = 0;    // 0 plus, 1 minus
  Real probability = 0;
  Vector charlieState;  // normalized, dim 2
  Matrix2 correction;
  Vector corrected;
  Real fidelity = 0;  // overlap with the secret after correction
};

std::vector<GhzRun> run_ghz_protocol(Complex alpha, Complex beta);

// Modified splitting over an arbitrary shared pair: the dealer holds one
// qubit of (|0> chi0 + |1> chi1)/sqrt(2) and Bell-measures it against the
// secret, collapsing the remaining two onto a combination of chi0/chi1.
struct ModifiedRun {
  int aliceOutcome = 0;
  Real probability = 0;
  Vector bcState;   // normalized, dim 4
  Vector2 logical;  // its coordinates in the (chi0, chi1) frame
};

std::vector<ModifiedRun> run_modified_protocol(const QssEncoding& enc,
                                               Complex alpha, Complex beta);

// Scans first-party measurement directions |v> on the Bloch grid and
// evaluates how far the conditional map onto the second party,
// K_v = <v|0~> U0 K0 + <v|1~> U1 K1, is from a multiple of a unitary:
// D = || 2 K_v^dag K_v / tr(K_v^dag K_v) - I ||_F. A direction with D = 0
// relays the encoded qubit to the second party exactly.
struct TransferReport {
  Real minDeviation = 0;
  Real maxDeviation = 0;
  Real thetaStar = 0, phiStar = 0;  // argmin direction
  int gridTheta = 0, gridPhi = 0;
};

TransferReport check_perfect_transfer(const QssEncoding& enc,
                                      int gridTheta = 200, int gridPhi = 400);

// Normality test of N = U1 K1^{-1} K0 U0^dag (K0 inverted instead when K1
// is singular): N N^dag - N^dag N = (p/(1-p) - q/(1-q)) (P_eta1 - P_eta0),
// so a nonzero commutator certifies that the two conditional maps are not
// unitarily alike and the index basis is informative. Throws
// ExcludedCaseError for the factorized p = 1, q = 0 pair where neither K
// is invertible.
struct BasisInfoReport {
  Real commutatorNorm = 0;
  std::string inverted;  // "K1" or "K0"
};

BasisInfoReport check_basis_info(const QssEncoding& enc);

}  // namespace locc
