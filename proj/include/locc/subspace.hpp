#pragma once

#include "locc/qla.hpp"
#include "locc/types.hpp"

namespace locc {

struct TwoOutcomeOp;

// A two-dimensional logical subspace of a multipartite system, given by the
// images of the logical computational basis.
struct LogicalSubspace {
  std::vector<Index> dims;
  Vector ket0L, ket1L;
};

// Checks orthonormality of the basis pair; throws NotNormalizedError /
// NotOrthogonalError.
void validate_subspace(const LogicalSubspace& ls, Real tol = kUnitaryTol);

// Simultaneous Schmidt-like form of an orthonormal pair across the cut
// {subsystem `cut` | rest}:
//   chi0 = sum_i sqrt(p_i) |i~> |eta_i>,  chi1 = sum_i sqrt(q_i) |i~> |etaPerp_i>
// with <eta_i | etaPerp_i> = 0 whenever both weights are nonzero. The |i~>
// live on the cut subsystem (columns of basisA); eta vectors live on the
// remaining subsystems in order.
struct WalgateDecomposition {
  Index cut = 0;
  std::vector<Index> dims;       // dims of the decomposed pair
  Matrix basisA;                 // dA x dA, columns are the |i~>
  RealVector p, q;               // weights, sum to 1 each
  std::vector<Vector> eta;       // unit vectors on the rest, per index
  std::vector<Vector> etaPerp;

  Index cutDim() const { return basisA.rows(); }
  // Rebuilds chi0 / chi1 (in the cut-first subsystem order).
  Vector chi(int which) const;
};

WalgateDecomposition walgate_decompose(const StateVector& chi0,
                                       const StateVector& chi1, Index cut = 0,
                                       Real tol = kStructuralTol);

// Two-group coarse graining of a decomposition: group 0 collects the indices
// with p_i >= q_i (ties included), group 1 the rest. P0/P1 are projectors on
// the cut subsystem; p >= q holds by construction. Indices with both weights
// below deadTol are "dead" (no amplitude) and are folded into group 0.
struct CoarseGrain {
  Matrix P0, P1;
  Real p = 0, q = 0;
  std::vector<Index> group0, group1;  // active indices only
  std::vector<Index> dead;
};

CoarseGrain coarse_grain(const WalgateDecomposition& wd,
                         Real deadTol = kDeadBranchTol);

// Lifts a logical 2x2 operator to the full space: V L V^dag.
Matrix embed(const LogicalSubspace& ls, const Matrix2& logicalOp);

// Relabeling applied by normalize_ordering, sufficient to undo it.
struct RelabelRecord {
  bool logicalSwapped = false;
  std::vector<Index> aPerm;  // new position of each cut-basis index
};

// Applies label swaps so that op.a >= op.b and the cut-basis indices are
// ordered with the p_i >= q_i block first. Involution: applying the returned
// record again restores the inputs.
RelabelRecord normalize_ordering(WalgateDecomposition& wd, TwoOutcomeOp& op);

// Re-applies a recorded relabeling (its own inverse).
void apply_relabel(WalgateDecomposition& wd, TwoOutcomeOp& op,
                   const RelabelRecord& rec);

}  // namespace locc
