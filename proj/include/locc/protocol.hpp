#pragma once

#include "locc/povm.hpp"
#include "locc/subspace.hpp"
#include "locc/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <variant>

namespace locc {

// Table cell of the local-strategy selection for one stage.
enum class StrategyCase { Interior, CEquals1, DEquals0, Projective };

struct StrategyParams {
  StrategyCase kase = StrategyCase::Interior;
  Real c = 1, d = 0;
};

// Picks the strategy cell for intended (a, b) against cut weights (p, q).
// Preconditions: 0 <= b <= a <= 1, 0 <= q <= p <= 1, p != q. Ratio
// conventions: x/0 = +inf for x > 0, 0/0 = 0. On the boundary where both
// conditions hold with equality the Interior formulas apply (they reduce to
// c = 1, d = 0 there).
StrategyParams strategy_select(Real a, Real b, Real p, Real q);

// Whether a performed (aP, bP) operation admits completion of both outcomes
// toward the intended (a, b) pair.
bool completion_feasible(Real a, Real b, Real aP, Real bP);

// Completion of one performed outcome with parameters (aP, bP) toward the
// intended (a, b): a two-outcome B-pair, diagonal in the residual logical
// frame, with B0 . Aperformed proportional to A0 and B1 . Aperformed
// proportional to A1. Throws DegenerateOutcomeError when aP or bP vanishes
// and InfeasibleError when no completion exists.
struct CompletionOp {
  Real alpha0 = 0, alpha1 = 0;  // branch weights, sum to 1 across a full op
  Real a0 = 0, b0 = 0;          // B0^dag B0 = diag(a0, b0)
  Matrix2 b0Op = Matrix2::Zero();
  Matrix2 b1Op = Matrix2::Zero();
};

CompletionOp completion_op(Real a, Real b, Real aP, Real bP);

// Effective logical action of the cut-local Kraus pair
//   K0 = sqrt(c) P0 + sqrt(d) P1,  K1 = sqrt(1-c) P0 + sqrt(1-d) P1
// on a decomposed pair: diagonal 2x2 effective operators plus the primed
// residual bases. A primed subspace is absent when the branch annihilates
// the whole logical plane; a single dead ray is completed orthogonally.
struct EffectiveKraus {
  Matrix2 keff0 = Matrix2::Zero(), keff1 = Matrix2::Zero();
  std::optional<LogicalSubspace> primed0, primed1;
};

EffectiveKraus effective_kraus(Real c, Real d, const WalgateDecomposition& wd,
                               const CoarseGrain& cg);

// One stage-selection event, for demo reporting. `cell` is the fired cell;
// an Interior selection that lands on (c, d) = (1, 0) is reported as
// "projective" since the executed measurement is projective.
struct StageTrace {
  Index subsystem = 0;
  std::string cell;
  Real a = 0, b = 0, p = 0, q = 0, c = 0, d = 0;
};

// Compiled measurement plan: a binary tree of strictly local Kraus pairs
// with one-way feed-forward (subsystem indices never decrease along paths).
struct PlanLeaf {
  std::string label;
  Matrix2 correction = Matrix2::Identity();
  // Runtime-only chaining data (not serialized):
  int outcomeClass = 0;
  Real weight = 0;
  Index nextSubsystem = 0;
  std::vector<Index> residualDims;
  Vector residual0, residual1;  // empty on dead (zero-probability) branches
  bool dead() const { return residual0.size() == 0; }
};

struct PlanNode {
  using Child = std::variant<std::unique_ptr<PlanNode>, PlanLeaf>;
  Index subsystem = 0;
  Matrix kraus0, kraus1;  // act on `subsystem` alone
  Child child0, child1;
};

struct MeasurementPlan {
  std::vector<Index> dims;
  std::vector<std::string> labels;
  std::unique_ptr<PlanNode> root;
};

// Compiles a single two-outcome logical operation against an encoding into
// a local feed-forward plan; leaves are labeled "0" / "1".
MeasurementPlan compile_two_outcome(const LogicalSubspace& ls,
                                    const TwoOutcomeOp& op,
                                    std::vector<StageTrace>* trace = nullptr,
                                    Real tol = kStructuralTol);

// Full pipeline: binary-decomposes the POVM and compiles every stage,
// chaining residual subspaces; leaves carry the POVM labels.
MeasurementPlan compile_povm(const LogicalSubspace& ls, const Povm& povm,
                             Grouping grouping = Grouping::Balanced,
                             std::vector<StageTrace>* trace = nullptr,
                             Real tol = kStructuralTol);

}  // namespace locc
