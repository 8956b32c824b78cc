#include "locc/protocol.hpp"

#include "locc/qla.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace locc {
namespace {

// Coarse weights closer than this are treated as the disturbance-free
// (teleport-like) case; the gap a genuine strategy stage can see is bounded
// below by this once dead-index mass is accounted for.
constexpr Real kTeleportTol = 1e-10;
constexpr Real kTrivialTol = 1e-14;
constexpr Real kFrameDriftTol = 1e-8;
constexpr Real kRaySq = 1e-26;

Real clamp01(Real x) { return std::min<Real>(1, std::max<Real>(0, x)); }

// Ratio with the conventions x/0 = +inf for x > 0 and 0/0 = 0.
Real ratio_or(Real num, Real den) {
  if (den == 0.0)
    return num == 0.0 ? 0.0 : std::numeric_limits<Real>::infinity();
  return num / den;
}

std::string cell_name(StrategyCase k) {
  switch (k) {
    case StrategyCase::Interior: return "interior";
    case StrategyCase::CEquals1: return "c1";
    case StrategyCase::DEquals0: return "d0";
    case StrategyCase::Projective: return "projective";
  }
  return "?";
}

void push_trace(std::vector<StageTrace>* tr, Index s, std::string cell, Real a,
                Real b, Real p, Real q, Real c, Real d) {
  if (tr) tr->push_back(StageTrace{s, std::move(cell), a, b, p, q, c, d});
}

// Index convention: amp[iA * dB + iB]; rows of the reshape are cut indices.
Matrix reshape_cut(const Vector& v, Index dA, Index dB) {
  return Eigen::Map<const Matrix>(v.data(), dB, dA).transpose();
}

Vector flatten_cut(const Matrix& r) {
  Vector out(r.rows() * r.cols());
  Eigen::Map<Matrix>(out.data(), r.cols(), r.rows()) = r.transpose();
  return out;
}

Vector apply_cut(const Matrix& kA, const Vector& v, Index dA, Index dB) {
  return flatten_cut(kA * reshape_cut(v, dA, dB));
}

// Deterministic unit vector orthogonal to a unit u, dim >= 2.
Vector orthonormal_complement_unit(const Vector& u) {
  Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  Vector v = Vector::Zero(u.size());
  v(k) = 1;
  v -= u * u.dot(v);
  return v.normalized();
}

struct StageLeafInfo {
  int klass = 0;
  Real weight = 0;
  Index subsystem = 0;
  std::vector<Index> residualDims;
  Vector r0, r1;
};

using LeafSink = std::function<PlanNode::Child(StageLeafInfo)>;

struct StageCtx {
  LeafSink sink;
  std::vector<StageTrace>* trace = nullptr;
  Real tol = kStructuralTol;
};

PlanNode::Child emit_leaf(const StageCtx& ctx, int klass, Real weight, Index s,
                          std::vector<Index> rdims, Vector r0, Vector r1,
                          bool flipped) {
  if (flipped) r0.swap(r1);
  return ctx.sink(StageLeafInfo{klass, weight, s, std::move(rdims),
                                std::move(r0), std::move(r1)});
}

PlanNode::Child emit_dead(const StageCtx& ctx, int klass, Index s,
                          const std::vector<Index>& rdims) {
  return ctx.sink(StageLeafInfo{klass, 0.0, s, rdims, Vector(), Vector()});
}

// Compiles one intended two-outcome operation, acting with parameters (a, b)
// on the orthonormal pair (chi0, chi1) over dims (starting at absolute
// subsystem s), into a subtree of local Kraus pairs. w0 / w1 are the weight
// multipliers for class-0 / class-1 leaves produced below this point.
PlanNode::Child compile_stage(std::vector<Index> dims, Index s, Vector chi0,
                              Vector chi1, Real a, Real b, Real w0, Real w1,
                              bool flipped, const StageCtx& ctx) {
  if (a < b)
    return compile_stage(std::move(dims), s, std::move(chi1), std::move(chi0),
                         b, a, w0, w1, !flipped, ctx);
  a = clamp01(a);
  b = clamp01(b);

  // Keep the working frame orthonormal; small drift here is roundoff from
  // earlier stages and gets squashed before it can accumulate.
  {
    const Real n0 = chi0.norm();
    const Real n1 = chi1.norm();
    if (std::abs(n0 - 1) > kFrameDriftTol || std::abs(n1 - 1) > kFrameDriftTol)
      throw DomainError("compile: residual frame lost normalization");
    chi0 /= n0;
    const Complex ov = chi0.dot(chi1);
    if (std::abs(ov) > kFrameDriftTol)
      throw DomainError("compile: residual frame lost orthogonality");
    chi1 -= chi0 * ov;
    chi1.normalize();
  }

  const Index dA = dims[0];

  // Degenerate intention: one branch is the identity, the other never fires.
  if (a <= kTrivialTol || b >= 1 - kTrivialTol) {
    const bool liveIsZero = b >= 1 - kTrivialTol;  // (a,b) = (1,1)
    auto node = std::make_unique<PlanNode>();
    node->subsystem = s;
    const Matrix ident = Matrix::Identity(dA, dA);
    const Matrix zero = Matrix::Zero(dA, dA);
    node->kraus0 = liveIsZero ? ident : zero;
    node->kraus1 = liveIsZero ? zero : ident;
    if (liveIsZero) {
      node->child0 = emit_leaf(ctx, 0, w0, s, dims, chi0, chi1, flipped);
      node->child1 = emit_dead(ctx, 1, s, dims);
    } else {
      node->child0 = emit_dead(ctx, 0, s, dims);
      node->child1 = emit_leaf(ctx, 1, w1, s, dims, chi0, chi1, flipped);
    }
    return PlanNode::Child{std::move(node)};
  }

  if (dims.size() == 1) {
    // Last subsystem: perform the operation directly in the residual frame,
    // extending each Kraus over the orthocomplement so the pair is complete.
    const Matrix q0 = chi0 * chi0.adjoint();
    const Matrix q1 = chi1 * chi1.adjoint();
    const Matrix pperp = Matrix::Identity(dA, dA) - q0 - q1;
    auto node = std::make_unique<PlanNode>();
    node->subsystem = s;
    node->kraus0 = std::sqrt(a) * (q0 + pperp) + std::sqrt(b) * q1;
    node->kraus1 =
        std::sqrt(1 - a) * (q0 + pperp) + std::sqrt(1 - b) * q1;
    node->child0 = emit_leaf(ctx, 0, w0, s, dims, chi0, chi1, flipped);
    node->child1 = emit_leaf(ctx, 1, w1, s, dims, chi0, chi1, flipped);
    return PlanNode::Child{std::move(node)};
  }

  std::vector<Index> rest(dims.begin() + 1, dims.end());
  const Index dB = product(rest);

  // Common local factor on the cut: nothing to gain by touching this
  // subsystem, descend with the contracted pair.
  {
    const Matrix r0m = reshape_cut(chi0, dA, dB);
    const Matrix r1m = reshape_cut(chi1, dA, dB);
    Index m0 = 0, m1 = 0;
    const Eigen::VectorXd rn0 = r0m.rowwise().squaredNorm();
    const Eigen::VectorXd rn1 = r1m.rowwise().squaredNorm();
    rn0.maxCoeff(&m0);
    rn1.maxCoeff(&m1);
    const Vector rhat0 = r0m.row(m0).transpose().normalized();
    const Vector rhat1 = r1m.row(m1).transpose().normalized();
    const Vector fA0 = r0m * rhat0.conjugate();
    const Vector fA1 = r1m * rhat1.conjugate();
    const Real res0 = (r0m - fA0 * rhat0.transpose()).norm();
    const Real res1 = (r1m - fA1 * rhat1.transpose()).norm();
    if (res0 < 1e-12 && res1 < 1e-12 &&
        std::abs(std::abs(fA0.dot(fA1)) - 1) < 1e-12) {
      Vector rr0 = (fA0.adjoint() * r0m).transpose();
      Vector rr1 = (fA0.adjoint() * r1m).transpose();
      rr0.normalize();
      rr1.normalize();
      return compile_stage(std::move(rest), s + 1, std::move(rr0),
                           std::move(rr1), a, b, w0, w1, flipped, ctx);
    }
  }

  const WalgateDecomposition wd =
      walgate_decompose(StateVector{dims, chi0}, StateVector{dims, chi1}, 0,
                        ctx.tol);
  const CoarseGrain cg = coarse_grain(wd);

  std::vector<Index> active = cg.group0;
  active.insert(active.end(), cg.group1.begin(), cg.group1.end());
  std::sort(active.begin(), active.end());

  if (active.size() == 1) {
    const Index i0 = active.front();
    return compile_stage(std::move(rest), s + 1, wd.eta[i0], wd.etaPerp[i0], a,
                         b, w0, w1, flipped, ctx);
  }

  if (std::abs(cg.p - cg.q) < kTeleportTol) {
    // Equal coarse weights force equal weights index by index: projecting
    // onto any cut index leaves the logical content untouched. Peel one
    // index per node; the logical operation happens downstream.
    push_trace(ctx.trace, s, "teleport", a, b, cg.p, cg.q, 1, 0);
    const Index i0 = active.front();
    Matrix p0 = wd.basisA.col(i0) * wd.basisA.col(i0).adjoint();
    for (Index i : cg.dead) p0 += wd.basisA.col(i) * wd.basisA.col(i).adjoint();
    Matrix p1 = Matrix::Zero(dA, dA);
    for (size_t t = 1; t < active.size(); ++t)
      p1 += wd.basisA.col(active[t]) * wd.basisA.col(active[t]).adjoint();

    auto node = std::make_unique<PlanNode>();
    node->subsystem = s;
    node->kraus0 = p0;
    node->kraus1 = p1;
    node->child0 =
        compile_stage(rest, s + 1, wd.eta[i0], wd.etaPerp[i0], a, b,
                      w0 * wd.p[i0], w1 * wd.q[i0], flipped, ctx);
    if (active.size() == 2) {
      const Index i1 = active[1];
      node->child1 =
          compile_stage(rest, s + 1, wd.eta[i1], wd.etaPerp[i1], a, b,
                        w0 * wd.p[i1], w1 * wd.q[i1], flipped, ctx);
    } else {
      Vector c0 = apply_cut(p1, chi0, dA, dB);
      Vector c1 = apply_cut(p1, chi1, dA, dB);
      const Real m0sq = c0.squaredNorm(), m1sq = c1.squaredNorm();
      c0 /= std::sqrt(m0sq);
      c1 /= std::sqrt(m1sq);
      node->child1 = compile_stage(dims, s, std::move(c0), std::move(c1), a, b,
                                   w0 * m0sq, w1 * m1sq, flipped, ctx);
    }
    return PlanNode::Child{std::move(node)};
  }

  const StrategyParams sp = strategy_select(a, b, cg.p, cg.q);
  const bool projLike = sp.c > 1 - 1e-12 && sp.d < 1e-12;
  push_trace(ctx.trace, s,
             sp.kase == StrategyCase::Interior && projLike
                 ? "projective"
                 : cell_name(sp.kase),
             a, b, cg.p, cg.q, sp.c, sp.d);

  const Matrix kA0 = std::sqrt(sp.c) * cg.P0 + std::sqrt(sp.d) * cg.P1;
  const Matrix kA1 =
      std::sqrt(1 - sp.c) * cg.P0 + std::sqrt(1 - sp.d) * cg.P1;
  const Vector v00 = apply_cut(kA0, chi0, dA, dB);
  const Vector v01 = apply_cut(kA0, chi1, dA, dB);
  const Vector v10 = apply_cut(kA1, chi0, dA, dB);
  const Vector v11 = apply_cut(kA1, chi1, dA, dB);

  auto node = std::make_unique<PlanNode>();
  node->subsystem = s;
  node->kraus0 = kA0;
  node->kraus1 = kA1;

  // Branch whose achieved pair is proportional to the intended diagonal
  // (ia, ib): a finished leaf of the given class.
  auto leaf_branch = [&](int klass, const Vector& u0, const Vector& u1,
                         Real ia, Real ib, Real wk) -> PlanNode::Child {
    const Real s0sq = u0.squaredNorm();
    const Real s1sq = u1.squaredNorm();
    if (s0sq + s1sq < kDeadBranchTol) return emit_dead(ctx, klass, s, dims);
    const Real alpha = (s0sq + s1sq) / (ia + ib);
    Vector r0, r1;
    if (s0sq >= kRaySq) r0 = u0 / std::sqrt(s0sq);
    if (s1sq >= kRaySq) r1 = u1 / std::sqrt(s1sq);
    if (r0.size() == 0) r0 = orthonormal_complement_unit(r1);
    if (r1.size() == 0) r1 = orthonormal_complement_unit(r0);
    return emit_leaf(ctx, klass, wk * alpha, s, dims, std::move(r0),
                     std::move(r1), flipped);
  };

  // Branch whose achieved pair is not proportional to either intention:
  // chain a completion toward (a, b) on the renormalized pair.
  auto completion_branch = [&](const Vector& u0,
                               const Vector& u1) -> PlanNode::Child {
    const Real aP = u0.squaredNorm();
    const Real bP = u1.squaredNorm();
    if (aP < 1e-13 || bP < 1e-13)
      throw DomainError("compile: completion branch collapsed a ray");
    const CompletionOp comp = completion_op(a, b, aP, bP);
    return compile_stage(dims, s, u0 / std::sqrt(aP), u1 / std::sqrt(bP),
                         comp.a0, comp.b0, w0 * comp.alpha0, w1 * comp.alpha1,
                         flipped, ctx);
  };

  switch (sp.kase) {
    case StrategyCase::Interior:
      node->child0 = leaf_branch(0, v00, v01, a, b, w0);
      node->child1 = leaf_branch(1, v10, v11, 1 - a, 1 - b, w1);
      break;
    case StrategyCase::CEquals1:
      node->child0 = leaf_branch(0, v00, v01, a, b, w0);
      node->child1 = completion_branch(v10, v11);
      break;
    case StrategyCase::DEquals0:
      node->child0 = completion_branch(v00, v01);
      node->child1 = leaf_branch(1, v10, v11, 1 - a, 1 - b, w1);
      break;
    case StrategyCase::Projective:
      node->child0 = completion_branch(v00, v01);
      node->child1 = completion_branch(v10, v11);
      break;
  }
  return PlanNode::Child{std::move(node)};
}

std::unique_ptr<PlanNode> expect_node(PlanNode::Child&& c) {
  auto* n = std::get_if<std::unique_ptr<PlanNode>>(&c);
  if (!n) throw DomainError("compile: stage produced no measurement node");
  return std::move(*n);
}

const std::string& first_label(const BinaryMeasurementTree::Child& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return first_label(
      std::get<std::unique_ptr<BinaryMeasurementTree::Node>>(c)->child0);
}

}  // namespace

StrategyParams strategy_select(Real a, Real b, Real p, Real q) {
  if (!(b >= 0 && a >= b && a <= 1))
    throw DomainError("strategy_select: need 0 <= b <= a <= 1");
  if (!(q >= 0 && p >= q && p <= 1))
    throw DomainError("strategy_select: need 0 <= q <= p <= 1");
  if (p == q) throw DomainError("strategy_select: p == q selects no strategy");

  const bool cond2 = ratio_or(b, a) >= ratio_or(q, p);
  const bool cond1 = ratio_or(1 - b, 1 - a) <= ratio_or(1 - q, 1 - p);
  StrategyParams sp;
  if (cond1 && cond2) {
    sp.kase = StrategyCase::Interior;
    sp.c = clamp01(((1 - q) * a - (1 - p) * b) / (p - q));
    sp.d = clamp01((p * b - q * a) / (p - q));
  } else if (cond2) {
    sp.kase = StrategyCase::CEquals1;
    sp.c = 1;
    sp.d = clamp01((p * b - q * a) / ((1 - q) * a - (1 - p) * b));
  } else if (cond1) {
    sp.kase = StrategyCase::DEquals0;
    sp.c = clamp01((a - b) / (p * (1 - b) - q * (1 - a)));
    sp.d = 0;
  } else {
    sp.kase = StrategyCase::Projective;
    sp.c = 1;
    sp.d = 0;
  }
  return sp;
}

bool completion_feasible(Real a, Real b, Real aP, Real bP) {
  if (!(b >= 0 && a >= b && a <= 1))
    throw DomainError("completion_feasible: need 0 <= b <= a <= 1");
  if (!(aP >= 0 && aP <= 1 && bP >= 0 && bP <= 1))
    throw DomainError("completion_feasible: performed weights outside [0, 1]");
  // Same branch-weight test as completion_op, applied to the performed pair
  // and its complement, with the same slack: boundary residuals land exactly
  // on the edge and must not be rejected by rounding.
  if (a - b < 1e-14) return std::abs(aP - bP) <= 1e-9;
  const auto branch_ok = [&](Real x, Real y) {
    return (1 - b) * x - (1 - a) * y >= -1e-9 * (a - b) &&
           a * y - b * x >= -1e-9 * (a - b);
  };
  return branch_ok(aP, bP) && branch_ok(1 - aP, 1 - bP);
}

CompletionOp completion_op(Real a, Real b, Real aP, Real bP) {
  if (!(b >= 0 && a >= b && a <= 1))
    throw DomainError("completion_op: need 0 <= b <= a <= 1");
  if (!(aP >= 0 && aP <= 1 && bP >= 0 && bP <= 1))
    throw DomainError("completion_op: performed weights outside [0, 1]");
  if (aP <= 0 || bP <= 0)
    throw DegenerateOutcomeError(
        "completion_op: performed outcome annihilated a logical ray");

  CompletionOp op;
  if (a - b < 1e-14) {
    // Proportional intention: any completion splits both rays alike.
    if (std::abs(aP - bP) > 1e-9)
      throw InfeasibleError("completion_op: no completion exists");
    op.alpha0 = aP;
    op.alpha1 = aP;
  } else {
    op.alpha0 = ((1 - b) * aP - (1 - a) * bP) / (a - b);
    op.alpha1 = (a * bP - b * aP) / (a - b);
    if (op.alpha0 < -1e-9 || op.alpha1 < -1e-9)
      throw InfeasibleError("completion_op: no completion exists");
    op.alpha0 = std::max<Real>(0, op.alpha0);
    op.alpha1 = std::max<Real>(0, op.alpha1);
  }
  op.a0 = clamp01(op.alpha0 * a / aP);
  op.b0 = clamp01(op.alpha0 * b / bP);
  op.b0Op = Matrix2::Zero();
  op.b0Op(0, 0) = std::sqrt(op.a0);
  op.b0Op(1, 1) = std::sqrt(op.b0);
  op.b1Op = Matrix2::Zero();
  op.b1Op(0, 0) = std::sqrt(1 - op.a0);
  op.b1Op(1, 1) = std::sqrt(1 - op.b0);
  return op;
}

EffectiveKraus effective_kraus(Real c, Real d, const WalgateDecomposition& wd,
                               const CoarseGrain& cg) {
  if (c < -1e-12 || c > 1 + 1e-12 || d < -1e-12 || d > 1 + 1e-12)
    throw DomainError("effective_kraus: c, d outside [0, 1]");
  c = clamp01(c);
  d = clamp01(d);
  const Index dA = wd.cutDim();
  const Index dB = wd.eta.empty() ? 1 : wd.eta.front().size();

  const Matrix kA0 = std::sqrt(c) * cg.P0 + std::sqrt(d) * cg.P1;
  const Matrix kA1 = std::sqrt(1 - c) * cg.P0 + std::sqrt(1 - d) * cg.P1;
  const Vector chi0 = wd.chi(0);
  const Vector chi1 = wd.chi(1);

  EffectiveKraus ek;
  const Real n00 = c * cg.p + d * (1 - cg.p);
  const Real n01 = c * cg.q + d * (1 - cg.q);
  const Real n10 = (1 - c) * cg.p + (1 - d) * (1 - cg.p);
  const Real n11 = (1 - c) * cg.q + (1 - d) * (1 - cg.q);
  ek.keff0 = Matrix2::Zero();
  ek.keff0(0, 0) = std::sqrt(std::max<Real>(0, n00));
  ek.keff0(1, 1) = std::sqrt(std::max<Real>(0, n01));
  ek.keff1 = Matrix2::Zero();
  ek.keff1(0, 0) = std::sqrt(std::max<Real>(0, n10));
  ek.keff1(1, 1) = std::sqrt(std::max<Real>(0, n11));

  auto primed = [&](const Matrix& kA, Real na, Real nb)
      -> std::optional<LogicalSubspace> {
    if (na + nb < kDeadBranchTol) return std::nullopt;
    LogicalSubspace ls;
    ls.dims = wd.dims;
    Vector u0 = apply_cut(kA, chi0, dA, dB);
    Vector u1 = apply_cut(kA, chi1, dA, dB);
    if (u0.squaredNorm() >= kRaySq)
      ls.ket0L = u0.normalized();
    if (u1.squaredNorm() >= kRaySq) ls.ket1L = u1.normalized();
    if (ls.ket0L.size() == 0) ls.ket0L = orthonormal_complement_unit(ls.ket1L);
    if (ls.ket1L.size() == 0) ls.ket1L = orthonormal_complement_unit(ls.ket0L);
    return ls;
  };
  ek.primed0 = primed(kA0, n00, n01);
  ek.primed1 = primed(kA1, n10, n11);
  return ek;
}

MeasurementPlan compile_two_outcome(const LogicalSubspace& ls,
                                    const TwoOutcomeOp& op,
                                    std::vector<StageTrace>* trace, Real tol) {
  validate_subspace(ls);
  for (Index d : ls.dims)
    if (d < 2) throw ValidationError("compile: subsystem dims must be >= 2");

  const Vector chi0 = ls.ket0L * op.inBasis(0, 0) + ls.ket1L * op.inBasis(1, 0);
  const Vector chi1 = ls.ket0L * op.inBasis(0, 1) + ls.ket1L * op.inBasis(1, 1);

  MeasurementPlan plan;
  plan.dims = ls.dims;
  plan.labels = {"0", "1"};

  StageCtx ctx;
  ctx.trace = trace;
  ctx.tol = tol;
  ctx.sink = [&op](StageLeafInfo li) -> PlanNode::Child {
    PlanLeaf leaf;
    leaf.label = li.klass == 0 ? "0" : "1";
    leaf.correction = li.klass == 0 ? op.outBasis0 : op.outBasis1;
    leaf.outcomeClass = li.klass;
    leaf.weight = li.weight;
    leaf.nextSubsystem = li.subsystem;
    leaf.residualDims = std::move(li.residualDims);
    leaf.residual0 = std::move(li.r0);
    leaf.residual1 = std::move(li.r1);
    return PlanNode::Child{std::move(leaf)};
  };

  plan.root = expect_node(compile_stage(ls.dims, 0, chi0, chi1, op.a, op.b, 1,
                                        1, false, ctx));
  return plan;
}

MeasurementPlan compile_povm(const LogicalSubspace& ls, const Povm& povm,
                             Grouping grouping,
                             std::vector<StageTrace>* trace, Real tol) {
  const PovmValidationReport rep = validate_povm(povm, tol);
  if (!rep.valid())
    throw ValidationError("compile: invalid POVM: " +
                          rep.violations.front().kind + ": " +
                          rep.violations.front().detail);
  if (povm.dim != 2)
    throw ValidationError("compile: the target POVM must act on a qubit");
  validate_subspace(ls);
  for (Index d : ls.dims)
    if (d < 2) throw ValidationError("compile: subsystem dims must be >= 2");

  const BinaryMeasurementTree tree = decompose_binary(povm, grouping, tol);

  // Compiles one cascade node against the pair (v0, v1) holding the images
  // of the logical basis, then grafts each finished branch either onto a
  // labeled leaf or onto the next cascade node in the post-outcome frame.
  std::function<std::unique_ptr<PlanNode>(
      const BinaryMeasurementTree::Node&, const Vector&, const Vector&, Index)>
      build = [&](const BinaryMeasurementTree::Node& bt, const Vector& v0,
                  const Vector& v1, Index s) -> std::unique_ptr<PlanNode> {
    const TwoOutcomeOp& op = bt.op;
    const Vector chi0 = v0 * op.inBasis(0, 0) + v1 * op.inBasis(1, 0);
    const Vector chi1 = v0 * op.inBasis(0, 1) + v1 * op.inBasis(1, 1);

    StageCtx ctx;
    ctx.trace = trace;
    ctx.tol = tol;
    ctx.sink = [&](StageLeafInfo li) -> PlanNode::Child {
      const auto& next = li.klass == 0 ? bt.child0 : bt.child1;
      const Matrix2 outB = li.klass == 0 ? op.outBasis0 : op.outBasis1;
      PlanLeaf leaf;
      leaf.outcomeClass = li.klass;
      leaf.weight = li.weight;
      leaf.nextSubsystem = li.subsystem;
      if (li.r0.size() == 0) {
        // Dead branch: label it with a representative outcome, no residual.
        leaf.label = first_label(next);
        return PlanNode::Child{std::move(leaf)};
      }
      if (const auto* lbl = std::get_if<std::string>(&next)) {
        leaf.label = *lbl;
        leaf.correction = outB;
        leaf.residualDims = std::move(li.residualDims);
        leaf.residual0 = std::move(li.r0);
        leaf.residual1 = std::move(li.r1);
        return PlanNode::Child{std::move(leaf)};
      }
      // Continue with the residual frame carried back to logical labels:
      // columns of W . outB^dag.
      const Vector nv0 =
          li.r0 * std::conj(outB(0, 0)) + li.r1 * std::conj(outB(0, 1));
      const Vector nv1 =
          li.r0 * std::conj(outB(1, 0)) + li.r1 * std::conj(outB(1, 1));
      const auto& nextNode =
          *std::get<std::unique_ptr<BinaryMeasurementTree::Node>>(next);
      return PlanNode::Child{build(nextNode, nv0, nv1, li.subsystem)};
    };

    std::vector<Index> sdims(ls.dims.begin() + s, ls.dims.end());
    return expect_node(compile_stage(std::move(sdims), s, chi0, chi1, op.a,
                                     op.b, 1, 1, false, ctx));
  };

  MeasurementPlan plan;
  plan.dims = ls.dims;
  plan.labels = povm.labels;
  plan.root = build(*tree.root, ls.ket0L, ls.ket1L, 0);
  return plan;
}

}  // namespace locc
