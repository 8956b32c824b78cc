#include "locc/simulate.hpp"

#include "locc/qla.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace locc {
namespace {

struct NodeOps {
  Matrix k0, k1;  // embedded on the full system
};

using OpCache = std::map<const PlanNode*, NodeOps>;

void build_ops(const PlanNode& n, const std::vector<Index>& dims,
               OpCache& out) {
  out.emplace(&n, NodeOps{embed_at(n.kraus0, dims, n.subsystem),
                          embed_at(n.kraus1, dims, n.subsystem)});
  if (const auto* c = std::get_if<std::unique_ptr<PlanNode>>(&n.child0))
    build_ops(**c, dims, out);
  if (const auto* c = std::get_if<std::unique_ptr<PlanNode>>(&n.child1))
    build_ops(**c, dims, out);
}

void check_plan(const MeasurementPlan& plan) {
  if (!plan.root) throw ValidationError("simulate: plan has no root node");
  if (plan.dims.empty()) throw ValidationError("simulate: plan has no dims");
}

void descend_exact(const PlanNode::Child& c, Vector state, const OpCache& ops,
                   std::map<std::string, Real>& dist) {
  if (const auto* leaf = std::get_if<PlanLeaf>(&c)) {
    dist[leaf->label] += state.squaredNorm();
    return;
  }
  const PlanNode& n = **std::get_if<std::unique_ptr<PlanNode>>(&c);
  const NodeOps& o = ops.at(&n);
  descend_exact(n.child0, o.k0 * state, ops, dist);
  descend_exact(n.child1, o.k1 * state, ops, dist);
}

}  // namespace

std::map<std::string, Real> exact_distribution_state(
    const MeasurementPlan& plan, const Vector& psi) {
  check_plan(plan);
  if (psi.size() != product(plan.dims))
    throw ValidationError("simulate: state dimension does not match plan");
  if (norm_residual(psi) > 1e-8)
    throw NotNormalizedError("simulate: input state must be unit norm");

  OpCache ops;
  build_ops(*plan.root, plan.dims, ops);
  std::map<std::string, Real> dist;
  for (const auto& l : plan.labels) dist[l] = 0;
  Vector root0 = ops.at(plan.root.get()).k0 * psi;
  descend_exact(plan.root->child0, std::move(root0), ops, dist);
  descend_exact(plan.root->child1, ops.at(plan.root.get()).k1 * psi, ops,
                dist);
  return dist;
}

std::map<std::string, Real> exact_distribution(const MeasurementPlan& plan,
                                               const LogicalSubspace& ls,
                                               Complex alpha, Complex beta) {
  if (ls.dims != plan.dims)
    throw ValidationError("simulate: encoding dims do not match plan");
  const Real n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1) > 1e-8)
    throw NotNormalizedError("simulate: |alpha|^2 + |beta|^2 must be 1");
  const Real s = std::sqrt(n2);
  const Vector psi = (alpha / s) * ls.ket0L + (beta / s) * ls.ket1L;
  return exact_distribution_state(plan, psi);
}

SampleResult sample(const MeasurementPlan& plan, const Vector& psi,
                    std::int64_t n, std::uint64_t seed) {
  check_plan(plan);
  if (psi.size() != product(plan.dims))
    throw ValidationError("simulate: state dimension does not match plan");
  if (norm_residual(psi) > 1e-8)
    throw NotNormalizedError("simulate: input state must be unit norm");
  if (n < 0) throw DomainError("simulate: sample count must be >= 0");

  OpCache ops;
  build_ops(*plan.root, plan.dims, ops);

  SampleResult result;
  result.seed = seed;
  result.n = n;
  for (const auto& l : plan.labels) result.counts[l] = 0;

  Rng rng(seed);
  const Vector start = psi / psi.norm();
  for (std::int64_t t = 0; t < n; ++t) {
    const PlanNode* node = plan.root.get();
    Vector state = start;
    for (;;) {
      const NodeOps& o = ops.at(node);
      Vector s0 = o.k0 * state;
      const Real p0 = s0.squaredNorm();
      const bool take0 = rng.uniform() < p0;
      const PlanNode::Child& c = take0 ? node->child0 : node->child1;
      if (take0)
        state = s0 / std::sqrt(p0);
      else {
        Vector s1 = o.k1 * state;
        state = s1 / s1.norm();
      }
      if (const auto* leaf = std::get_if<PlanLeaf>(&c)) {
        ++result.counts[leaf->label];
        break;
      }
      node = std::get_if<std::unique_ptr<PlanNode>>(&c)->get();
    }
  }
  return result;
}

Povm plan_effective_povm(const MeasurementPlan& plan,
                         const LogicalSubspace& ls) {
  check_plan(plan);
  if (ls.dims != plan.dims)
    throw ValidationError("simulate: encoding dims do not match plan");
  validate_subspace(ls);

  OpCache ops;
  build_ops(*plan.root, plan.dims, ops);

  const Index dim = product(plan.dims);
  Matrix v(dim, 2);
  v.col(0) = ls.ket0L;
  v.col(1) = ls.ket1L;

  std::map<std::string, Matrix2> acc;
  for (const auto& l : plan.labels) acc[l] = Matrix2::Zero();

  std::function<void(const PlanNode::Child&, const Matrix&)> walk =
      [&](const PlanNode::Child& c, const Matrix& mv) {
        if (const auto* leaf = std::get_if<PlanLeaf>(&c)) {
          acc[leaf->label] += Matrix2(mv.adjoint() * mv);
          return;
        }
        const PlanNode& n = **std::get_if<std::unique_ptr<PlanNode>>(&c);
        const NodeOps& o = ops.at(&n);
        walk(n.child0, o.k0 * mv);
        walk(n.child1, o.k1 * mv);
      };
  const NodeOps& rootOps = ops.at(plan.root.get());
  walk(plan.root->child0, rootOps.k0 * v);
  walk(plan.root->child1, rootOps.k1 * v);

  Povm out;
  out.dim = 2;
  out.labels = plan.labels;
  for (const auto& l : plan.labels) {
    Matrix2 e = acc.at(l);
    e = (e + Matrix2(e.adjoint())) / 2;
    out.elements.push_back(e);
  }
  return out;
}

AuditReport locality_audit(const MeasurementPlan& plan) {
  check_plan(plan);
  AuditReport rep;

  std::function<void(const PlanNode&, Index, int)> walk =
      [&](const PlanNode& n, Index minSubsystem, int depth) {
        ++rep.nodeCount;
        rep.maxDepth = std::max(rep.maxDepth, depth);
        if (n.subsystem < minSubsystem) rep.pathMonotonic = false;
        const Index d = n.kraus0.rows();
        const Real res =
            (n.kraus0.adjoint() * n.kraus0 + n.kraus1.adjoint() * n.kraus1 -
             Matrix::Identity(d, d))
                .norm();
        rep.nodes.push_back(NodeAudit{n.subsystem, res});
        rep.maxCompletenessResidual = std::max(rep.maxCompletenessResidual, res);
        for (const PlanNode::Child* c : {&n.child0, &n.child1}) {
          if (const auto* next = std::get_if<std::unique_ptr<PlanNode>>(c))
            walk(**next, n.subsystem, depth + 1);
          else
            ++rep.leafCount;
        }
      };
  walk(*plan.root, 0, 1);
  return rep;
}

}  // namespace locc
