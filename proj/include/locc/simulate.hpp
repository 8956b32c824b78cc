#pragma once

#include "locc/protocol.hpp"
#include "locc/random.hpp"
#include "locc/subspace.hpp"

#include <cstdint>
#include <map>

namespace locc {

// Exact outcome distribution of a compiled plan on the encoded logical
// state alpha |0L> + beta |1L>. (alpha, beta) must be unit norm.
std::map<std::string, Real> exact_distribution(const MeasurementPlan& plan,
                                               const LogicalSubspace& ls,
                                               Complex alpha, Complex beta);

// Same, for an arbitrary unit vector of the full system. States outside the
// encoded subspace are still measured (the plan is complete); probabilities
// sum to one.
std::map<std::string, Real> exact_distribution_state(
    const MeasurementPlan& plan, const Vector& psi);

struct SampleResult {
  std::map<std::string, std::int64_t> counts;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
};

// Seeded trajectory sampling: one uniform draw per visited node, outcome 0
// when the draw falls below the branch probability. Byte-reproducible across
// platforms (fixed engine and fixed uniform mapping, see Rng).
SampleResult sample(const MeasurementPlan& plan, const Vector& psi,
                    std::int64_t n, std::uint64_t seed);

// The POVM the plan effectively implements on the logical qubit: one 2x2
// element per label, from the path products restricted to the encoding.
Povm plan_effective_povm(const MeasurementPlan& plan,
                         const LogicalSubspace& ls);

struct NodeAudit {
  Index subsystem = 0;
  Real completenessResidual = 0;
};

// Structural audit: every node's Kraus pair must be complete on its own
// subsystem, and subsystem indices must never decrease along any root-leaf
// path (one-way feed-forward).
struct AuditReport {
  Real maxCompletenessResidual = 0;
  bool pathMonotonic = true;
  int nodeCount = 0;
  int leafCount = 0;
  int maxDepth = 0;
  std::vector<NodeAudit> nodes;
};

AuditReport locality_audit(const MeasurementPlan& plan);

}  // namespace locc
