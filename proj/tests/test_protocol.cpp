#include "locc/protocol.hpp"

#include "locc/qla.hpp"
#include "locc/random.hpp"
#include "locc/simulate.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace locc;

namespace {

StateVector state(const std::vector<Index>& dims, const Vector& amps) {
  return StateVector{dims, amps};
}

LogicalSubspace teleport_pair() {
  const Real s = 1.0 / std::sqrt(2.0);
  Vector k0 = Vector::Zero(4), k1 = Vector::Zero(4);
  k0[0] = s; k0[3] = s;
  k1[1] = s; k1[2] = -s;
  return LogicalSubspace{{2, 2}, k0, k1};
}

void check_plan_matches(const LogicalSubspace& ls, const Povm& povm,
                        const MeasurementPlan& plan, Real tol) {
  const Povm eff = plan_effective_povm(plan, ls);
  REQUIRE(eff.size() == povm.size());
  for (size_t k = 0; k < povm.size(); ++k) {
    REQUIRE(eff.labels[k] == povm.labels[k]);
    REQUIRE((eff.elements[k] - povm.elements[k]).norm() < tol);
  }
  const AuditReport audit = locality_audit(plan);
  REQUIRE(audit.pathMonotonic);
  REQUIRE(audit.maxCompletenessResidual < 1e-10);
}

}  // namespace

TEST_CASE("strategy_select frozen cells") {
  const StrategyParams interior = strategy_select(0.7, 0.5, 0.9, 0.2);
  CHECK(interior.kase == StrategyCase::Interior);
  CHECK(interior.c == doctest::Approx(0.51 / 0.7).epsilon(1e-12));
  CHECK(interior.d == doctest::Approx(0.31 / 0.7).epsilon(1e-12));

  const StrategyParams c1 = strategy_select(0.8, 0.2, 0.7, 0.1);
  CHECK(c1.kase == StrategyCase::CEquals1);
  CHECK(c1.c == doctest::Approx(1.0));
  CHECK(c1.d == doctest::Approx(1.0 / 11.0).epsilon(1e-12));

  const StrategyParams d0 = strategy_select(0.6, 0.1, 0.9, 0.6);
  CHECK(d0.kase == StrategyCase::DEquals0);
  CHECK(d0.c == doctest::Approx(0.5 / 0.57).epsilon(1e-12));
  CHECK(d0.d == doctest::Approx(0.0));

  const StrategyParams proj = strategy_select(0.9, 0.1, 0.55, 0.45);
  CHECK(proj.kase == StrategyCase::Projective);
  CHECK(proj.c == doctest::Approx(1.0));
  CHECK(proj.d == doctest::Approx(0.0));
}

TEST_CASE("strategy_select property: in-range parameters, faithful branches") {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Rng rng(seed, 50);
    Real a = rng.uniform(), b = rng.uniform();
    if (b > a) std::swap(a, b);
    Real p = rng.uniform(), q = rng.uniform();
    if (q > p) std::swap(p, q);
    if (p - q < 1e-6) continue;

    const StrategyParams sp = strategy_select(a, b, p, q);
    REQUIRE(sp.c >= -1e-12);
    REQUIRE(sp.c <= 1 + 1e-12);
    REQUIRE(sp.d >= -1e-12);
    REQUIRE(sp.d <= 1 + 1e-12);

    // Effective branch weights of the cut operation (c, d).
    const Real a0 = sp.c * p + sp.d * (1 - p);
    const Real b0 = sp.c * q + sp.d * (1 - q);
    const Real a1 = (1 - sp.c) * p + (1 - sp.d) * (1 - p);
    const Real b1 = (1 - sp.c) * q + (1 - sp.d) * (1 - q);
    switch (sp.kase) {
      case StrategyCase::Interior:
        // Both branches land exactly on the intended pairs.
        REQUIRE(a0 == doctest::Approx(a).epsilon(1e-9));
        REQUIRE(b0 == doctest::Approx(b).epsilon(1e-9));
        break;
      case StrategyCase::CEquals1:
        // Branch 0 is proportional to the intended (a, b); the rest of the
        // class-0 weight is recovered by completing branch 1.
        REQUIRE(a0 * b == doctest::Approx(b0 * a).epsilon(1e-9));
        break;
      case StrategyCase::DEquals0:
        // Branch 1 is proportional to the intended (1-a, 1-b).
        REQUIRE(a1 * (1 - b) == doctest::Approx(b1 * (1 - a)).epsilon(1e-9));
        break;
      case StrategyCase::Projective:
        REQUIRE(sp.c == doctest::Approx(1.0));
        REQUIRE(sp.d == doctest::Approx(0.0));
        break;
    }
  }
}

TEST_CASE("completion_op frozen value and composition law") {
  const CompletionOp co = completion_op(0.8, 0.2, 0.6, 0.4);
  CHECK(co.alpha0 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(co.alpha1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(co.a0 == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(co.b0 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Matrix2 perf = Matrix2::Zero();
  perf(0, 0) = std::sqrt(0.6);
  perf(1, 1) = std::sqrt(0.4);
  Matrix2 want0 = Matrix2::Zero(), want1 = Matrix2::Zero();
  want0(0, 0) = std::sqrt(co.alpha0 * 0.8);
  want0(1, 1) = std::sqrt(co.alpha0 * 0.2);
  want1(0, 0) = std::sqrt(co.alpha1 * (1 - 0.8));
  want1(1, 1) = std::sqrt(co.alpha1 * (1 - 0.2));
  CHECK((co.b0Op * perf - want0).norm() < 1e-12);
  CHECK((co.b1Op * perf - want1).norm() < 1e-12);
  CHECK((co.b0Op.adjoint() * co.b0Op + co.b1Op.adjoint() * co.b1Op -
         Matrix2::Identity())
            .norm() < 1e-12);
}

TEST_CASE("completion_op property: random feasible instances") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed, 51);
    Real a = 0.05 + 0.9 * rng.uniform(), b = 0.05 + 0.9 * rng.uniform();
    if (b > a) std::swap(a, b);
    // Sample a performed ratio strictly inside the feasibility sandwich;
    // feasibility also needs the complementary branch ratio inside it.
    const Real lo = b / a, hi = (1 - b) / (1 - a);
    const Real ratio = lo + (hi - lo) * (0.01 + 0.98 * rng.uniform());
    const Real aP = 0.1 + 0.8 * rng.uniform();
    const Real bP = ratio * aP;
    if (bP <= 1e-6 || bP >= 1 - 1e-6) continue;
    const Real r1 = (1 - bP) / (1 - aP);
    if (r1 < lo || r1 > hi) continue;
    REQUIRE(completion_feasible(a, b, aP, bP));

    const CompletionOp co = completion_op(a, b, aP, bP);
    REQUIRE(co.alpha0 >= -1e-10);
    REQUIRE(co.alpha1 >= -1e-10);
    // The weights solve the completeness system for the performed pair.
    REQUIRE(co.alpha0 * a + co.alpha1 * (1 - a) ==
            doctest::Approx(aP).epsilon(1e-9));
    REQUIRE(co.alpha0 * b + co.alpha1 * (1 - b) ==
            doctest::Approx(bP).epsilon(1e-9));
    REQUIRE((co.b0Op.adjoint() * co.b0Op + co.b1Op.adjoint() * co.b1Op -
             Matrix2::Identity())
                .norm() < 1e-9);

    Matrix2 perf = Matrix2::Zero();
    perf(0, 0) = std::sqrt(aP);
    perf(1, 1) = std::sqrt(bP);
    const Matrix2 c0 = co.b0Op * perf;
    // B0 Aperf recovers sqrt(alpha0) diag(sqrt a, sqrt b), and B1 Aperf the
    // complementary intended outcome.
    REQUIRE(std::abs(c0(0, 0) - std::sqrt(co.alpha0 * a)) < 1e-9);
    REQUIRE(std::abs(c0(1, 1) - std::sqrt(co.alpha0 * b)) < 1e-9);
    const Matrix2 c1 = co.b1Op * perf;
    REQUIRE(std::abs(c1(0, 0) - std::sqrt(co.alpha1 * (1 - a))) < 1e-9);
    REQUIRE(std::abs(c1(1, 1) - std::sqrt(co.alpha1 * (1 - b))) < 1e-9);
  }
}

TEST_CASE("completion_op rejects what it cannot fix") {
  CHECK_FALSE(completion_feasible(0.8, 0.2, 0.8, 0.1));
  CHECK_FALSE(completion_feasible(0.8, 0.2, 0.1, 0.8));
  CHECK_THROWS_AS(completion_op(0.8, 0.2, 0.8, 0.1), InfeasibleError);
  CHECK_THROWS_AS(completion_op(0.8, 0.2, 0.0, 0.4), DegenerateOutcomeError);
}

TEST_CASE("completion_feasible accepts boundary-cell residuals") {
  // The non-proportional branch of a boundary cell leaves a residual whose
  // complement sits exactly on the feasibility edge; rounding must not
  // reject it.
  const Real a = 0.8, b = 0.2, p = 0.7, q = 0.1;
  const StrategyParams sc = strategy_select(a, b, p, q);
  REQUIRE(sc.kase == StrategyCase::CEquals1);
  const Real aP = (1 - sc.d) * (1 - p), bP = (1 - sc.d) * (1 - q);
  CHECK(completion_feasible(a, b, aP, bP));
  const CompletionOp co = completion_op(a, b, aP, bP);
  CHECK((co.b0Op.adjoint() * co.b0Op + co.b1Op.adjoint() * co.b1Op -
         Matrix2::Identity())
            .norm() < 1e-10);

  const StrategyParams sd = strategy_select(0.6, 0.1, 0.9, 0.6);
  REQUIRE(sd.kase == StrategyCase::DEquals0);
  CHECK(completion_feasible(0.6, 0.1, sd.c * 0.9, sd.c * 0.6));
}

TEST_CASE("completion_op splits evenly when the intention is flat") {
  const CompletionOp co = completion_op(0.5, 0.5, 0.3, 0.3);
  CHECK(co.alpha0 == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(co.alpha1 == doctest::Approx(0.3).epsilon(1e-12));
  CHECK((co.b0Op.adjoint() * co.b0Op + co.b1Op.adjoint() * co.b1Op -
         Matrix2::Identity())
            .norm() < 1e-12);
}

TEST_CASE("effective_kraus: logical completeness and primed chaining") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed, 52);
    const std::vector<Index> dims{3, 2};
    const LogicalSubspace ls = random_subspace(rng, dims);
    const auto wd =
        walgate_decompose(state(dims, ls.ket0L), state(dims, ls.ket1L));
    const auto cg = coarse_grain(wd);
    const Real c = rng.uniform(), d = rng.uniform();

    const EffectiveKraus ek = effective_kraus(c, d, wd, cg);
    REQUIRE((ek.keff0.adjoint() * ek.keff0 + ek.keff1.adjoint() * ek.keff1 -
             Matrix2::Identity())
                .norm() < 1e-10);
    REQUIRE(std::abs(ek.keff0(0, 0) - std::sqrt(c * cg.p + d * (1 - cg.p))) <
            1e-10);
    REQUIRE(std::abs(ek.keff0(1, 1) - std::sqrt(c * cg.q + d * (1 - cg.q))) <
            1e-10);
    REQUIRE(std::abs(ek.keff0(0, 1)) < 1e-12);

    const Matrix k0cut = std::sqrt(c) * cg.P0 + std::sqrt(d) * cg.P1;
    const Matrix full = kron(k0cut, Matrix(Matrix::Identity(2, 2)));
    if (ek.primed0) {
      REQUIRE_NOTHROW(validate_subspace(*ek.primed0, 1e-8));
      REQUIRE((full * wd.chi(0) - ek.keff0(0, 0) * ek.primed0->ket0L).norm() <
              1e-9);
      REQUIRE((full * wd.chi(1) - ek.keff0(1, 1) * ek.primed0->ket1L).norm() <
              1e-9);
    }
  }
}

TEST_CASE("compile_two_outcome implements arbitrary canonical operations") {
  const std::vector<std::vector<Index>> shapes{{2, 2}, {3, 2}, {2, 2, 2}};
  for (size_t si = 0; si < shapes.size(); ++si) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      Rng rng(seed, 60 + si);
      const LogicalSubspace ls = random_subspace(rng, shapes[si]);
      const Povm pair = random_povm(rng, 2, 2);
      const TwoOutcomeOp op = canonical_form(pair.elements[0]);

      std::vector<StageTrace> trace;
      const MeasurementPlan plan = compile_two_outcome(ls, op, &trace);
      REQUIRE(plan.labels == std::vector<std::string>{"0", "1"});
      for (const StageTrace& st : trace) {
        REQUIRE(st.c >= -1e-12);
        REQUIRE(st.c <= 1 + 1e-12);
        REQUIRE(st.d >= -1e-12);
        REQUIRE(st.d <= 1 + 1e-12);
      }

      const Povm eff = plan_effective_povm(plan, ls);
      const Matrix2 target0 = op.kraus0().adjoint() * op.kraus0();
      REQUIRE((eff.elements[0] - target0).norm() < 1e-8);
      REQUIRE((eff.elements[1] - (Matrix2::Identity() - target0)).norm() <
              1e-8);
    }
  }
}

TEST_CASE("compile_povm property: random targets on random encodings") {
  const std::vector<std::vector<Index>> shapes{
      {2, 2}, {3, 2}, {2, 2, 2}, {2, 3, 2}};
  for (size_t si = 0; si < shapes.size(); ++si) {
    for (int outcomes : {2, 3, 5}) {
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Rng rng(seed, 70 + 10 * si + static_cast<std::uint64_t>(outcomes));
        const LogicalSubspace ls = random_subspace(rng, shapes[si]);
        const Povm povm = random_povm(rng, 2, outcomes);
        const MeasurementPlan plan = compile_povm(ls, povm);
        REQUIRE(plan.labels == povm.labels);
        check_plan_matches(ls, povm, plan, 1e-8);
      }
    }
  }
}

TEST_CASE("compile_povm honors the grouping choice") {
  Rng rng(5, 71);
  const LogicalSubspace ls = random_subspace(rng, {2, 2, 2});
  const Povm povm = random_povm(rng, 2, 5);
  const MeasurementPlan plan =
      compile_povm(ls, povm, Grouping::FirstRest);
  check_plan_matches(ls, povm, plan, 1e-8);
}

TEST_CASE("compile_povm keeps zero elements dead") {
  Rng rng(6, 72);
  const LogicalSubspace ls = random_subspace(rng, {2, 2});
  Povm povm = random_povm(rng, 2, 2);
  povm.labels.push_back("never");
  povm.elements.push_back(Matrix::Zero(2, 2));
  REQUIRE(validate_povm(povm).valid());

  const MeasurementPlan plan = compile_povm(ls, povm);
  const Povm eff = plan_effective_povm(plan, ls);
  CHECK(eff.elements[2].norm() < 1e-12);
  check_plan_matches(ls, povm, plan, 1e-8);
}

TEST_CASE("compile_povm skips factored-out subsystems") {
  Rng rng(7, 73);
  // The logical qubit lives on subsystem 1; subsystem 0 is a spectator.
  const Vector spect = random_state(rng, 2);
  const LogicalSubspace inner = random_subspace(rng, {2});
  LogicalSubspace ls{{2, 2}, kron(spect, inner.ket0L),
                     kron(spect, inner.ket1L)};
  const Povm povm = random_povm(rng, 2, 3);

  const MeasurementPlan plan = compile_povm(ls, povm);
  check_plan_matches(ls, povm, plan, 1e-8);
  const AuditReport audit = locality_audit(plan);
  for (const NodeAudit& node : audit.nodes) CHECK(node.subsystem == 1);
}

TEST_CASE("compile_povm relays a maximally entangled pair undisturbed") {
  // p = q everywhere: the first subsystem is relayed by a disturbance-free
  // cascade, so no weighted selection cell ever fires.
  const LogicalSubspace ls = teleport_pair();
  Rng rng(8, 74);
  const Povm povm = random_povm(rng, 2, 3);
  std::vector<StageTrace> trace;
  const MeasurementPlan plan =
      compile_povm(ls, povm, Grouping::Balanced, &trace);
  REQUIRE_FALSE(trace.empty());
  for (const StageTrace& st : trace) {
    CHECK(st.cell == "teleport");
    CHECK(st.p == doctest::Approx(st.q));
  }
  check_plan_matches(ls, povm, plan, 1e-8);
}

TEST_CASE("compile_povm handles a three-party cat encoding") {
  Vector k0 = Vector::Zero(8), k1 = Vector::Zero(8);
  k0[0] = 1;  // |000>
  k1[7] = 1;  // |111>
  const LogicalSubspace ls{{2, 2, 2}, k0, k1};
  Rng rng(9, 75);
  const Povm povm = random_povm(rng, 2, 4);
  const MeasurementPlan plan = compile_povm(ls, povm);
  check_plan_matches(ls, povm, plan, 1e-8);
}

TEST_CASE("compile_povm rejects non-qubit targets and bad encodings") {
  Rng rng(10, 76);
  const LogicalSubspace ls = random_subspace(rng, {2, 2});
  const Povm qutrit = random_povm(rng, 3, 3);
  CHECK_THROWS_AS(compile_povm(ls, qutrit), ValidationError);

  LogicalSubspace bad = ls;
  bad.ket1L = bad.ket0L;
  CHECK_THROWS_AS(compile_povm(bad, random_povm(rng, 2, 2)),
                  NotOrthogonalError);
}
