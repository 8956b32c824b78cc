#include "locc/povm.hpp"

#include "locc/qla.hpp"
#include "locc/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace locc;

namespace {

bool has_violation(const PovmValidationReport& rep, const std::string& kind) {
  for (const auto& v : rep.violations)
    if (v.kind == kind) return true;
  return false;
}

}  // namespace

TEST_CASE("validate_povm flags each defect class") {
  Rng rng(2);
  Povm good = random_povm(rng, 2, 4);
  CHECK(validate_povm(good).valid());

  Povm incomplete = good;
  incomplete.elements.back() *= 0.5;
  CHECK(has_violation(validate_povm(incomplete), "completeness"));

  Povm indefinite = good;
  indefinite.elements[0] -= 0.9 * Matrix::Identity(2, 2);
  indefinite.elements[1] += 0.9 * Matrix::Identity(2, 2);
  CHECK(has_violation(validate_povm(indefinite), "psd"));

  Povm fewLabels = good;
  fewLabels.labels.pop_back();
  CHECK(has_violation(validate_povm(fewLabels), "labels"));

  Povm badShape = good;
  badShape.elements[2] = Matrix::Identity(3, 3);
  CHECK(has_violation(validate_povm(badShape), "shape"));

  Povm skew = good;
  skew.elements[0](0, 1) += Complex(0, 0.2);
  CHECK_FALSE(validate_povm(skew).valid());
}

TEST_CASE("canonical_form reproduces the element and completes the pair") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed, 30);
    const Povm pair = random_povm(rng, 2, 2);
    const Matrix& pi0 = pair.elements[0];
    const TwoOutcomeOp op = canonical_form(pi0);

    REQUIRE(op.a >= op.b - 1e-12);
    REQUIRE(op.a <= 1 + 1e-12);
    REQUIRE(op.b >= -1e-12);
    const Matrix2 k0 = op.kraus0(), k1 = op.kraus1();
    REQUIRE((k0.adjoint() * k0 - pi0).norm() < 1e-10);
    REQUIRE((k0.adjoint() * k0 + k1.adjoint() * k1 - Matrix2::Identity())
                .norm() < 1e-10);
    REQUIRE((op.inBasis * op.inBasis.adjoint() - Matrix2::Identity()).norm() <
            1e-12);
  }
}

TEST_CASE("canonical_form handles degenerate and extreme elements") {
  const TwoOutcomeOp flat = canonical_form(0.3 * Matrix::Identity(2, 2));
  CHECK(flat.a == doctest::Approx(0.3));
  CHECK(flat.b == doctest::Approx(0.3));

  Matrix proj(2, 2);
  proj << 1, 0, 0, 0;
  const TwoOutcomeOp sharp = canonical_form(proj);
  CHECK(sharp.a == doctest::Approx(1));
  CHECK(sharp.b == doctest::Approx(0));

  CHECK_THROWS_AS(canonical_form(Matrix(1.2 * Matrix::Identity(2, 2))),
                  NotSubIdentityError);
  CHECK_THROWS_AS(canonical_form(Matrix(-0.1 * Matrix::Identity(2, 2))),
                  NotPsdError);
}

TEST_CASE("decompose_binary recomposes the source POVM") {
  for (int outcomes = 2; outcomes <= 6; ++outcomes) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng(seed, 40 + static_cast<std::uint64_t>(outcomes));
      const Povm povm = random_povm(rng, 2, outcomes);
      for (const Grouping g : {Grouping::Balanced, Grouping::FirstRest}) {
        const BinaryMeasurementTree tree = decompose_binary(povm, g);
        const Povm back = tree_effective_povm(tree);
        REQUIRE(back.size() == povm.size());
        for (size_t k = 0; k < povm.size(); ++k) {
          REQUIRE(back.labels[k] == povm.labels[k]);
          REQUIRE((back.elements[k] - povm.elements[k]).norm() < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("decompose_binary keeps rank-deficient elements exact") {
  // Mixture of projectors: the cascade hits a = 1, b = 0 nodes.
  Povm povm;
  povm.dim = 2;
  povm.labels = {"h", "v", "d", "a"};
  Matrix h(2, 2), v(2, 2), d(2, 2), a(2, 2);
  h << 0.5, 0, 0, 0;
  v << 0, 0, 0, 0.5;
  d << 0.25, 0.25, 0.25, 0.25;
  a << 0.25, -0.25, -0.25, 0.25;
  povm.elements = {h, v, d, a};
  REQUIRE(validate_povm(povm).valid());

  const Povm back = tree_effective_povm(decompose_binary(povm));
  for (size_t k = 0; k < povm.size(); ++k)
    CHECK((back.elements[k] - povm.elements[k]).norm() < 1e-12);
}

TEST_CASE("decompose_binary rejects invalid input") {
  Rng rng(4);
  Povm bad = random_povm(rng, 2, 3);
  bad.elements[0] *= 1.4;
  CHECK_THROWS_AS(decompose_binary(bad), ValidationError);
}
