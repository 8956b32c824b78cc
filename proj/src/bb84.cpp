#include "locc/bb84.hpp"

#include "locc/qla.hpp"

#include <cmath>

namespace locc {

namespace {
const Real kPi = std::acos(Real(-1));
}

Povm bb84_povm() {
  Vector2 k0, k1, plus, minus;
  k0 << 1, 0;
  k1 << 0, 1;
  plus << 1 / std::sqrt(Real(2)), 1 / std::sqrt(Real(2));
  minus << 1 / std::sqrt(Real(2)), -1 / std::sqrt(Real(2));

  Povm povm;
  povm.dim = 2;
  povm.labels = {"00", "01", "10", "11"};
  povm.elements = {Real(0.5) * (k0 * k0.adjoint()),
                   Real(0.5) * (plus * plus.adjoint()),
                   Real(0.5) * (k1 * k1.adjoint()),
                   Real(0.5) * (minus * minus.adjoint())};
  return povm;
}

Bb84EncodingSpec default_bb84_spec(Real phi) {
  Bb84EncodingSpec spec;
  spec.phi = phi;
  spec.etaBasis0 = Matrix2::Identity();
  spec.etaBasis1 << 1 / std::sqrt(Real(2)), 1 / std::sqrt(Real(2)),
      1 / std::sqrt(Real(2)), -1 / std::sqrt(Real(2));
  return spec;
}

LogicalSubspace build_bb84_encoding(const Bb84EncodingSpec& spec) {
  auto check_basis = [](const Matrix2& m) {
    if ((m.adjoint() * m - Matrix2::Identity()).norm() > 1e-10)
      throw ValidationError("bb84 encoding: eta basis is not unitary");
  };
  check_basis(spec.etaBasis0);
  check_basis(spec.etaBasis1);
  if (spec.phi < 0 || spec.phi > kPi / 4)
    throw DomainError("bb84 encoding: phi must lie in [0, pi/4]");

  const Vector2 eta0 = spec.etaBasis0.col(0);
  const Vector2 eta0p = spec.etaBasis0.col(1);
  const Vector2 eta1 = spec.etaBasis1.col(0);
  const Vector2 eta1p = spec.etaBasis1.col(1);

  Vector e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;

  const Real cp = std::cos(spec.phi), sp = std::sin(spec.phi);
  Vector chiB0 = cp * kron(e0, Vector(eta0)) + sp * kron(e1, Vector(eta1));
  Vector chiB1 = sp * kron(e0, Vector(eta0p)) + cp * kron(e1, Vector(eta1p));

  // Rotate the intermediate-basis images back to the computational
  // convention: the intercept basis sits at pi/8 from the computational one.
  const Real c8 = std::cos(kPi / 8), s8 = std::sin(kPi / 8);
  LogicalSubspace ls;
  ls.dims = {2, 2};
  ls.ket0L = c8 * chiB0 - s8 * chiB1;
  ls.ket1L = s8 * chiB0 + c8 * chiB1;
  return ls;
}

Bb84Demo run_bb84_demo(Real phi, Complex alpha, Complex beta) {
  Bb84Demo demo;
  demo.povm = bb84_povm();
  demo.encoding = build_bb84_encoding(default_bb84_spec(phi));
  demo.plan =
      compile_povm(demo.encoding, demo.povm, Grouping::Balanced, &demo.trace);
  demo.distribution = exact_distribution(demo.plan, demo.encoding, alpha, beta);
  return demo;
}

}  // namespace locc
