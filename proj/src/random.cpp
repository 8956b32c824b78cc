#include "locc/random.hpp"

#include "locc/qla.hpp"

#include <cmath>

namespace locc {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t shard) {
  std::uint64_t s = seed ^ (shard * 0x9E3779B97F4A7C15ULL);
  engine_.seed(splitmix64(s));
}

std::uint64_t Rng::raw() { return engine_(); }

Real Rng::uniform() {
  return static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
}

Real Rng::normal() {
  if (haveSpare_) {
    haveSpare_ = false;
    return spare_;
  }
  Real u1 = uniform();
  if (u1 <= 0) u1 = 0x1.0p-53;
  const Real u2 = uniform();
  const Real r = std::sqrt(-2 * std::log(u1));
  const Real t = 2 * M_PI * u2;
  spare_ = r * std::sin(t);
  haveSpare_ = true;
  return r * std::cos(t);
}

Complex Rng::gaussianC() {
  return Complex(normal(), normal()) / std::sqrt(Real(2));
}

Vector random_state(Rng& rng, Index dim) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.gaussianC();
  return v.normalized();
}

std::pair<Vector, Vector> random_orthonormal_pair(Rng& rng, Index dim) {
  if (dim < 2) throw DomainError("random_orthonormal_pair: need dim >= 2");
  Vector a = random_state(rng, dim);
  Vector b(dim);
  for (Index i = 0; i < dim; ++i) b(i) = rng.gaussianC();
  b -= a * a.dot(b);
  return {a, b.normalized()};
}

LogicalSubspace random_subspace(Rng& rng, const std::vector<Index>& dims) {
  LogicalSubspace ls;
  ls.dims = dims;
  auto [k0, k1] = random_orthonormal_pair(rng, product(dims));
  ls.ket0L = k0;
  ls.ket1L = k1;
  return ls;
}

Matrix random_unitary(Rng& rng, Index dim) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.gaussianC();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phase freedom so the result depends only on the draw.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex rj = r(j, j);
    if (std::abs(rj) > 0) q.col(j) *= rj / std::abs(rj);
  }
  return q;
}

Matrix random_traceless(Rng& rng, Index dim) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.gaussianC();
  g -= (g.trace() / static_cast<Real>(dim)) * Matrix::Identity(dim, dim);
  return g;
}

Povm random_povm(Rng& rng, Index dim, int outcomes) {
  if (outcomes < 1) throw DomainError("random_povm: need at least one outcome");
  std::vector<Matrix> blocks;
  Matrix total = Matrix::Zero(dim, dim);
  for (int k = 0; k < outcomes; ++k) {
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) g(i, j) = rng.gaussianC();
    Matrix w = g.adjoint() * g;
    blocks.push_back(w);
    total += w;
  }
  const Matrix s = psd_pinv_sqrt(total);
  Povm povm;
  povm.dim = dim;
  for (int k = 0; k < outcomes; ++k) {
    Matrix e = s * blocks[static_cast<size_t>(k)] * s;
    e = (e + Matrix(e.adjoint())) / 2;
    povm.elements.push_back(e);
    povm.labels.push_back(std::to_string(k));
  }
  return povm;
}

}  // namespace locc
