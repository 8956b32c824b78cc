#pragma once

#include "locc/povm.hpp"
#include "locc/subspace.hpp"
#include "locc/types.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace locc {

// Advances the state and returns the next scrambled value.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic cross-platform RNG: mt19937_64 (bit-exact by the standard)
// seeded through splitmix64, uniforms taken as (x >> 11) * 2^-53, normals
// via Box-Muller. Streams depend only on (seed, shard).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t shard = 0);

  std::uint64_t raw();
  Real uniform();       // in [0, 1)
  Real normal();        // standard normal
  Complex gaussianC();  // complex normal with E|z|^2 = 1

 private:
  std::mt19937_64 engine_;
  bool haveSpare_ = false;
  Real spare_ = 0;
};

// Seeded instance generators (tests, fuzzing, demos).
Vector random_state(Rng& rng, Index dim);
std::pair<Vector, Vector> random_orthonormal_pair(Rng& rng, Index dim);
LogicalSubspace random_subspace(Rng& rng, const std::vector<Index>& dims);
Matrix random_unitary(Rng& rng, Index dim);
Matrix random_traceless(Rng& rng, Index dim);
// Random full-rank POVM: Wishart blocks conjugated to completeness.
Povm random_povm(Rng& rng, Index dim, int outcomes);

}  // namespace locc
