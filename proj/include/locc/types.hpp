#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace locc {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector = Eigen::VectorXcd;
using Vector2 = Eigen::Vector2cd;
using RealVector = Eigen::VectorXd;

// Structural checks (orthogonality residuals, POVM completeness, plan
// recomposition) use the coarse tolerance; unitarity and normalization use
// the tight one.
inline constexpr Real kStructuralTol = 1e-10;
inline constexpr Real kUnitaryTol = 1e-12;
// Below this, a probability weight is treated as an exactly dead branch.
inline constexpr Real kDeadBranchTol = 1e-12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPsdError : Error { using Error::Error; };
struct NotSubIdentityError : Error { using Error::Error; };
struct NotTracelessError : Error { using Error::Error; };
struct BadPermutationError : Error { using Error::Error; };
struct NotOrthogonalError : Error { using Error::Error; };
struct NotNormalizedError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InfeasibleError : Error { using Error::Error; };
struct DegenerateOutcomeError : Error { using Error::Error; };
struct ExcludedCaseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// A pure state of a multipartite system. Amplitudes are stored row-major
// over the multi-index: subsystem 0 is the most significant digit, matching
// kron(A0, A1, ...).
struct StateVector {
  std::vector<Index> dims;
  Vector amps;

  Index totalDim() const {
    Index n = 1;
    for (Index d : dims) n *= d;
    return n;
  }
};

inline Index product(const std::vector<Index>& dims) {
  Index n = 1;
  for (Index d : dims) n *= d;
  return n;
}

}  // namespace locc
