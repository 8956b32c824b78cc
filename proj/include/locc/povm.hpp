#pragma once

#include "locc/types.hpp"

#include <memory>
#include <variant>

namespace locc {

// A POVM on a d-dimensional system: PSD elements summing to the identity,
// one label per element.
struct Povm {
  Index dim = 2;
  std::vector<std::string> labels;
  std::vector<Matrix> elements;

  size_t size() const { return elements.size(); }
};

struct PovmViolation {
  std::string kind;   // "shape" | "labels" | "hermiticity" | "psd" | "completeness"
  int elementIndex;   // -1 when not element-specific
  Real magnitude;
  std::string detail;
};

struct PovmValidationReport {
  std::vector<PovmViolation> violations;
  Real completenessResidual = 0;
  bool valid() const { return violations.empty(); }
};

PovmValidationReport validate_povm(const Povm& povm, Real tol = kStructuralTol);

// A two-outcome operation on a logical qubit in minimally-disturbing form:
//   A0 = sqrt(a) |0out0><0in| + sqrt(b) |1out0><1in|
//   A1 = sqrt(1-a) |0out1><0in| + sqrt(1-b) |1out1><1in|
// Basis matrices hold kets as columns. 0 <= b <= a <= 1 after canonicalization.
struct TwoOutcomeOp {
  Real a = 1, b = 0;
  Matrix2 inBasis = Matrix2::Identity();
  Matrix2 outBasis0 = Matrix2::Identity();
  Matrix2 outBasis1 = Matrix2::Identity();

  Matrix2 kraus0() const;
  Matrix2 kraus1() const;
};

// Canonical (a, b, basis) form of the two-outcome POVM {pi0, I - pi0}.
// Throws NotPsdError / NotSubIdentityError. Degenerate spectrum (pi0
// proportional to I) selects the computational basis.
TwoOutcomeOp canonical_form(const Matrix& pi0, Real tol = kStructuralTol);

// Binary cascade of two-outcome operations implementing an n-outcome POVM.
// Internal nodes carry the coarse two-outcome op; leaves carry labels.
struct BinaryMeasurementTree {
  struct Node;
  using Child = std::variant<std::unique_ptr<Node>, std::string>;
  struct Node {
    TwoOutcomeOp op;
    Child child0, child1;
  };
  std::unique_ptr<Node> root;
  std::vector<std::string> labels;  // source labels, in order
};

enum class Grouping { Balanced, FirstRest };

// Splits the label list recursively (grouping strategy, in label order),
// takes the coarse element's canonical form per node, and conjugates each
// group's elements into the post-measurement frame for the child POVM.
// The per-node free unitaries are identity.
BinaryMeasurementTree decompose_binary(const Povm& povm,
                                       Grouping grouping = Grouping::Balanced,
                                       Real tol = kStructuralTol);

// Recomposes the effective POVM the tree implements (the decomposition
// oracle): labels match the source POVM.
Povm tree_effective_povm(const BinaryMeasurementTree& tree);

}  // namespace locc
