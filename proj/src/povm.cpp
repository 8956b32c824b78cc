#include "locc/povm.hpp"

#include "locc/qla.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>

namespace locc {

namespace {

Matrix2 diag2(Real x, Real y) {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

// Makes the largest-magnitude component of each column real positive.
void fix_phases(Matrix& basis) {
  for (Index c = 0; c < basis.cols(); ++c) {
    Index imax = 0;
    for (Index r = 1; r < basis.rows(); ++r)
      if (std::abs(basis(r, c)) > std::abs(basis(imax, c))) imax = r;
    const Complex z = basis(imax, c);
    if (std::abs(z) > 0) basis.col(c) *= std::conj(z) / std::abs(z);
  }
}

struct GroupSplit {
  std::vector<Index> group0, group1;
};

GroupSplit split_labels(Index n, Grouping grouping) {
  GroupSplit s;
  const Index cut = grouping == Grouping::Balanced ? (n + 1) / 2 : 1;
  for (Index i = 0; i < n; ++i)
    (i < cut ? s.group0 : s.group1).push_back(i);
  return s;
}

BinaryMeasurementTree::Child build_tree(
    const std::vector<std::string>& labels, const std::vector<Matrix>& elems,
    Grouping grouping, Real tol) {
  if (labels.size() == 1) return labels[0];

  const Index dim = elems[0].rows();
  const GroupSplit split = split_labels(labels.size(), grouping);

  Matrix pi0 = Matrix::Zero(dim, dim);
  for (Index i : split.group0) pi0 += elems[i];

  auto node = std::make_unique<BinaryMeasurementTree::Node>();
  node->op = canonical_form(pi0, tol);

  // Children see their elements conjugated into the post-measurement frame:
  // pinv-sqrt of the coarse element on each side, padded on the kernel so the
  // child POVM is complete (the kernel branch has zero probability).
  const Matrix pi1 = Matrix::Identity(dim, dim) - pi0;
  for (int side = 0; side < 2; ++side) {
    const auto& group = side == 0 ? split.group0 : split.group1;
    const Matrix& coarse = side == 0 ? pi0 : pi1;
    const Matrix s = psd_pinv_sqrt(coarse, tol);
    const Matrix support = s * coarse * s;  // projector onto the support
    const Matrix pad = (Matrix::Identity(dim, dim) - support) /
                       static_cast<Real>(group.size());
    std::vector<std::string> subLabels;
    std::vector<Matrix> subElems;
    for (Index i : group) {
      subLabels.push_back(labels[i]);
      subElems.push_back(s * elems[i] * s + pad);
    }
    auto child = build_tree(subLabels, subElems, grouping, tol);
    (side == 0 ? node->child0 : node->child1) = std::move(child);
  }
  return node;
}

void accumulate_effective(const BinaryMeasurementTree::Child& child,
                          const Matrix& pathOp, Povm& out) {
  if (std::holds_alternative<std::string>(child)) {
    const std::string& label = std::get<std::string>(child);
    for (size_t i = 0; i < out.labels.size(); ++i)
      if (out.labels[i] == label) {
        out.elements[i] += pathOp.adjoint() * pathOp;
        return;
      }
    throw DomainError("tree_effective_povm: unknown leaf label " + label);
  }
  const auto& node = *std::get<std::unique_ptr<BinaryMeasurementTree::Node>>(
      child);
  accumulate_effective(node.child0, Matrix(node.op.kraus0()) * pathOp, out);
  accumulate_effective(node.child1, Matrix(node.op.kraus1()) * pathOp, out);
}

}  // namespace

Matrix2 TwoOutcomeOp::kraus0() const {
  return outBasis0 * diag2(std::sqrt(a), std::sqrt(b)) * inBasis.adjoint();
}

Matrix2 TwoOutcomeOp::kraus1() const {
  return outBasis1 * diag2(std::sqrt(1 - a), std::sqrt(1 - b)) *
         inBasis.adjoint();
}

PovmValidationReport validate_povm(const Povm& povm, Real tol) {
  PovmValidationReport report;
  auto add = [&](std::string kind, int idx, Real mag, std::string detail) {
    report.violations.push_back({std::move(kind), idx, mag, std::move(detail)});
  };

  if (povm.labels.size() != povm.elements.size())
    add("labels", -1,
        static_cast<Real>(povm.labels.size()) -
            static_cast<Real>(povm.elements.size()),
        "label count differs from element count");
  for (size_t i = 0; i < povm.labels.size(); ++i)
    for (size_t j = i + 1; j < povm.labels.size(); ++j)
      if (povm.labels[i] == povm.labels[j])
        add("labels", static_cast<int>(j), 0,
            "duplicate label " + povm.labels[i]);

  Matrix sum = Matrix::Zero(povm.dim, povm.dim);
  for (size_t i = 0; i < povm.elements.size(); ++i) {
    const Matrix& e = povm.elements[i];
    if (e.rows() != povm.dim || e.cols() != povm.dim) {
      add("shape", static_cast<int>(i), 0, "element has wrong dimensions");
      continue;
    }
    const Real herm = hermiticity_residual(e);
    if (herm > tol)
      add("hermiticity", static_cast<int>(i), herm, "element not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (e + e.adjoint()));
    const Real minEig = es.eigenvalues().minCoeff();
    if (minEig < -tol)
      add("psd", static_cast<int>(i), minEig, "negative eigenvalue");
    sum += e;
  }
  report.completenessResidual =
      (sum - Matrix::Identity(povm.dim, povm.dim)).norm();
  if (report.completenessResidual > tol)
    add("completeness", -1, report.completenessResidual,
        "elements do not sum to the identity");
  return report;
}

TwoOutcomeOp canonical_form(const Matrix& pi0, Real tol) {
  if (pi0.rows() != 2 || pi0.cols() != 2)
    throw DomainError("canonical_form: expected a 2x2 element");
  if (hermiticity_residual(pi0) > tol)
    throw NotPsdError("canonical_form: element not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pi0 + pi0.adjoint()));
  RealVector evals = es.eigenvalues();  // ascending
  if (evals.minCoeff() < -tol)
    throw NotPsdError("canonical_form: negative eigenvalue " +
                      std::to_string(evals.minCoeff()));
  if (evals.maxCoeff() > 1 + tol)
    throw NotSubIdentityError("canonical_form: eigenvalue " +
                              std::to_string(evals.maxCoeff()) +
                              " exceeds one");

  TwoOutcomeOp op;
  op.a = std::clamp(evals[1], 0.0, 1.0);
  op.b = std::clamp(evals[0], 0.0, 1.0);
  if (op.a - op.b < kUnitaryTol) {
    // Fully degenerate: any basis diagonalizes; fix the computational one.
    op.inBasis = Matrix2::Identity();
  } else {
    Matrix basis(2, 2);
    basis.col(0) = es.eigenvectors().col(1);
    basis.col(1) = es.eigenvectors().col(0);
    fix_phases(basis);
    op.inBasis = basis;
  }
  op.outBasis0 = op.inBasis;
  op.outBasis1 = op.inBasis;
  return op;
}

BinaryMeasurementTree decompose_binary(const Povm& povm, Grouping grouping,
                                       Real tol) {
  auto report = validate_povm(povm, tol);
  if (!report.valid())
    throw ValidationError("decompose_binary: invalid POVM (" +
                          report.violations.front().kind + ")");
  if (povm.dim != 2)
    throw DomainError("decompose_binary: POVM must act on a qubit");
  if (povm.size() < 2)
    throw DomainError("decompose_binary: need at least two outcomes");

  BinaryMeasurementTree tree;
  tree.labels = povm.labels;
  auto child = build_tree(povm.labels, povm.elements, grouping, tol);
  tree.root = std::move(
      std::get<std::unique_ptr<BinaryMeasurementTree::Node>>(child));
  return tree;
}

Povm tree_effective_povm(const BinaryMeasurementTree& tree) {
  Povm out;
  out.dim = 2;
  out.labels = tree.labels;
  out.elements.assign(tree.labels.size(), Matrix::Zero(2, 2));
  if (!tree.root) throw DomainError("tree_effective_povm: empty tree");
  accumulate_effective(tree.root->child0, Matrix(tree.root->op.kraus0()),
                       out);
  accumulate_effective(tree.root->child1, Matrix(tree.root->op.kraus1()),
                       out);
  return out;
}

}  // namespace locc
