#include "locc/json_io.hpp"

#include <fstream>
#include <sstream>

namespace locc {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("json: " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  require(j.is_object(), where + ": expected an object");
  auto it = j.find(key);
  require(it != j.end(), where + ": missing field '" + key + "'");
  return *it;
}

void check_header(const Json& j, const char* kind) {
  const Json& v = field(j, "version", kind);
  require(v.is_number_integer() && v.get<int>() == 1,
          std::string(kind) + ": unsupported version");
  const Json& k = field(j, "kind", kind);
  require(k.is_string() && k.get<std::string>() == kind,
          std::string(kind) + ": wrong 'kind'");
}

Real number_at(const Json& j, const std::string& where) {
  require(j.is_number(), where + ": expected a number");
  return j.get<Real>();
}

}  // namespace

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return Complex(j.get<Real>(), 0);
  require(j.is_array() && j.size() == 2,
          where + ": expected [re, im] or a number");
  return Complex(number_at(j[0], where), number_at(j[1], where));
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
  return arr;
}

Vector vector_from_json(const Json& j, const std::string& where) {
  require(j.is_array(), where + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) =
        complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      entries.push_back(complex_to_json(m(r, c)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  const Index rows =
      static_cast<Index>(number_at(field(j, "rows", where), where + ".rows"));
  const Index cols =
      static_cast<Index>(number_at(field(j, "cols", where), where + ".cols"));
  require(rows >= 0 && cols >= 0, where + ": negative shape");
  const Json& entries = field(j, "entries", where);
  require(entries.is_array() &&
              entries.size() == static_cast<size_t>(rows * cols),
          where + ": entries do not match rows * cols");
  Matrix m(rows, cols);
  size_t k = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(entries[k++], where + ".entries");
  return m;
}

Json povm_to_json(const Povm& povm) {
  Json elements = Json::array();
  for (const Matrix& e : povm.elements) elements.push_back(matrix_to_json(e));
  return Json{{"version", 1},
              {"kind", "povm"},
              {"dim", povm.dim},
              {"labels", povm.labels},
              {"elements", elements}};
}

Povm povm_from_json(const Json& j) {
  check_header(j, "povm");
  Povm povm;
  povm.dim = static_cast<Index>(
      number_at(field(j, "dim", "povm"), "povm.dim"));
  const Json& labels = field(j, "labels", "povm");
  require(labels.is_array(), "povm.labels: expected an array");
  for (const auto& l : labels) {
    require(l.is_string(), "povm.labels: expected strings");
    povm.labels.push_back(l.get<std::string>());
  }
  const Json& elements = field(j, "elements", "povm");
  require(elements.is_array(), "povm.elements: expected an array");
  size_t k = 0;
  for (const auto& e : elements)
    povm.elements.push_back(
        matrix_from_json(e, "povm.elements[" + std::to_string(k++) + "]"));
  require(povm.labels.size() == povm.elements.size(),
          "povm: labels and elements differ in length");
  return povm;
}

Json subspace_to_json(const LogicalSubspace& ls) {
  return Json{{"version", 1},
              {"kind", "encoding"},
              {"dims", ls.dims},
              {"ket0", vector_to_json(ls.ket0L)},
              {"ket1", vector_to_json(ls.ket1L)}};
}

LogicalSubspace subspace_from_json(const Json& j) {
  check_header(j, "encoding");
  LogicalSubspace ls;
  const Json& dims = field(j, "dims", "encoding");
  require(dims.is_array() && !dims.empty(),
          "encoding.dims: expected a nonempty array");
  for (const auto& d : dims) {
    require(d.is_number_integer() && d.get<Index>() >= 1,
            "encoding.dims: expected positive integers");
    ls.dims.push_back(d.get<Index>());
  }
  ls.ket0L = vector_from_json(field(j, "ket0", "encoding"), "encoding.ket0");
  ls.ket1L = vector_from_json(field(j, "ket1", "encoding"), "encoding.ket1");
  require(ls.ket0L.size() == product(ls.dims) &&
              ls.ket1L.size() == product(ls.dims),
          "encoding: ket length does not match dims");
  return ls;
}

namespace {

Json child_to_json(const PlanNode::Child& c);

Json node_to_json(const PlanNode& n) {
  return Json{{"subsystem", n.subsystem},
              {"kraus0", matrix_to_json(n.kraus0)},
              {"kraus1", matrix_to_json(n.kraus1)},
              {"child0", child_to_json(n.child0)},
              {"child1", child_to_json(n.child1)}};
}

Json child_to_json(const PlanNode::Child& c) {
  if (const auto* leaf = std::get_if<PlanLeaf>(&c))
    return Json{{"leaf", leaf->label},
                {"correction", matrix_to_json(leaf->correction)}};
  return node_to_json(**std::get_if<std::unique_ptr<PlanNode>>(&c));
}

PlanNode::Child child_from_json(const Json& j, const std::vector<Index>& dims,
                                const std::string& where);

std::unique_ptr<PlanNode> node_from_json(const Json& j,
                                         const std::vector<Index>& dims,
                                         const std::string& where) {
  auto node = std::make_unique<PlanNode>();
  node->subsystem = static_cast<Index>(
      number_at(field(j, "subsystem", where), where + ".subsystem"));
  require(node->subsystem >= 0 &&
              node->subsystem < static_cast<Index>(dims.size()),
          where + ": subsystem out of range");
  const Index d = dims[static_cast<size_t>(node->subsystem)];
  node->kraus0 = matrix_from_json(field(j, "kraus0", where), where + ".kraus0");
  node->kraus1 = matrix_from_json(field(j, "kraus1", where), where + ".kraus1");
  require(node->kraus0.rows() == d && node->kraus0.cols() == d &&
              node->kraus1.rows() == d && node->kraus1.cols() == d,
          where + ": kraus shape does not match the subsystem dimension");
  node->child0 = child_from_json(field(j, "child0", where), dims,
                                 where + ".child0");
  node->child1 = child_from_json(field(j, "child1", where), dims,
                                 where + ".child1");
  return node;
}

PlanNode::Child child_from_json(const Json& j, const std::vector<Index>& dims,
                                const std::string& where) {
  require(j.is_object(), where + ": expected an object");
  if (j.contains("leaf")) {
    PlanLeaf leaf;
    const Json& l = j.at("leaf");
    require(l.is_string(), where + ".leaf: expected a string label");
    leaf.label = l.get<std::string>();
    const Matrix corr =
        matrix_from_json(field(j, "correction", where), where + ".correction");
    require(corr.rows() == 2 && corr.cols() == 2,
            where + ".correction: expected a 2x2 matrix");
    leaf.correction = corr;
    return PlanNode::Child{std::move(leaf)};
  }
  return PlanNode::Child{node_from_json(j, dims, where)};
}

}  // namespace

Json plan_to_json(const MeasurementPlan& plan) {
  if (!plan.root) throw ValidationError("json: plan has no root");
  return Json{{"version", 1},
              {"kind", "plan"},
              {"dims", plan.dims},
              {"labels", plan.labels},
              {"root", node_to_json(*plan.root)}};
}

MeasurementPlan plan_from_json(const Json& j) {
  check_header(j, "plan");
  MeasurementPlan plan;
  const Json& dims = field(j, "dims", "plan");
  require(dims.is_array() && !dims.empty(),
          "plan.dims: expected a nonempty array");
  for (const auto& d : dims) {
    require(d.is_number_integer() && d.get<Index>() >= 1,
            "plan.dims: expected positive integers");
    plan.dims.push_back(d.get<Index>());
  }
  const Json& labels = field(j, "labels", "plan");
  require(labels.is_array(), "plan.labels: expected an array");
  for (const auto& l : labels) {
    require(l.is_string(), "plan.labels: expected strings");
    plan.labels.push_back(l.get<std::string>());
  }
  plan.root = node_from_json(field(j, "root", "plan"), plan.dims, "plan.root");
  return plan;
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("json: cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ValidationError("json: parse error in '" + path + "': " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("json: cannot write '" + path + "'");
  out << canonical_dump(j);
}

}  // namespace locc
