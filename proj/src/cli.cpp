#include "locc/cli.hpp"

#include "locc/bb84.hpp"
#include "locc/json_io.hpp"
#include "locc/povm.hpp"
#include "locc/protocol.hpp"
#include "locc/qss.hpp"
#include "locc/simulate.hpp"
#include "locc/subspace.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <utility>

namespace locc {
namespace {

void write_doc(const Json& doc, const std::string& outPath, std::ostream& out) {
  if (outPath.empty())
    out << canonical_dump(doc);
  else
    save_json_file(outPath, doc);
}

Grouping parse_grouping(const std::string& g) {
  if (g == "balanced") return Grouping::Balanced;
  if (g == "first-rest") return Grouping::FirstRest;
  throw ValidationError("unknown grouping '" + g +
                        "' (expected balanced or first-rest)");
}

// Named logical states, or "re,im,re,im" coefficients (normalized here).
std::pair<Complex, Complex> parse_logical_input(const std::string& spec) {
  const Real s = 1.0 / std::sqrt(2.0);
  if (spec == "0") return {Complex(1), Complex(0)};
  if (spec == "1") return {Complex(0), Complex(1)};
  if (spec == "+") return {Complex(s), Complex(s)};
  if (spec == "-") return {Complex(s), Complex(-s)};
  if (spec == "i") return {Complex(s), Complex(0, s)};
  if (spec == "-i") return {Complex(s), Complex(0, -s)};

  std::vector<Real> vals;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad input state '" + spec +
                            "' (named state or re,im,re,im)");
    }
  }
  if (vals.size() != 4)
    throw ValidationError("input coefficients must be re,im,re,im");
  Complex alpha(vals[0], vals[1]), beta(vals[2], vals[3]);
  const Real n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (n < 1e-12) throw ValidationError("input state has zero norm");
  return {alpha / n, beta / n};
}

// "@file.json" is a full-space state (bare amplitude array, or an object
// with an "amps" field); anything else is a logical state spec.
Vector build_input_state(const std::string& spec, const LogicalSubspace& ls) {
  if (!spec.empty() && spec[0] == '@') {
    const Json j = load_json_file(spec.substr(1));
    Vector psi = j.is_object() && j.contains("amps")
                     ? vector_from_json(j.at("amps"), "amps")
                     : vector_from_json(j, "state");
    if (psi.size() != product(ls.dims))
      throw ValidationError("state length does not match the encoding dims");
    const Real n = psi.norm();
    if (std::abs(n - 1) > 1e-8)
      throw NotNormalizedError("input state must be unit norm");
    return psi / n;
  }
  auto [alpha, beta] = parse_logical_input(spec);
  return alpha * ls.ket0L + beta * ls.ket1L;
}

Json distribution_to_json(const std::map<std::string, Real>& dist) {
  Json d = Json::object();
  for (const auto& [label, prob] : dist) d[label] = prob;
  return d;
}

Json trace_to_json(const std::vector<StageTrace>& trace) {
  Json arr = Json::array();
  for (const StageTrace& st : trace)
    arr.push_back({{"subsystem", st.subsystem},
                   {"cell", st.cell},
                   {"a", st.a},
                   {"b", st.b},
                   {"p", st.p},
                   {"q", st.q},
                   {"c", st.c},
                   {"d", st.d}});
  return arr;
}

void require_same_dims(const MeasurementPlan& plan,
                       const LogicalSubspace& ls) {
  if (plan.dims != ls.dims)
    throw ValidationError("plan and encoding dimensions differ");
}

template <class Fn>
int run_guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int cmd_compile(const CompileArgs& args, std::ostream& out,
                std::ostream& err) {
  return run_guarded(err, [&] {
    const Povm povm = povm_from_json(load_json_file(args.povmPath));
    const LogicalSubspace ls =
        subspace_from_json(load_json_file(args.encodingPath));
    const Grouping grouping = parse_grouping(args.grouping);

    std::vector<StageTrace> trace;
    MeasurementPlan plan = compile_povm(ls, povm, grouping, &trace, args.tol);
    const AuditReport audit = locality_audit(plan);

    err << "compiled " << povm.size() << "-outcome measurement: "
        << audit.nodeCount << " nodes, " << audit.leafCount
        << " leaves, depth " << audit.maxDepth << "\n";
    for (const StageTrace& st : trace)
      err << "  subsystem " << st.subsystem << " [" << st.cell
          << "] a=" << st.a << " b=" << st.b << " p=" << st.p
          << " q=" << st.q << " c=" << st.c << " d=" << st.d << "\n";

    write_doc(plan_to_json(plan), args.outPath, out);
    return kExitOk;
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out,
                 std::ostream& err) {
  return run_guarded(err, [&] {
    const MeasurementPlan plan = plan_from_json(load_json_file(args.planPath));
    const LogicalSubspace ls =
        subspace_from_json(load_json_file(args.encodingPath));
    require_same_dims(plan, ls);
    const Vector psi = build_input_state(args.input, ls);

    Json doc{{"version", 1}, {"kind", "results"}, {"input", args.input}};
    if (args.n <= 0) {
      doc["mode"] = "exact";
      doc["distribution"] = distribution_to_json(
          exact_distribution_state(plan, psi));
    } else {
      const SampleResult res = sample(plan, psi, args.n, args.seed);
      Json counts = Json::object();
      for (const auto& [label, count] : res.counts) counts[label] = count;
      doc["mode"] = "sample";
      doc["counts"] = counts;
      doc["n"] = res.n;
      doc["seed"] = res.seed;
    }
    write_doc(doc, args.outPath, out);
    return kExitOk;
  });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const MeasurementPlan plan = plan_from_json(load_json_file(args.planPath));
    const Povm target = povm_from_json(load_json_file(args.povmPath));
    const LogicalSubspace ls =
        subspace_from_json(load_json_file(args.encodingPath));
    require_same_dims(plan, ls);
    if (target.dim != 2)
      throw ValidationError("verification target must be a qubit measurement");

    const Povm eff = plan_effective_povm(plan, ls);
    if (eff.size() != target.size())
      throw ValidationError("plan and target label sets differ");
    Real maxDev = 0;
    for (size_t k = 0; k < target.size(); ++k) {
      size_t at = eff.size();
      for (size_t m = 0; m < eff.size(); ++m)
        if (eff.labels[m] == target.labels[k]) { at = m; break; }
      if (at == eff.size())
        throw ValidationError("plan has no outcome labeled '" +
                              target.labels[k] + "'");
      maxDev = std::max(maxDev,
                        (eff.elements[at] - target.elements[k]).norm());
    }

    const AuditReport audit = locality_audit(plan);
    const bool pass = maxDev <= args.tol &&
                      audit.maxCompletenessResidual <= args.tol &&
                      audit.pathMonotonic;

    write_doc(Json{{"version", 1},
                   {"kind", "verification"},
                   {"pass", pass},
                   {"tolerance", args.tol},
                   {"maxElementDeviation", maxDev},
                   {"maxCompletenessResidual", audit.maxCompletenessResidual},
                   {"pathMonotonic", audit.pathMonotonic},
                   {"nodeCount", audit.nodeCount},
                   {"leafCount", audit.leafCount},
                   {"maxDepth", audit.maxDepth}},
              args.outPath, out);
    err << (pass ? "PASS" : "FAIL") << ": max element deviation " << maxDev
        << " (tol " << args.tol << ")\n";
    return pass ? kExitOk : kExitVerifyFailed;
  });
}

int cmd_demo_bb84(const DemoBb84Args& args, std::ostream& out,
                  std::ostream& err) {
  return run_guarded(err, [&] {
    auto [alpha, beta] = parse_logical_input(args.input);
    const Bb84Demo demo = run_bb84_demo(args.phi, alpha, beta);

    Json doc{{"version", 1},
             {"kind", "bb84-demo"},
             {"phi", args.phi},
             {"input", args.input},
             {"distribution", distribution_to_json(demo.distribution)},
             {"strategy", trace_to_json(demo.trace)}};
    if (args.n > 0) {
      const Vector psi =
          alpha * demo.encoding.ket0L + beta * demo.encoding.ket1L;
      const SampleResult res = sample(demo.plan, psi, args.n, args.seed);
      Json counts = Json::object();
      for (const auto& [label, count] : res.counts) counts[label] = count;
      doc["counts"] = counts;
      doc["n"] = res.n;
      doc["seed"] = res.seed;
    }
    if (args.emitPlan) doc["plan"] = plan_to_json(demo.plan);

    err << "phi=" << args.phi << " on '" << args.input << "':";
    for (const auto& [label, prob] : demo.distribution)
      err << "  P(" << label << ")=" << prob;
    err << "\n";
    write_doc(doc, args.outPath, out);
    return kExitOk;
  });
}

int cmd_demo_qss(const DemoQssArgs& args, std::ostream& out,
                 std::ostream& err) {
  return run_guarded(err, [&] {
    Vector chi0(4), chi1(4);
    std::string source;
    if (!args.encodingPath.empty()) {
      const LogicalSubspace ls =
          subspace_from_json(load_json_file(args.encodingPath));
      if (ls.dims != std::vector<Index>{2, 2})
        throw ValidationError("qss demo expects a two-qubit pair encoding");
      chi0 = ls.ket0L;
      chi1 = ls.ket1L;
      source = args.encodingPath;
    } else if (args.preset == "teleport") {
      const Real s = 1.0 / std::sqrt(2.0);
      chi0 << s, 0, 0, s;
      chi1 << 0, s, -s, 0;
      source = args.preset;
    } else if (args.preset == "ghz") {
      chi0 << 1, 0, 0, 0;
      chi1 << 0, 0, 0, 1;
      source = args.preset;
    } else if (args.preset == "generic") {
      chi0 << std::sqrt(0.8), 0, 0, std::sqrt(0.2);
      chi1 << 0, std::sqrt(0.3), -std::sqrt(0.7), 0;
      source = args.preset;
    } else {
      throw ValidationError("unknown preset '" + args.preset +
                            "' (teleport, ghz, generic)");
    }

    const Real n = std::hypot(args.alpha, args.beta);
    if (n < 1e-12) throw ValidationError("secret state has zero norm");
    const Complex alpha(args.alpha / n), beta(args.beta / n);

    const QssEncoding enc = make_qss_encoding(chi0, chi1);
    const TransferReport transfer =
        check_perfect_transfer(enc, args.gridTheta, args.gridPhi);

    Json doc{{"version", 1},
             {"kind", "qss-demo"},
             {"source", source},
             {"secret", Json::array({args.alpha / n, args.beta / n})},
             {"pair",
              {{"p", enc.p},
               {"q", enc.q},
               {"teleportLike", enc.teleportLike},
               {"productLike", enc.productLike},
               {"basesAligned", enc.basesAligned}}},
             {"transfer",
              {{"minDeviation", transfer.minDeviation},
               {"maxDeviation", transfer.maxDeviation},
               {"thetaStar", transfer.thetaStar},
               {"phiStar", transfer.phiStar},
               {"gridTheta", transfer.gridTheta},
               {"gridPhi", transfer.gridPhi}}}};
    try {
      const BasisInfoReport info = check_basis_info(enc);
      doc["basisInfo"] = {{"commutatorNorm", info.commutatorNorm},
                          {"inverted", info.inverted}};
    } catch (const ExcludedCaseError& e) {
      doc["basisInfo"] = {{"excluded", e.what()}};
    }

    Json ghz = Json::array();
    for (const GhzRun& run : run_ghz_protocol(alpha, beta))
      ghz.push_back({{"alice", run.aliceOutcome},
                     {"bob", run.bobOutcome},
                     {"probability", run.probability},
                     {"fidelity", run.fidelity}});
    doc["ghz"] = ghz;

    Json modified = Json::array();
    for (const ModifiedRun& run : run_modified_protocol(enc, alpha, beta))
      modified.push_back(
          {{"alice", run.aliceOutcome},
           {"probability", run.probability},
           {"logical", Json::array({complex_to_json(run.logical(0)),
                                    complex_to_json(run.logical(1))})}});
    doc["modified"] = modified;

    err << "pair '" << source << "': p=" << enc.p << " q=" << enc.q
        << ", transfer min deviation " << transfer.minDeviation << "\n";
    write_doc(doc, args.outPath, out);
    return kExitOk;
  });
}

}  // namespace locc
