#pragma once

#include "locc/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace locc {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitInternal = 3;

struct CompileArgs {
  std::string povmPath;
  std::string encodingPath;
  std::string outPath;  // empty: stdout
  std::string grouping = "balanced";  // "balanced" | "first-rest"
  Real tol = kStructuralTol;
};

struct SimulateArgs {
  std::string planPath;
  std::string encodingPath;
  std::string input = "0";  // named state, "re,im,re,im", or "@state.json"
  std::int64_t n = 0;       // 0: exact distribution; > 0: sampled counts
  std::uint64_t seed = 1;
  std::string outPath;
};

struct VerifyArgs {
  std::string planPath;
  std::string povmPath;
  std::string encodingPath;
  Real tol = 1e-8;
  std::string outPath;
};

struct DemoBb84Args {
  Real phi = 0;
  std::string input = "0";
  std::int64_t n = 0;  // optional sampling on top of the exact distribution
  std::uint64_t seed = 1;
  bool emitPlan = false;
  std::string outPath;
};

struct DemoQssArgs {
  std::string preset = "generic";  // "teleport" | "ghz" | "generic"
  std::string encodingPath;        // overrides the preset when set
  Real alpha = 0.6;
  Real beta = 0.8;
  int gridTheta = 200;
  int gridPhi = 400;
  std::string outPath;
};

// Each command writes one JSON document to `out` (or the args' outPath) and
// diagnostics to `err`, and returns an exit code.
int cmd_compile(const CompileArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out,
                 std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_demo_bb84(const DemoBb84Args& args, std::ostream& out,
                  std::ostream& err);
int cmd_demo_qss(const DemoQssArgs& args, std::ostream& out,
                 std::ostream& err);

}  // namespace locc
