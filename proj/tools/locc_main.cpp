#include "locc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{
      "Compiles logical-qubit measurements into local feed-forward plans"};
  app.require_subcommand(1);

  locc::CompileArgs compileArgs;
  CLI::App* compile = app.add_subcommand(
      "compile", "Compile a POVM against an encoding into a plan");
  compile->add_option("povm", compileArgs.povmPath, "POVM JSON file")
      ->required();
  compile->add_option("encoding", compileArgs.encodingPath,
                      "Encoding JSON file")
      ->required();
  compile->add_option("-o,--out", compileArgs.outPath,
                      "Output path (default: stdout)");
  compile->add_option("--grouping", compileArgs.grouping,
                      "Binary grouping: balanced | first-rest");
  compile->add_option("--tol", compileArgs.tol, "Structural tolerance");

  locc::SimulateArgs simArgs;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a compiled plan on an input state");
  simulate->add_option("plan", simArgs.planPath, "Plan JSON file")->required();
  simulate->add_option("encoding", simArgs.encodingPath, "Encoding JSON file")
      ->required();
  simulate->add_option(
      "--input", simArgs.input,
      "Logical state (0, 1, +, -, i, -i, or re,im,re,im), or @state.json");
  simulate->add_option("-n,--shots", simArgs.n,
                       "Sample count (0: exact distribution)");
  simulate->add_option("--seed", simArgs.seed, "Sampling seed");
  simulate->add_option("-o,--out", simArgs.outPath,
                       "Output path (default: stdout)");

  locc::VerifyArgs verifyArgs;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check a plan against its target POVM and audit locality");
  verify->add_option("plan", verifyArgs.planPath, "Plan JSON file")
      ->required();
  verify->add_option("povm", verifyArgs.povmPath, "Target POVM JSON file")
      ->required();
  verify->add_option("encoding", verifyArgs.encodingPath,
                     "Encoding JSON file")
      ->required();
  verify->add_option("--tol", verifyArgs.tol, "Acceptance tolerance");
  verify->add_option("-o,--out", verifyArgs.outPath,
                     "Output path (default: stdout)");

  CLI::App* demo = app.add_subcommand("demo", "Worked demonstrations");
  demo->require_subcommand(1);

  locc::DemoBb84Args bb84Args;
  bb84Args.phi = std::acos(-1.0) / 8;
  CLI::App* bb84 = demo->add_subcommand(
      "bb84", "Four-outcome signal-state measurement on a two-party encoding");
  bb84->add_option("--phi", bb84Args.phi,
                   "Encoding interpolation angle in [0, pi/4]");
  bb84->add_option("--input", bb84Args.input, "Logical input state");
  bb84->add_option("-n,--shots", bb84Args.n, "Optional sample count");
  bb84->add_option("--seed", bb84Args.seed, "Sampling seed");
  bb84->add_flag("--emit-plan", bb84Args.emitPlan,
                 "Include the compiled plan in the output");
  bb84->add_option("-o,--out", bb84Args.outPath,
                   "Output path (default: stdout)");

  locc::DemoQssArgs qssArgs;
  CLI::App* qss = demo->add_subcommand(
      "qss", "Secret-sharing checks for a shared two-qubit pair");
  qss->add_option("--preset", qssArgs.preset,
                  "Pair preset: teleport | ghz | generic");
  qss->add_option("--encoding", qssArgs.encodingPath,
                  "Pair from an encoding JSON file (overrides --preset)");
  qss->add_option("--alpha", qssArgs.alpha, "Secret coefficient on |0>");
  qss->add_option("--beta", qssArgs.beta, "Secret coefficient on |1>");
  qss->add_option("--grid-theta", qssArgs.gridTheta,
                  "Polar grid size for the transfer scan");
  qss->add_option("--grid-phi", qssArgs.gridPhi,
                  "Azimuthal grid size for the transfer scan");
  qss->add_option("-o,--out", qssArgs.outPath,
                  "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? locc::kExitOk : locc::kExitBadInput;
  }

  if (compile->parsed())
    return locc::cmd_compile(compileArgs, std::cout, std::cerr);
  if (simulate->parsed())
    return locc::cmd_simulate(simArgs, std::cout, std::cerr);
  if (verify->parsed())
    return locc::cmd_verify(verifyArgs, std::cout, std::cerr);
  if (demo->parsed()) {
    if (bb84->parsed()) return locc::cmd_demo_bb84(bb84Args, std::cout, std::cerr);
    if (qss->parsed()) return locc::cmd_demo_qss(qssArgs, std::cout, std::cerr);
  }
  return locc::kExitInternal;
}
