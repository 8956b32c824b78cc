#pragma once

#include "locc/protocol.hpp"
#include "locc/simulate.hpp"

#include <map>

namespace locc {

// The four-outcome qubit measurement {|0><0|, |+><+|, |1><1|, |-><-|} / 2.
// Labels: first bit is the measured value, second bit the basis
// (0: computational, 1: diagonal).
Povm bb84_povm();

// Two-party encoding parameters: the interpolation angle phi and one local
// basis pair of the second party per first-party index (columns are the
// basis kets, second column orthogonal to the first).
struct Bb84EncodingSpec {
  Real phi = 0;
  Matrix2 etaBasis0 = Matrix2::Identity();
  Matrix2 etaBasis1 = Matrix2::Identity();
};

// phi with the computational basis for index 0 and the diagonal basis for
// index 1.
Bb84EncodingSpec default_bb84_spec(Real phi);

// The encoded logical basis over dims (2, 2). The images of the
// intermediate basis (the minimum-error intercept basis for the two signal
// bases) are chiB0 = cos(phi)|0>|eta0> + sin(phi)|1>|eta1> and
// chiB1 = sin(phi)|0>|eta0perp> + cos(phi)|1>|eta1perp>; the returned kets
// are rotated back to the computational convention.
LogicalSubspace build_bb84_encoding(const Bb84EncodingSpec& spec);

struct Bb84Demo {
  Povm povm;
  LogicalSubspace encoding;
  MeasurementPlan plan;
  std::vector<StageTrace> trace;
  std::map<std::string, Real> distribution;
};

// Compiles the four-outcome measurement against the phi-encoding and
// evaluates it exactly on alpha |0L> + beta |1L>.
Bb84Demo run_bb84_demo(Real phi, Complex alpha, Complex beta);

}  // namespace locc
