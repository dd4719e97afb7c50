#pragma once

#include "stieltjes/solutions.hpp"

#include <cstdint>
#include <string>

namespace smp::gen {

/// Parses "pos:w,pos:w,..." into atoms with weight w * I_N.
SolutionMeasure parse_atoms(const std::string& spec, int N);

struct RandomMeasureOptions {
  int N = 1;
  int count = 2;
  double lo = 0.0;
  double hi = 10.0;
  /// Minimum spacing between atom positions (0 disables the constraint).
  double min_separation = 0.0;
  /// Rescale all weights so that trace(S_0) = 1.
  bool normalize = false;
};

/// Atoms uniform in [lo, hi], weights W = G^* G with complex Gaussian G.
/// Fully determined by the seed.
SolutionMeasure random_measure(const RandomMeasureOptions& opts, std::uint64_t seed);

/// Moments S_0..S_order of the measure by direct summation.
MomentSequence moments_for(const SolutionMeasure& meas, int order);

}  // namespace smp::gen
