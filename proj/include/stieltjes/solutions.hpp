#pragma once

#include "stieltjes/hankel.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace smp {

struct Atom {
  double position = 0.0;
  Mat weight;  // N x N, PSD
};

/// A discrete N x N matrix measure on [0, inf), stored as jumps.
///
/// The cumulative M(lambda) = sum of weights with position < lambda is
/// left-continuous and vanishes at 0; a jump at the origin only shows up
/// in M(lambda) for lambda > 0.
struct SolutionMeasure {
  int N = 1;
  std::vector<Atom> atoms;
  /// Weight of the head vectors xi_0..xi_{N-1} on the eigenvalue -1 of the
  /// generating contraction (a point mass "at infinity"), if any.
  std::optional<Mat> mass_at_infinity;
  /// max_a |P_{-1} xi_a| / |xi_a| over all data vectors; a positive value
  /// means the top moment S_{2n} cannot be reproduced.
  double infinity_overlap = 0.0;
  /// Set when atoms come from numerical transform inversion.
  bool approximate = false;

  /// Sorts by position and merges atoms closer than `merge_tol`.
  void canonicalize(double merge_tol = 0.0);
  Mat cumulative(double lambda) const;
  Mat total_mass() const;
};

struct TransformSample {
  cplx z;
  Mat F;
};
using TransformSamples = std::vector<TransformSample>;

struct MomentCheck {
  std::vector<double> errors;  // per order p = 0..upto
  double rtol = 1e-8;
  bool pass = true;
  int worst_order = -1;
};

/// S_p = sum_i lambda_i^p W_i for p = 0..p_max.
MomentSequence moments_of_measure(const SolutionMeasure& meas, int p_max);

/// Relative Frobenius errors |sum lambda^p W - S_p| / max(1, |S_p|).
MomentCheck verify_moments(const SolutionMeasure& meas, const MomentSequence& seq, int upto,
                           double rtol = 1e-8);

/// sum_i W_i / (lambda_i - z). Throws PoleHit within 1e-12 of an atom.
Mat transform_of_measure(const SolutionMeasure& meas, cplx z);

/// Largest pairwise difference statistic used to tell solutions apart:
/// max over p <= p_max and grid points of the moment / cumulative mismatch.
double measure_distance(const SolutionMeasure& a, const SolutionMeasure& b, int p_max);

struct PerronOptions {
  double lo = 0.0;
  double hi = 10.0;
  int grid_points = 2001;
  std::vector<double> eps_schedule{1e-2, 1e-3, 1e-4};
  double atom_tol = 1e-3;
  double peak_factor = 10.0;
  /// Peaks whose extrapolated weight has trace below this are discarded.
  double weight_floor = 1e-10;
};

using TransformSampler = std::function<Mat(cplx)>;

/// Recovers atoms from boundary values of a matrix Stieltjes transform:
/// peaks of Im tr F(x + i eps) locate atoms, eps * Im F at the refined peak
/// estimates weights, and Richardson extrapolation in eps^2 removes the
/// leading bias. Throws NoConvergence when successive extrapolations
/// disagree by more than atom_tol.
SolutionMeasure perron_invert(const TransformSampler& sampler, int N, const PerronOptions& opts = {});

/// (x, Im F(x + i eps)) on the grid, for CSV export.
std::vector<std::pair<double, Mat>> imag_scan(const TransformSampler& sampler, double lo, double hi,
                                              int points, double eps);

}  // namespace smp
