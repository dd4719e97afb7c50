#pragma once

#include "stieltjes/shiftop.hpp"
#include "stieltjes/solutions.hpp"

#include <cstdint>
#include <optional>

namespace smp {

/// A Hermitian contraction T known on a subspace D(T), written in the
/// splitting H = D(T) + N_{-1}:
///
///   T u = dom_basis t11 c + defect_basis t21 c   for u = dom_basis c.
///
/// Self-adjoint contractive extensions are the matrices
/// [[t11, t21^*], [t21, X]] whose corner X lies in [x_min, x_max].
struct ContractionPicture {
  Eigen::Index dim = 0;
  Mat dom_basis;     // d x r
  Mat defect_basis;  // d x q
  Mat t11;           // r x r
  Mat t21;           // q x r

  struct Extremal {
    Mat x_min, x_max;  // q x q corners
    Mat t_mu, t_M;     // d x d
    Mat gap;           // t_M - t_mu
  };
  std::optional<Extremal> extremal;

  Eigen::Index domain_dim() const { return dom_basis.cols(); }
  Eigen::Index defect_dim() const { return defect_basis.cols(); }

  /// The full d x d matrix for corner X.
  Mat assemble(const Mat& corner) const;
  /// T applied to the domain basis, d x r.
  Mat image() const;

  const Mat& t_mu() const { return extremal.value().t_mu; }
  const Mat& t_M() const { return extremal.value().t_M; }
};

struct DeterminacyVerdict {
  Eigen::Index upsilon_dim = 0;
  Eigen::Index defect_dim = 0;
  bool completely_indeterminate = false;
  bool determinate = false;
  double gap_norm = 0.0;
};

struct ExtendedOperator {
  ContractionPicture base;  // picture of A, with extremal fields
  ContractionPicture ext;   // picture of A_ext, with extremal fields
  Mat upsilon_basis;        // d x k, ker C restricted to N_{-1}
};

struct ExtensionTolerances {
  double pinv_rel = 1e-12;
  double range_tol = 1e-6;
  double ker_tol = 1e-9;
  /// Determinate when |x_max - x_min| <= det_rel * |t_M| + 1e-12.
  double det_rel = 1e-9;
};

/// Builds the picture from an orthonormal domain basis and T on it.
ContractionPicture picture_from_map(const Mat& dom_basis, const Mat& image);

/// T = (E - A)(E + A)^{-1} on D(T) = (A + E) D(A).
ContractionPicture cayley(const ShiftOperator& op);

/// Fills in t_mu, t_M and the gap via the Schur-complement bounds of
/// I + T and I - T. Throws CompletionInfeasible when the range conditions or
/// x_min <= x_max fail beyond tolerance.
ContractionPicture extremal_extensions(ContractionPicture pic, const ExtensionTolerances& tol = {});

/// First half: t_mu + s (t_M - t_mu) for evenly spaced s in [0, 1] (s = 0
/// and s = 1 included); second half: random corners
/// x_min + D^{1/2} K D^{1/2} with D = x_max - x_min and 0 <= K <= I.
std::vector<Mat> sample_sc_extensions(const ContractionPicture& pic, int count, std::uint64_t seed);

DeterminacyVerdict determinacy(const ContractionPicture& pic, const ExtensionTolerances& tol = {});

/// Enlarges D(T) by ker(C restricted to N_{-1}), where all contractive
/// extensions agree, and recomputes the extremal pair.
ExtendedOperator extend_ext(const ContractionPicture& pic, const ExtensionTolerances& tol = {});

/// (A_hat - z)^{-1} for A_hat = (E - t)(E + t)^{-1}, computed as
/// (E + t)((1 - z)E - (1 + z)t)^{-1}; eigenvalue -1 of t (a multivalued
/// part of A_hat) contributes zero. Throws BadPoint on [0, inf).
Mat resolvent_from_contraction(const Mat& t, cplx z);

struct SpectralOptions {
  double cluster_tol = 1e-9;
  double weight_tol = 1e-14;
};

/// Atoms lambda_i = (1 - t_i)/(1 + t_i) with weights <xi_k, P_i xi_j>.
SolutionMeasure spectral_solution(const Mat& t, const HilbertRep& rep, int N,
                                  const SpectralOptions& opts = {});

/// Whether t is a Hermitian contraction that agrees with T on D(T).
struct ExtensionCheck {
  double asymmetry = 0.0;
  double contraction_margin = 0.0;  // min eig of I - t^2
  double extension_error = 0.0;     // |t u - T u| over the domain basis
};
ExtensionCheck check_extension(const ContractionPicture& pic, const Mat& t);

}  // namespace smp
