#pragma once

#include "stieltjes/gns.hpp"

#include <cstdint>

namespace smp {

/// The shift A xi_k = xi_{k+N} on D(A) = span{xi_0..xi_{nN-1}}.
///
/// `matrix` is only meaningful on the domain; it maps the orthogonal
/// complement of D(A) to zero and nothing should rely on that.
struct ShiftOperator {
  HilbertRep rep;
  int N = 1;
  Mat domain_basis;  // d x r, orthonormal
  Mat matrix;        // d x d
  double consistency_residual = 0.0;
  // Attainable Hermitian accuracy of the domain compression: the Gram
  // reproduction error (rank cut plus rounding) over sigma_min^2 of the kept
  // domain coordinates. Ill-conditioned data cannot do better.
  double noise_floor = 0.0;

  Eigen::Index dim() const { return matrix.rows(); }
  Eigen::Index domain_dim() const { return domain_basis.cols(); }
  /// Number of data vectors in the domain (nN).
  Eigen::Index domain_count() const { return rep.size() - N; }
};

struct DefectData {
  cplx z;
  Mat range_basis;   // H_z = (A - z) D(A)
  Mat y_vectors;     // y_k = xi_k - P_{H_z} xi_k, k < N
  Mat defect_basis;  // span{y_k}
  Eigen::Index index = 0;
};

struct NonnegReport {
  int trials = 0;
  double min_rayleigh = 0.0;    // min (Ax, x) / |x|^2 over samples
  double max_asymmetry = 0.0;   // max |(Ax, y) - (x, Ay)| / (|x||y|)
};

ShiftOperator build_shift(const HilbertRep& rep, int N, double tol = 1e-8);

/// Samples x, y in D(A) and checks symmetry and (Ax, x) >= -tol |x|^2
/// (both relative to max(1, |A|), never tighter than noise_floor). Throws PropertyViolation with the first
/// failing sample.
NonnegReport check_nonneg_hermitian(const ShiftOperator& op, int trials, std::uint64_t seed,
                                    double tol = 1e-9);

/// True for points of [0, inf), where resolvents of non-negative operators
/// are not defined.
bool on_nonneg_axis(cplx z);

DefectData defect_subspace(const ShiftOperator& op, cplx z);

}  // namespace smp
