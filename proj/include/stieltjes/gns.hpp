#pragma once

#include "stieltjes/hankel.hpp"

namespace smp {

/// Coordinate vectors xi_0..xi_{size-1} in C^d whose inner products
/// <xi_a, xi_b> = xi_a^* xi_b reproduce the scalarized Gram matrix.
///
/// All inner products in this library are conjugate-linear in the first
/// slot, so a Gram-type quantity is always Xi^* (.) Xi.
struct HilbertRep {
  Eigen::Index dim = 0;
  Mat vectors;  // d x size, column a is xi_a
  ScalarGram gram;
  double rank_tol = 1e-10;
  /// Largest singular value of `vectors` (sqrt of the largest Gram eigenvalue).
  double top_singular = 0.0;

  Eigen::Index size() const { return vectors.cols(); }
  Vec xi(Eigen::Index a) const { return vectors.col(a); }
  /// xi_0..xi_{N-1}, the vectors that carry the measure.
  Mat head(int N) const { return vectors.leftCols(N); }
  /// max |<xi_a, xi_b> - gamma(a, b)|.
  double reproduction_error() const;
};

/// Symmetric factorization Lambda^{1/2} U^* of the Gram matrix, keeping
/// eigenvalues above rank_tol * lambda_max. Throws NotPSD when an eigenvalue
/// falls below -rank_tol * max(1, max|gamma|).
HilbertRep build_space(const ScalarGram& gram, double rank_tol = 1e-10);

/// Orthogonal projection of v onto span(subspace) (columns need not be
/// independent or orthonormal).
Vec project_onto(const HilbertRep& rep, const Mat& subspace, const Vec& v);

}  // namespace smp
