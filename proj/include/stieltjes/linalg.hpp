#pragma once

#include "stieltjes/types.hpp"

namespace smp::linalg {

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RVec values;
  Mat vectors;
};

HermitianEigen eigh(const Mat& a);

Mat hermitian_part(const Mat& a);

double min_eigenvalue(const Mat& a);
double max_abs_entry(const Mat& a);
double spectral_norm(const Mat& a);

/// Orthonormal basis of the column span. Singular values at or below
/// rel_tol * max(largest singular value, reference) are discarded, so a
/// positive `reference` turns the cutoff into an absolute one for columns
/// that are all tiny. Empty input or a zero matrix yields a rows x 0 matrix.
Mat orthonormal_basis(const Mat& columns, double rel_tol = 1e-10, double reference = 0.0);

/// Orthonormal basis of the orthogonal complement of span(basis) in C^dim.
/// `basis` must have orthonormal columns.
Mat orthogonal_complement(const Mat& basis, Eigen::Index dim);

/// Numerical rank with relative singular-value cutoff.
Eigen::Index rank(const Mat& a, double rel_tol = 1e-10);

/// Moore-Penrose pseudo-inverse with relative singular-value cutoff.
Mat pinv(const Mat& a, double rel_tol = 1e-12);

/// Pseudo-inverse of a Hermitian matrix via its eigendecomposition.
Mat pinv_hermitian(const Mat& a, double rel_tol = 1e-12);

/// Orthogonal projector onto span(basis) for an orthonormal basis.
inline Mat projector(const Mat& basis) { return basis * basis.adjoint(); }

/// 2-norm condition number (inf for singular input).
double condition_number(const Mat& a);

}  // namespace smp::linalg
