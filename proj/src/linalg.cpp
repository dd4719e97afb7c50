#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::OrderTooHigh: return "OrderTooHigh";
    case ErrorKind::OrderTooLow: return "OrderTooLow";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::InconsistentTruncation: return "InconsistentTruncation";
    case ErrorKind::PropertyViolated: return "PropertyViolated";
    case ErrorKind::BadPoint: return "BadPoint";
    case ErrorKind::CompletionInfeasible: return "CompletionInfeasible";
    case ErrorKind::NotIndeterminate: return "NotIndeterminate";
    case ErrorKind::WeylLimitDivergent: return "WeylLimitDivergent";
    case ErrorKind::NotStieltjesClass: return "NotStieltjesClass";
    case ErrorKind::ParameterDegenerate: return "ParameterDegenerate";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

namespace linalg {

HermitianEigen eigh(const Mat& a) {
  if (a.size() == 0) return {RVec(0), Mat(0, 0)};
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian_part(a));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) * 0.5; }

double min_eigenvalue(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_abs_entry(const Mat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

Mat orthonormal_basis(const Mat& columns, double rel_tol, double reference) {
  const auto rows = columns.rows();
  if (columns.cols() == 0 || rows == 0) return Mat(rows, 0);
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  if (s(0) == 0.0) return Mat(rows, 0);
  const double cutoff = rel_tol * std::max(s(0), reference);
  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) > cutoff) ++keep;
  return svd.matrixU().leftCols(keep);
}

Mat orthogonal_complement(const Mat& basis, Eigen::Index dim) {
  if (basis.cols() == 0) return Mat::Identity(dim, dim);
  if (basis.cols() >= dim) return Mat(dim, 0);
  // Eigenvectors of I - QQ* with eigenvalue 1 span the complement.
  const Mat residual = Mat::Identity(dim, dim) - projector(basis);
  HermitianEigen eig = eigh(residual);
  const auto k = dim - basis.cols();
  return eig.vectors.rightCols(k);
}

Eigen::Index rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const RVec& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  return r;
}

Mat pinv(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  Mat result = Mat::Zero(a.cols(), a.rows());
  if (s(0) == 0.0) return result;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= rel_tol * s(0)) break;
    result += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return result;
}

Mat pinv_hermitian(const Mat& a, double rel_tol) {
  if (a.size() == 0) return a;
  HermitianEigen eig = eigh(a);
  const double top = std::max(std::abs(eig.values.minCoeff()), std::abs(eig.values.maxCoeff()));
  Mat result = Mat::Zero(a.rows(), a.cols());
  if (top == 0.0) return result;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (std::abs(eig.values(i)) > rel_tol * top) {
      result += eig.vectors.col(i) * (1.0 / eig.values(i)) * eig.vectors.col(i).adjoint();
    }
  }
  return result;
}

double condition_number(const Mat& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const RVec& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

}  // namespace linalg
}  // namespace smp
