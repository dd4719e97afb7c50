#include "stieltjes/shiftop.hpp"

#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace smp {

ShiftOperator build_shift(const HilbertRep& rep, int N, double tol) {
  if (N < 1 || rep.size() % N != 0) throw Error(ErrorKind::Schema, "Gram size is not a multiple of N");
  const Eigen::Index count = rep.size() - N;
  if (count <= 0) throw Error(ErrorKind::OrderTooLow, "need S_0..S_2 at least: the shift has an empty domain");

  const Mat dom = rep.vectors.leftCols(count);
  const Mat img = rep.vectors.middleCols(N, count);

  ShiftOperator op;
  op.rep = rep;
  op.N = N;
  const Eigen::Index d = rep.dim;
  if (d == 0) {
    op.domain_basis = Mat(0, 0);
    op.matrix = Mat(0, 0);
    return op;
  }

  // Singular values of the coordinate matrix below sqrt(rank_tol) * sigma_max
  // correspond to Gram eigenvalues that build_space would have dropped.
  const double cut = std::sqrt(rep.rank_tol);
  op.domain_basis = linalg::orthonormal_basis(dom, cut, rep.top_singular);
  const double s0 = linalg::spectral_norm(dom);
  const double rel = s0 > 0.0 ? cut * std::max(1.0, rep.top_singular / s0) : 1.0;
  op.matrix = img * linalg::pinv(dom, rel);

  const Eigen::VectorXd sv = Eigen::JacobiSVD<Mat>(dom).singularValues();
  double smallest = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * s0) smallest = sv(i);
  if (smallest > 0.0) {
    const double top = std::max(rep.top_singular, s0);
    const double backward = rep.reproduction_error() +
                            std::numeric_limits<double>::epsilon() * top * top;
    op.noise_floor = backward / (smallest * smallest);
  }

  double worst = 0.0, largest = 0.0;
  for (Eigen::Index k = 0; k < count; ++k) {
    worst = std::max(worst, (op.matrix * dom.col(k) - img.col(k)).norm());
    largest = std::max(largest, img.col(k).norm());
  }
  op.consistency_residual = largest > 0.0 ? worst / largest : 0.0;
  if (op.consistency_residual > tol) {
    throw Error(ErrorKind::InconsistentTruncation,
                "shift is not determined by the data (residual " +
                    std::to_string(op.consistency_residual) + ")");
  }
  return op;
}

NonnegReport check_nonneg_hermitian(const ShiftOperator& op, int trials, std::uint64_t seed,
                                    double tol) {
  NonnegReport report;
  report.trials = trials;
  const Eigen::Index r = op.domain_dim();
  if (r == 0) return report;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto sample = [&] {
    Vec c(r);
    for (Eigen::Index i = 0; i < r; ++i) c(i) = cplx(normal(rng), normal(rng));
    return Vec(op.domain_basis * c);
  };

  const double scale = std::max(1.0, linalg::spectral_norm(op.matrix * op.domain_basis));
  const double limit = std::max(tol * scale, op.noise_floor);
  report.min_rayleigh = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Vec x = sample();
    const Vec y = sample();
    const Vec ax = op.matrix * x;
    const Vec ay = op.matrix * y;
    const double nx = x.norm(), ny = y.norm();
    const double asym = std::abs(x.dot(ay) - ax.dot(y)) / (nx * ny);
    const double rayleigh = x.dot(ax).real() / (nx * nx);
    report.max_asymmetry = std::max(report.max_asymmetry, asym);
    report.min_rayleigh = std::min(report.min_rayleigh, rayleigh);
    if (asym > limit) throw PropertyViolation("shift operator is not Hermitian on its domain", x);
    if (rayleigh < -limit) throw PropertyViolation("shift operator is not non-negative", x);
  }
  return report;
}

bool on_nonneg_axis(cplx z) {
  return z.imag() == 0.0 && z.real() >= 0.0;
}

DefectData defect_subspace(const ShiftOperator& op, cplx z) {
  if (on_nonneg_axis(z)) throw Error(ErrorKind::BadPoint, "defect point must lie off [0, inf)");
  DefectData dd;
  dd.z = z;
  const double ref = op.rep.top_singular;
  const Mat shifted = op.matrix * op.domain_basis - z * op.domain_basis;
  dd.range_basis = linalg::orthonormal_basis(shifted, 1e-10, ref);

  const Mat head = op.rep.head(op.N);
  dd.y_vectors = head - dd.range_basis * (dd.range_basis.adjoint() * head);
  dd.defect_basis = linalg::orthonormal_basis(dd.y_vectors, 1e-10, ref);
  dd.index = dd.defect_basis.cols();
  return dd;
}

}  // namespace smp
