#include "stieltjes/extensions.hpp"

#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace smp {

Mat ContractionPicture::assemble(const Mat& corner) const {
  const Eigen::Index r = domain_dim(), q = defect_dim();
  Mat basis(dim, r + q);
  basis << dom_basis, defect_basis;
  Mat block(r + q, r + q);
  block.topLeftCorner(r, r) = t11;
  block.topRightCorner(r, q) = t21.adjoint();
  block.bottomLeftCorner(q, r) = t21;
  block.bottomRightCorner(q, q) = corner;
  return linalg::hermitian_part(basis * block * basis.adjoint());
}

Mat ContractionPicture::image() const { return dom_basis * t11 + defect_basis * t21; }

ContractionPicture picture_from_map(const Mat& dom_basis, const Mat& image) {
  ContractionPicture pic;
  pic.dim = dom_basis.rows();
  pic.dom_basis = dom_basis;
  pic.defect_basis = linalg::orthogonal_complement(dom_basis, pic.dim);
  pic.t11 = linalg::hermitian_part(dom_basis.adjoint() * image);
  pic.t21 = pic.defect_basis.adjoint() * image;
  return pic;
}

ContractionPicture cayley(const ShiftOperator& op) {
  const Eigen::Index d = op.dim();
  const Mat& B = op.domain_basis;
  const Mat AB = op.matrix * B;
  const Mat plus = B + AB;   // (A + E) b
  const Mat minus = B - AB;  // (E - A) b

  if (linalg::rank(plus, 1e-10) < B.cols()) {
    throw PropertyViolation("A + E is not injective on D(A); A is not non-negative", Vec::Zero(d));
  }
  const Mat dom = linalg::orthonormal_basis(plus, 1e-10);
  const Mat image = minus * linalg::pinv(plus) * dom;
  ContractionPicture pic = picture_from_map(dom, image);

  const double norm = linalg::spectral_norm(image);
  if (norm > 1.0 + 1e-8) {
    throw PropertyViolation("Cayley transform is not contractive (norm " + std::to_string(norm) + ")",
                            Vec::Zero(d));
  }
  return pic;
}

ContractionPicture extremal_extensions(ContractionPicture pic, const ExtensionTolerances& tol) {
  const Eigen::Index r = pic.domain_dim(), q = pic.defect_dim();
  const Mat Ir = Mat::Identity(r, r), Iq = Mat::Identity(q, q);
  const Mat plus = Ir + pic.t11;
  const Mat minus = Ir - pic.t11;
  const Mat plus_inv = linalg::pinv_hermitian(plus, tol.pinv_rel);
  const Mat minus_inv = linalg::pinv_hermitian(minus, tol.pinv_rel);

  // T21 must vanish on ker(I + T11) and ker(I - T11).
  const double scale = std::max(1.0, linalg::spectral_norm(pic.t21));
  const double leak_plus = linalg::spectral_norm(pic.t21 * (Ir - plus * plus_inv));
  const double leak_minus = linalg::spectral_norm(pic.t21 * (Ir - minus * minus_inv));
  if (std::max(leak_plus, leak_minus) > tol.range_tol * scale) {
    throw Error(ErrorKind::CompletionInfeasible,
                "range condition of the contractive completion fails (leak " +
                    std::to_string(std::max(leak_plus, leak_minus)) + ")");
  }

  ContractionPicture::Extremal ex;
  ex.x_min = linalg::hermitian_part(-Iq + pic.t21 * plus_inv * pic.t21.adjoint());
  ex.x_max = linalg::hermitian_part(Iq - pic.t21 * minus_inv * pic.t21.adjoint());
  if (q > 0 && linalg::min_eigenvalue(ex.x_max - ex.x_min) < -1e-9) {
    throw Error(ErrorKind::CompletionInfeasible, "no contractive completion: x_min exceeds x_max");
  }
  ex.t_mu = pic.assemble(ex.x_min);
  ex.t_M = pic.assemble(ex.x_max);
  ex.gap = ex.t_M - ex.t_mu;
  pic.extremal = std::move(ex);
  return pic;
}

namespace {

Mat psd_sqrt(const Mat& a) {
  const linalg::HermitianEigen eig = linalg::eigh(a);
  Mat out = Mat::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    out += std::sqrt(std::max(0.0, eig.values(i))) * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  }
  return out;
}

Mat random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) g(i, k) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  return qr.householderQ() * Mat::Identity(n, n);
}

}  // namespace

std::vector<Mat> sample_sc_extensions(const ContractionPicture& pic, int count, std::uint64_t seed) {
  const auto& ex = pic.extremal.value();
  std::vector<Mat> out;
  if (count <= 0) return out;
  const int ramp = std::max(1, (count + 1) / 2);
  for (int j = 0; j < ramp; ++j) {
    const double s = ramp == 1 ? 0.0 : static_cast<double>(j) / (ramp - 1);
    out.push_back(ex.t_mu + s * ex.gap);
  }

  const Eigen::Index q = pic.defect_dim();
  const Mat root = psd_sqrt(ex.x_max - ex.x_min);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(out.size()) < count) {
    const Mat u = random_unitary(q, rng);
    RVec diag(q);
    for (Eigen::Index i = 0; i < q; ++i) diag(i) = unit(rng);
    const Mat k = u * diag.cast<cplx>().asDiagonal() * u.adjoint();
    out.push_back(pic.assemble(ex.x_min + root * k * root));
  }
  return out;
}

DeterminacyVerdict determinacy(const ContractionPicture& pic, const ExtensionTolerances& tol) {
  const auto& ex = pic.extremal.value();
  DeterminacyVerdict v;
  v.defect_dim = pic.defect_dim();
  const Mat corner = ex.x_max - ex.x_min;
  v.gap_norm = linalg::spectral_norm(corner);
  const double det_tol = tol.det_rel * linalg::spectral_norm(ex.t_M) + 1e-12;
  v.determinate = v.gap_norm <= det_tol;
  if (v.determinate) {
    v.upsilon_dim = v.defect_dim;
  } else {
    const RVec eig = linalg::eigh(corner).values;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
      if (eig(i) <= tol.ker_tol * v.gap_norm) ++v.upsilon_dim;
    }
  }
  v.completely_indeterminate = v.upsilon_dim == 0 && v.defect_dim > 0;
  return v;
}

ExtendedOperator extend_ext(const ContractionPicture& pic, const ExtensionTolerances& tol) {
  const auto& ex = pic.extremal.value();
  const DeterminacyVerdict v = determinacy(pic, tol);
  const Eigen::Index q = pic.defect_dim();

  Mat kernel(q, 0);
  if (v.determinate) {
    kernel = Mat::Identity(q, q);
  } else if (v.upsilon_dim > 0) {
    const linalg::HermitianEigen eig = linalg::eigh(ex.x_max - ex.x_min);
    kernel = eig.vectors.leftCols(v.upsilon_dim);
  }

  ExtendedOperator out;
  out.base = pic;
  out.upsilon_basis = pic.defect_basis * kernel;
  if (kernel.cols() == 0) {
    out.ext = pic;
    return out;
  }
  Mat dom(pic.dim, pic.domain_dim() + kernel.cols());
  dom << pic.dom_basis, out.upsilon_basis;
  out.ext = extremal_extensions(picture_from_map(dom, ex.t_mu * dom), tol);
  return out;
}

Mat resolvent_from_contraction(const Mat& t, cplx z) {
  if (on_nonneg_axis(z)) throw Error(ErrorKind::BadPoint, "resolvent point must lie off [0, inf)");
  const linalg::HermitianEigen eig = linalg::eigh(t);
  Vec f(eig.values.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double ti = eig.values(i);
    f(i) = (1.0 + ti) / ((1.0 - z) - (1.0 + z) * ti);
  }
  return eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
}

SolutionMeasure spectral_solution(const Mat& t, const HilbertRep& rep, int N, const SpectralOptions& opts) {
  SolutionMeasure meas;
  meas.N = N;
  const Mat head = rep.head(N);
  const double scale = std::max(1.0, linalg::max_abs_entry(head.adjoint() * head));
  const linalg::HermitianEigen eig = linalg::eigh(t);
  const Eigen::Index d = eig.values.size();

  Eigen::Index i = 0;
  while (i < d) {
    Eigen::Index j = i + 1;
    while (j < d && eig.values(j) - eig.values(j - 1) <= opts.cluster_tol) ++j;
    const Mat vecs = eig.vectors.middleCols(i, j - i);
    const double tau = eig.values.segment(i, j - i).mean();
    const Mat coeff = vecs.adjoint() * head;
    const Mat weight = linalg::hermitian_part(coeff.adjoint() * coeff);

    if (tau <= -1.0 + opts.cluster_tol) {
      if (linalg::max_abs_entry(weight) > opts.weight_tol * scale) meas.mass_at_infinity = weight;
      for (Eigen::Index a = 0; a < rep.size(); ++a) {
        const double norm = rep.vectors.col(a).norm();
        if (norm > 0.0) {
          meas.infinity_overlap =
              std::max(meas.infinity_overlap, (vecs.adjoint() * rep.vectors.col(a)).norm() / norm);
        }
      }
    } else if (linalg::max_abs_entry(weight) > opts.weight_tol * scale) {
      const double lambda = std::max(0.0, (1.0 - tau) / (1.0 + tau));
      meas.atoms.push_back({lambda, weight});
    }
    i = j;
  }
  meas.canonicalize();
  return meas;
}

ExtensionCheck check_extension(const ContractionPicture& pic, const Mat& t) {
  ExtensionCheck c;
  c.asymmetry = linalg::max_abs_entry(t - t.adjoint());
  const Mat h = linalg::hermitian_part(t);
  c.contraction_margin = linalg::min_eigenvalue(Mat::Identity(t.rows(), t.cols()) - h * h);
  const Mat diff = t * pic.dom_basis - pic.image();
  for (Eigen::Index k = 0; k < diff.cols(); ++k) c.extension_error = std::max(c.extension_error, diff.col(k).norm());
  return c;
}

}  // namespace smp
