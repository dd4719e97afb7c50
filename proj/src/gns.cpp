#include "stieltjes/gns.hpp"

#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace smp {

double HilbertRep::reproduction_error() const {
  return linalg::max_abs_entry(vectors.adjoint() * vectors - gram.gamma);
}

HilbertRep build_space(const ScalarGram& gram, double rank_tol) {
  HilbertRep rep;
  rep.gram = gram;
  rep.rank_tol = rank_tol;
  const Eigen::Index size = gram.size();
  if (size == 0) {
    rep.vectors = Mat(0, 0);
    return rep;
  }

  const linalg::HermitianEigen eig = linalg::eigh(gram.gamma);
  const double scale = std::max(1.0, linalg::max_abs_entry(gram.gamma));
  const double lowest = eig.values(0);
  if (lowest < -rank_tol * scale) {
    throw Error(ErrorKind::NotPSD, "Gram matrix has eigenvalue " + std::to_string(lowest));
  }
  const double top = eig.values(size - 1);
  std::vector<Eigen::Index> kept;
  if (top > 0.0) {
    for (Eigen::Index i = size - 1; i >= 0; --i) {
      if (eig.values(i) > rank_tol * top) kept.push_back(i);
    }
  }

  rep.dim = static_cast<Eigen::Index>(kept.size());
  rep.vectors = Mat::Zero(rep.dim, size);
  for (Eigen::Index r = 0; r < rep.dim; ++r) {
    const Eigen::Index i = kept[static_cast<std::size_t>(r)];
    rep.vectors.row(r) = std::sqrt(eig.values(i)) * eig.vectors.col(i).adjoint();
  }
  rep.top_singular = top > 0.0 ? std::sqrt(top) : 0.0;
  return rep;
}

Vec project_onto(const HilbertRep& rep, const Mat& subspace, const Vec& v) {
  if (subspace.cols() == 0) return Vec::Zero(v.size());
  const Mat q = linalg::orthonormal_basis(subspace, 1e-12, rep.top_singular);
  return q * (q.adjoint() * v);
}

}  // namespace smp
