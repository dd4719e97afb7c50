#include "stieltjes/krein.hpp"

#include "stieltjes/io.hpp"
#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace smp {

namespace {

constexpr double kUnitEigTol = 1e-9;
constexpr double kOverlapTol = 1e-8;
constexpr double kConditionLimit = 1e12;

}  // namespace

GammaWeyl::GammaWeyl(const Mat& t_mu, const Mat& J) : t_mu_(linalg::hermitian_part(t_mu)), J_(J) {
  const linalg::HermitianEigen eig = linalg::eigh(t_mu_);
  values_ = eig.values;
  vectors_ = eig.vectors;
  coupling_ = vectors_.adjoint() * J_;

  const Eigen::Index q = J_.cols();
  m0_ = Mat::Zero(q, q);
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const Mat row = coupling_.row(i);
    if (values_(i) >= 1.0 - kUnitEigTol) {
      // ker(A_mu) meets ran J: M(x) blows up like 1/x.
      if (row.norm() > kOverlapTol) m0_finite_ = false;
      continue;
    }
    m0_ += (2.0 / (1.0 - values_(i))) * row.adjoint() * row;
  }
  m0_ = linalg::hermitian_part(m0_);
}

const Mat& GammaWeyl::m0() const {
  if (!m0_finite_) throw Error(ErrorKind::WeylLimitDivergent, "M(0) is not finite");
  return m0_;
}

Vec GammaWeyl::inverse_denominators(cplx z) const {
  Vec inv(values_.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / ((1.0 - z) - (1.0 + z) * values_(i));
  return inv;
}

Mat GammaWeyl::resolvent_mu(cplx z) const {
  if (on_nonneg_axis(z)) throw Error(ErrorKind::BadPoint, "resolvent point must lie off [0, inf)");
  const Vec inv = inverse_denominators(z);
  Vec f(inv.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = (1.0 + values_(i)) * inv(i);
  return vectors_ * f.asDiagonal() * vectors_.adjoint();
}

Mat GammaWeyl::gamma(cplx z) const {
  if (on_nonneg_axis(z)) throw Error(ErrorKind::BadPoint, "gamma-field point must lie off [0, inf)");
  const Vec inv = 2.0 * inverse_denominators(z);
  return vectors_ * inv.asDiagonal() * coupling_;
}

Mat GammaWeyl::weyl(cplx z) const {
  if (on_nonneg_axis(z)) throw Error(ErrorKind::BadPoint, "Weyl function point must lie off [0, inf)");
  const Vec inv = 2.0 * inverse_denominators(z);
  return (z + 1.0) * coupling_.adjoint() * inv.asDiagonal() * coupling_;
}

GammaWeyl build_gamma_weyl(const ExtendedOperator& ext, bool allow_divergent) {
  if (ext.ext.defect_dim() == 0) {
    throw Error(ErrorKind::NotIndeterminate, "no defect left after extension: the problem is determinate");
  }
  GammaWeyl gw(ext.ext.t_mu(), ext.ext.defect_basis);
  if (!allow_divergent && !gw.m0_finite()) {
    throw Error(ErrorKind::WeylLimitDivergent, "Weyl function has no finite limit at 0");
  }
  return gw;
}

const char* to_string(TauParameter::Kind kind) noexcept {
  switch (kind) {
    case TauParameter::Kind::Constant: return "constant";
    case TauParameter::Kind::Rational: return "rational";
    case TauParameter::Kind::Infinite: return "infinite";
    case TauParameter::Kind::Mixed: return "mixed";
  }
  return "unknown";
}

Mat TauParameter::value(cplx z) const {
  Mat out = tau0;
  for (const auto& pole : poles) out += pole.W * (z / (z - pole.p));
  return out;
}

Mat TauParameter::compressed(cplx z) const {
  return finite_basis.adjoint() * value(z) * finite_basis;
}

TauParameter TauParameter::constant(const Mat& value) {
  TauParameter tau;
  tau.kind = Kind::Constant;
  tau.dim = value.rows();
  tau.tau0 = linalg::hermitian_part(value);
  tau.ideal_basis = Mat(tau.dim, 0);
  tau.finite_basis = Mat::Identity(tau.dim, tau.dim);
  return tau;
}

TauParameter TauParameter::infinite(Eigen::Index q) {
  TauParameter tau;
  tau.kind = Kind::Infinite;
  tau.dim = q;
  tau.tau0 = Mat::Zero(q, q);
  tau.ideal_basis = Mat::Identity(q, q);
  tau.finite_basis = Mat(q, 0);
  return tau;
}

std::vector<cplx> class_sample_points() {
  return {cplx(0.0, 1.0),  cplx(0.0, 2.0),  cplx(1.0, 1.0),   cplx(-1.0, 1.0),
          cplx(0.5, 0.1),  cplx(-3.0, 0.5), cplx(5.0, 2.0),   cplx(0.1, 3.0),
          cplx(-0.2, 0.05), cplx(10.0, 0.3), cplx(-10.0, 4.0), cplx(2.0, 0.01)};
}

ClassReport check_stieltjes_class(const std::function<Mat(cplx)>& tau, Eigen::Index q1,
                                  const std::vector<cplx>& points, double tol) {
  ClassReport report;
  if (q1 == 0 || points.empty()) return report;

  const auto n = static_cast<Eigen::Index>(points.size());
  std::vector<Mat> f(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].imag() > 0.0)) throw Error(ErrorKind::BadPoint, "class samples must lie in the upper half-plane");
    f[i] = -tau(points[i]);
  }

  auto kernel = [&](bool scaled) {
    Mat k(n * q1, n * q1);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const cplx zi = points[static_cast<std::size_t>(i)], zj = points[static_cast<std::size_t>(j)];
        Mat phi_i = f[static_cast<std::size_t>(i)], phi_j = f[static_cast<std::size_t>(j)];
        if (scaled) {
          phi_i /= zi;
          phi_j /= zj;
        }
        k.block(j * q1, i * q1, q1, q1) = (phi_i - phi_j.adjoint()) / (zi - std::conj(zj));
      }
    }
    const double scale = std::max(1.0, linalg::max_abs_entry(k));
    return std::pair{linalg::min_eigenvalue(k), scale};
  };

  const auto [scaled_min, scaled_scale] = kernel(true);
  const auto [nev_min, nev_scale] = kernel(false);
  report.min_scaled_kernel = scaled_min;
  report.min_nevanlinna_kernel = nev_min;
  report.pass = scaled_min >= -tol * scaled_scale && nev_min >= -tol * nev_scale;
  return report;
}

ClassReport check_stieltjes_class(const TauParameter& tau, const std::vector<cplx>& points, double tol) {
  return check_stieltjes_class([&](cplx z) { return tau.compressed(z); }, tau.finite_basis.cols(), points, tol);
}

namespace {

Mat parse_square(const nlohmann::json& j, Eigen::Index q, const char* what) {
  if (j.is_null()) throw Error(ErrorKind::Schema, std::string("tau: missing ") + what);
  return io::matrix_from_json(j, q, q);
}

Mat require_hermitian(const Mat& m, const char* what) {
  const double scale = std::max(1.0, linalg::max_abs_entry(m));
  if (linalg::max_abs_entry(m - m.adjoint()) > 1e-12 * scale) {
    throw Error(ErrorKind::NotStieltjesClass, std::string("tau: ") + what + " is not Hermitian");
  }
  return linalg::hermitian_part(m);
}

void parse_finite(const nlohmann::json& spec, Eigen::Index q, TauParameter& tau) {
  const std::string type = spec.value("type", "");
  if (type == "constant") {
    tau.tau0 = require_hermitian(parse_square(spec.value("matrix", nlohmann::json()), q, "matrix"), "matrix");
  } else if (type == "rational") {
    tau.tau0 = spec.contains("tau0") ? require_hermitian(parse_square(spec["tau0"], q, "tau0"), "tau0")
                                     : Mat::Zero(q, q);
    if (!spec.contains("poles") || !spec["poles"].is_array()) {
      throw Error(ErrorKind::Schema, "tau: rational parameter needs a \"poles\" array");
    }
    for (const auto& entry : spec["poles"]) {
      if (!entry.is_object() || !entry.contains("p") || !entry["p"].is_number()) {
        throw Error(ErrorKind::Schema, "tau: each pole needs a numeric \"p\"");
      }
      TauPole pole;
      pole.p = entry["p"].get<double>();
      pole.W = require_hermitian(parse_square(entry.value("W", nlohmann::json()), q, "W"), "W");
      if (!(pole.p > 0.0)) {
        throw Error(ErrorKind::NotStieltjesClass, "tau: pole positions must be positive");
      }
      const double scale = std::max(1.0, linalg::max_abs_entry(pole.W));
      if (linalg::min_eigenvalue(pole.W) < -1e-12 * scale) {
        throw Error(ErrorKind::NotStieltjesClass, "tau: pole weights must be positive semi-definite");
      }
      tau.poles.push_back(std::move(pole));
    }
  } else {
    throw Error(ErrorKind::Schema, "tau: unknown finite part type \"" + type + "\"");
  }
}

}  // namespace

TauParameter make_tau(const nlohmann::json& spec, Eigen::Index q) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
    throw Error(ErrorKind::Schema, "tau document needs a string \"type\"");
  }
  const std::string type = spec["type"].get<std::string>();
  if (type == "infinite") return TauParameter::infinite(q);

  TauParameter tau;
  tau.dim = q;
  tau.tau0 = Mat::Zero(q, q);
  if (type == "constant" || type == "rational") {
    parse_finite(spec, q, tau);
    tau.kind = type == "constant" ? TauParameter::Kind::Constant : TauParameter::Kind::Rational;
    tau.ideal_basis = Mat(q, 0);
    tau.finite_basis = Mat::Identity(q, q);
  } else if (type == "mixed") {
    if (!spec.contains("ideal") || !spec["ideal"].is_array() || !spec.contains("finite")) {
      throw Error(ErrorKind::Schema, "tau: mixed parameter needs \"ideal\" vectors and a \"finite\" part");
    }
    Mat ideal(q, static_cast<Eigen::Index>(spec["ideal"].size()));
    for (std::size_t c = 0; c < spec["ideal"].size(); ++c) {
      const auto& v = spec["ideal"][c];
      if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != q) {
        throw Error(ErrorKind::Schema, "tau: ideal vectors must have q entries");
      }
      for (Eigen::Index r = 0; r < q; ++r) ideal(r, static_cast<Eigen::Index>(c)) = io::complex_from_json(v[static_cast<std::size_t>(r)]);
    }
    parse_finite(spec["finite"], q, tau);
    tau.kind = TauParameter::Kind::Mixed;
    tau.ideal_basis = linalg::orthonormal_basis(ideal, 1e-12);
    tau.finite_basis = linalg::orthogonal_complement(tau.ideal_basis, q);
  } else {
    throw Error(ErrorKind::Schema, "tau: unknown type \"" + type + "\"");
  }

  const ClassReport report = check_stieltjes_class(tau, class_sample_points());
  if (!report.pass) {
    throw Error(ErrorKind::NotStieltjesClass,
                "tau fails the sampled class kernel test (min eigenvalues " +
                    std::to_string(report.min_scaled_kernel) + ", " +
                    std::to_string(report.min_nevanlinna_kernel) + ")");
  }
  return tau;
}

nlohmann::json tau_to_json(const TauParameter& tau) {
  nlohmann::json finite;
  if (tau.is_constant()) {
    finite = {{"type", "constant"}, {"matrix", io::to_json(tau.tau0)}};
  } else {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& p : tau.poles) poles.push_back({{"p", p.p}, {"W", io::to_json(p.W)}});
    finite = {{"type", "rational"}, {"tau0", io::to_json(tau.tau0)}, {"poles", poles}};
  }
  switch (tau.kind) {
    case TauParameter::Kind::Infinite:
      return {{"type", "infinite"}};
    case TauParameter::Kind::Mixed: {
      nlohmann::json ideal = nlohmann::json::array();
      for (Eigen::Index c = 0; c < tau.ideal_basis.cols(); ++c) {
        nlohmann::json v = nlohmann::json::array();
        for (Eigen::Index r = 0; r < tau.dim; ++r) v.push_back(io::to_json(tau.ideal_basis(r, c)));
        ideal.push_back(v);
      }
      return {{"type", "mixed"}, {"ideal", ideal}, {"finite", finite}};
    }
    default:
      return finite;
  }
}

Mat krein_resolvent(const GammaWeyl& gw, const TauParameter& tau, cplx z) {
  if (on_nonneg_axis(z)) throw Error(ErrorKind::BadPoint, "resolvent point must lie off [0, inf)");
  Mat r = gw.resolvent_mu(z);
  const Mat& p1 = tau.finite_basis;
  if (p1.cols() == 0) return r;

  const Mat k = p1.adjoint() * (gw.weyl(z) - gw.m0() - tau.value(z)) * p1;
  if (linalg::condition_number(k) > kConditionLimit) {
    throw Error(ErrorKind::ParameterDegenerate, "tau(z) + M(z) - M(0) is numerically singular");
  }
  const Mat left = gw.gamma(z) * p1;
  const Mat right = gw.gamma(std::conj(z)) * p1;
  r -= left * k.partialPivLu().solve(right.adjoint());
  return r;
}

Mat solution_transform(const GammaWeyl& gw, const TauParameter& tau, const HilbertRep& rep, int N, cplx z) {
  const Mat head = rep.head(N);
  return head.adjoint() * krein_resolvent(gw, tau, z) * head;
}

Mat contraction_transform(const Mat& t, const HilbertRep& rep, int N, cplx z) {
  const Mat head = rep.head(N);
  return head.adjoint() * resolvent_from_contraction(t, z) * head;
}

Mat canonical_extension(const GammaWeyl& gw, const TauParameter& tau) {
  if (!tau.is_constant()) throw Error(ErrorKind::Schema, "canonical extensions need a constant parameter");
  const Mat& p1 = tau.finite_basis;
  if (p1.cols() == 0) return gw.t_mu();
  const Mat k = p1.adjoint() * (gw.m0() + tau.tau0) * p1;
  if (linalg::condition_number(k) > kConditionLimit) {
    throw Error(ErrorKind::ParameterDegenerate, "M(0) + tau is numerically singular");
  }
  const Mat jp = gw.J() * p1;
  return linalg::hermitian_part(gw.t_mu() + 2.0 * jp * k.inverse() * jp.adjoint());
}

TauParameter tau_for_extension(const GammaWeyl& gw, const Mat& t, double rel_tol) {
  const Eigen::Index q = gw.defect_dim();
  const Mat d = linalg::hermitian_part(gw.J().adjoint() * (t - gw.t_mu()) * gw.J() * 0.5);
  const linalg::HermitianEigen eig = linalg::eigh(d);
  const double scale = std::max(1.0, linalg::spectral_norm(d));
  std::vector<Eigen::Index> kept, dropped;
  for (Eigen::Index i = 0; i < q; ++i) (eig.values(i) > rel_tol * scale ? kept : dropped).push_back(i);
  if (kept.empty()) return TauParameter::infinite(q);

  TauParameter tau;
  tau.dim = q;
  tau.finite_basis = Mat(q, static_cast<Eigen::Index>(kept.size()));
  tau.ideal_basis = Mat(q, static_cast<Eigen::Index>(dropped.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) tau.finite_basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(kept[c]);
  for (std::size_t c = 0; c < dropped.size(); ++c) tau.ideal_basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(dropped[c]);
  const Mat& p1 = tau.finite_basis;
  const Mat inner = (p1.adjoint() * d * p1).inverse() - p1.adjoint() * gw.m0() * p1;
  tau.tau0 = linalg::hermitian_part(p1 * inner * p1.adjoint());
  tau.kind = dropped.empty() ? TauParameter::Kind::Constant : TauParameter::Kind::Mixed;
  return tau;
}

std::vector<TauParameter> tau_grid(const GammaWeyl& gw, int k) {
  std::vector<TauParameter> out;
  const Eigen::Index q = gw.defect_dim();
  const double base = std::max(1e-12, linalg::spectral_norm(gw.m0()));
  for (int j = 0; j < k; ++j) {
    const double c = j == 0 ? 0.0 : base * j / static_cast<double>(k - j);
    out.push_back(TauParameter::constant(c * Mat::Identity(q, q)));
  }
  return out;
}

}  // namespace smp
