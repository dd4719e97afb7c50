#pragma once

#include "stieltjes/extensions.hpp"

#include <json.hpp>

#include <functional>
#include <vector>

namespace smp {

/// gamma-field and Weyl function built from Friedrichs-extension resolvents
/// with base point -1:
///
///   gamma(z) = (E + (z + 1) R_z(t_mu)) J = 2 ((1 - z)E - (1 + z) t_mu)^{-1} J
///   M(z)     = (z + 1) J^* gamma(z)
///
/// The columns of J are an orthonormal basis of N_{-1}. M is Nevanlinna with
/// M(-1) = 0; only differences M(z) - M(0) enter the resolvent formula, so
/// the additive constant is immaterial.
class GammaWeyl {
public:
  GammaWeyl(const Mat& t_mu, const Mat& J);

  const Mat& t_mu() const { return t_mu_; }
  const Mat& J() const { return J_; }
  Eigen::Index defect_dim() const { return J_.cols(); }
  Eigen::Index dim() const { return t_mu_.rows(); }

  bool m0_finite() const { return m0_finite_; }
  /// lim M(x), x -> 0-, from the spectral decomposition of t_mu. Throws
  /// WeylLimitDivergent when an eigenvalue 1 of t_mu overlaps ran J.
  const Mat& m0() const;

  Mat resolvent_mu(cplx z) const;
  Mat gamma(cplx z) const;
  Mat weyl(cplx z) const;

private:
  Vec inverse_denominators(cplx z) const;

  Mat t_mu_;
  Mat J_;
  RVec values_;   // eigenvalues of t_mu
  Mat vectors_;   // eigenvectors of t_mu
  Mat coupling_;  // vectors_^* J
  Mat m0_;
  bool m0_finite_ = true;
};

/// Requires the completely indeterminate picture of A_ext with q >= 1.
/// Throws NotIndeterminate for q = 0 and, unless allow_divergent is set,
/// WeylLimitDivergent when M(0) is infinite.
GammaWeyl build_gamma_weyl(const ExtendedOperator& ext, bool allow_divergent = false);

struct TauPole {
  double p = 1.0;  // > 0
  Mat W;           // q x q, PSD
};

/// Boundary parameter of the resolvent formula, on C^q = H_1 + H_2.
///
/// On H_2 (the ideal part) the parameter is the pure relation {0} x H_2;
/// on H_1 it is the compression of
///
///   tau(z) = tau0 + sum_k W_k z / (z - p_k),   p_k > 0, W_k >= 0.
///
/// Sign convention: tau here is the negative of the parameter written in
/// the classical form R_mu - gamma (tau + M - M(0))^{-1} gamma^*, so that
/// constant tau >= 0 gives exactly the non-negative canonical extensions,
/// tau = 0 gives Krein's extension and the ideal element gives Friedrichs'.
struct TauParameter {
  enum class Kind { Constant, Rational, Infinite, Mixed };

  Kind kind = Kind::Constant;
  Eigen::Index dim = 0;
  Mat ideal_basis;   // q x q2, orthonormal
  Mat finite_basis;  // q x q1, orthonormal complement of ideal_basis
  Mat tau0;          // q x q
  std::vector<TauPole> poles;

  bool is_constant() const { return poles.empty(); }
  /// Finite part tau(z) on all of C^q (before compression).
  Mat value(cplx z) const;
  /// finite_basis^* tau(z) finite_basis.
  Mat compressed(cplx z) const;

  static TauParameter constant(const Mat& value);
  static TauParameter infinite(Eigen::Index q);
};

const char* to_string(TauParameter::Kind kind) noexcept;

struct ClassReport {
  bool pass = true;
  double min_scaled_kernel = 0.0;      // z^{-1}-weighted Pick kernel
  double min_nevanlinna_kernel = 0.0;  // Pick kernel of the parameter itself
};

/// Standard sample set used by make_tau: points spread over the upper half
/// plane, including near both half-axes.
std::vector<cplx> class_sample_points();

/// Sampled Pick-kernel test on H_1. With F = -tau it forms
///   [ (F(z_i)/z_i - (F(z_j)/z_j)^*) / (z_i - conj(z_j)) ]  and
///   [ (F(z_i) - F(z_j)^*) / (z_i - conj(z_j)) ]
/// and passes iff both minimum eigenvalues are >= -tol * scale.
ClassReport check_stieltjes_class(const TauParameter& tau, const std::vector<cplx>& points,
                                  double tol = 1e-9);
/// Same test for an arbitrary q1 x q1 matrix function.
ClassReport check_stieltjes_class(const std::function<Mat(cplx)>& tau, Eigen::Index q1,
                                  const std::vector<cplx>& points, double tol = 1e-9);

/// Parses and validates a tau document for defect dimension q. Throws
/// SchemaError or NotStieltjesClass.
TauParameter make_tau(const nlohmann::json& spec, Eigen::Index q);
nlohmann::json tau_to_json(const TauParameter& tau);

/// Generalized resolvent
///   R_z = R_z(t_mu) - gamma(z) K(z)^{-1} gamma(conj z)^*,
///   K(z) = H_1-compression of (M(z) - M(0) - tau(z)),
/// with the inverse embedded by zero on H_2. Throws BadPoint on [0, inf),
/// ParameterDegenerate when cond K(z) > 1e12.
Mat krein_resolvent(const GammaWeyl& gw, const TauParameter& tau, cplx z);

/// <xi_k, R_z xi_j> for k, j < N: the matrix Stieltjes transform of the
/// solution selected by tau.
Mat solution_transform(const GammaWeyl& gw, const TauParameter& tau, const HilbertRep& rep, int N, cplx z);

/// Same for the resolvent of a self-adjoint contractive extension t.
Mat contraction_transform(const Mat& t, const HilbertRep& rep, int N, cplx z);

/// The self-adjoint contractive extension whose resolvent the formula
/// produces for a constant (or ideal / mixed-constant) tau, read off at
/// z = -1: t = t_mu + 2 J P_1 (P_1^*(M(0) + tau) P_1)^{-1} P_1^* J^*.
Mat canonical_extension(const GammaWeyl& gw, const TauParameter& tau);

/// Inverse of canonical_extension: the constant parameter of a given
/// extension t (ideal part = kernel of J^*(t - t_mu)J).
TauParameter tau_for_extension(const GammaWeyl& gw, const Mat& t, double rel_tol = 1e-10);

/// k constant parameters c_j I with c_0 = 0 (Krein) and
/// c_j = |M(0)| j / (k - j) for j = 1..k-1.
std::vector<TauParameter> tau_grid(const GammaWeyl& gw, int k);

}  // namespace smp
