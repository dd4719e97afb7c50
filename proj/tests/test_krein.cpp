#include "helpers.hpp"

#include "stieltjes/generate.hpp"
#include "stieltjes/krein.hpp"
#include "stieltjes/linalg.hpp"

#include <doctest.h>

using namespace smp;
using nlohmann::json;
using testing::scalar_seq;

namespace {

struct Setup {
  MomentSequence seq;
  ShiftOperator op;
  ExtendedOperator ext;
};

Setup setup(const MomentSequence& seq) {
  Setup s{seq, build_shift(build_space(scalarize(seq)), seq.N), {}};
  s.ext = extend_ext(extremal_extensions(cayley(s.op)));
  return s;
}

/// Two atoms per direction with N = 2: defect dimension 2.
MomentSequence two_by_two() {
  gen::RandomMeasureOptions opts;
  opts.N = 2;
  opts.count = 2;
  opts.normalize = true;
  return gen::moments_for(gen::random_measure(opts, 42), 2);
}

double min_eig(const Mat& m) { return linalg::min_eigenvalue(m); }

Mat imag_part(const Mat& f) { return (f - f.adjoint()) / cplx(0.0, 2.0); }

const std::vector<cplx> kZs = {cplx(0, 1), cplx(-1, 1), cplx(0, 2), cplx(3, 0.5), cplx(-4, -2)};

}  // namespace

TEST_CASE("Weyl function of two-atom data") {
  const Setup s = setup(scalar_seq({2, 3, 5}));
  const GammaWeyl gw = build_gamma_weyl(s.ext);
  REQUIRE(gw.defect_dim() == 1);
  CHECK((gw.J().adjoint() * gw.J() - Mat::Identity(1, 1)).norm() < 1e-12);
  CHECK(gw.m0_finite());

  // strictly increasing on (-inf, 0)
  double prev = gw.weyl(-20.0)(0, 0).real();
  for (double x = -19.0; x < 0.0; x += 0.25) {
    const double v = gw.weyl(x)(0, 0).real();
    CHECK(v > prev);
    prev = v;
  }
  // M(0) as the limit from the left
  CHECK(std::abs(gw.weyl(-1e-9)(0, 0) - gw.m0()(0, 0)) < 1e-6);
  CHECK(std::abs(gw.weyl(-1.0)(0, 0)) < 1e-14);

  // M(0) = 2 (x_max - x_min)^{-1}
  const auto& ex = s.ext.ext.extremal.value();
  CHECK((gw.m0() - 2.0 * (ex.x_max - ex.x_min).inverse()).norm() < 1e-9);

  // symmetry
  CHECK((gw.weyl(cplx(0, 1)).adjoint() - gw.weyl(cplx(0, -1))).norm() < 1e-10);
}

TEST_CASE("gamma field and Nevanlinna property") {
  for (const MomentSequence& seq : {scalar_seq({2, 3, 5}), two_by_two()}) {
    const Setup s = setup(seq);
    const GammaWeyl gw = build_gamma_weyl(s.ext);
    for (cplx z : kZs) {
      CAPTURE(z);
      // gamma(z) is orthogonal to (A - conj z) D(A)
      const DefectData dz = defect_subspace(s.op, std::conj(z));
      CHECK((dz.range_basis.adjoint() * gw.gamma(z)).norm() <= 1e-8);
      const Mat m = gw.weyl(z);
      CHECK((m.adjoint() - gw.weyl(std::conj(z))).norm() < 1e-10);
      CHECK(min_eig(imag_part(m) / z.imag()) >= -1e-9);
    }
  }
}

TEST_CASE("build_gamma_weyl needs an indeterminate problem") {
  try {
    build_gamma_weyl(setup(scalar_seq({1, 1, 1})).ext);
    FAIL("expected NotIndeterminate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotIndeterminate);
  }
}

TEST_CASE("make_tau") {
  const TauParameter inf = make_tau(json{{"type", "infinite"}}, 1);
  CHECK(inf.kind == TauParameter::Kind::Infinite);
  CHECK(inf.finite_basis.cols() == 0);

  const TauParameter one = make_tau(json::parse(R"({"type":"constant","matrix":[[1]]})"), 1);
  CHECK(one.kind == TauParameter::Kind::Constant);
  CHECK(std::abs(one.value(cplx(0, 1))(0, 0) - 1.0) < 1e-15);

  const TauParameter rat =
      make_tau(json::parse(R"({"type":"rational","tau0":[[0]],"poles":[{"p":1,"W":[[2]]}]})"), 1);
  // 2 z / (z - 1) at z = -2
  CHECK(std::abs(rat.value(-2.0)(0, 0) - 4.0 / 3.0) < 1e-14);

  // Poles on the negative half-line are not in the class.
  for (const char* text : {R"({"type":"rational","tau0":[[0]],"poles":[{"p":-1,"W":[[2]]}]})",
                           R"({"type":"rational","tau0":[[0]],"poles":[{"p":1,"W":[[-2]]}]})",
                           R"({"type":"constant","matrix":[[-1]]})"}) {
    CAPTURE(text);
    try {
      make_tau(json::parse(text), 1);
      FAIL("expected NotStieltjesClass");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotStieltjesClass);
    }
  }
  for (std::string text : {R"({"type":"weird"})", R"({"matrix":[[1]]})", R"({"type":"constant"})",
                           R"({"type":"constant","matrix":[[[1,0],[2,0]]]})", R"({"type":"rational","tau0":[[0]]})"}) {
    CAPTURE(text);
    try {
      make_tau(json::parse(text), 1);
      FAIL("expected Schema");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Schema);
    }
  }

  const TauParameter mixed = make_tau(
      json::parse(R"({"type":"mixed","ideal":[[[1,0],[1,0]]],"finite":{"type":"constant","matrix":[[1,0],[0,1]]}})"),
      2);
  CHECK(mixed.ideal_basis.cols() == 1);
  CHECK(mixed.finite_basis.cols() == 1);
  CHECK((mixed.ideal_basis.adjoint() * mixed.finite_basis).norm() < 1e-14);
  // round trip through JSON
  const TauParameter again = make_tau(tau_to_json(mixed), 2);
  CHECK((again.ideal_basis * again.ideal_basis.adjoint() - mixed.ideal_basis * mixed.ideal_basis.adjoint()).norm() <
        1e-14);
}

TEST_CASE("check_stieltjes_class") {
  const std::vector<cplx> pts = {cplx(0, 1), cplx(0, 2), cplx(1, 1)};
  CHECK(check_stieltjes_class(TauParameter::constant(Mat::Identity(1, 1)), pts).pass);
  CHECK(check_stieltjes_class(TauParameter::infinite(2), pts).pass);

  const ClassReport z = check_stieltjes_class([](cplx w) { return Mat::Constant(1, 1, w); }, 1, {cplx(0, 1), cplx(0, 2)});
  CHECK_FALSE(z.pass);
  CHECK(z.min_nevanlinna_kernel < -0.5);

  TauParameter rat = TauParameter::constant(Mat::Identity(2, 2));
  rat.kind = TauParameter::Kind::Rational;
  rat.poles.push_back({0.5, Mat::Identity(2, 2)});
  rat.poles.push_back({4.0, Mat::Ones(2, 2)});
  CHECK(check_stieltjes_class(rat, class_sample_points()).pass);

  CHECK_THROWS_AS(check_stieltjes_class(rat, {cplx(1, -1)}), Error);
}

TEST_CASE("krein_resolvent against canonical extensions") {
  for (const MomentSequence& seq : {scalar_seq({2, 3, 5}), two_by_two()}) {
    const Setup s = setup(seq);
    const GammaWeyl gw = build_gamma_weyl(s.ext);
    const Eigen::Index q = gw.defect_dim();
    const ContractionPicture& pic = s.ext.ext;

    // Friedrichs
    for (cplx z : kZs) {
      CHECK((krein_resolvent(gw, TauParameter::infinite(q), z) - resolvent_from_contraction(gw.t_mu(), z)).norm() <
            1e-12);
    }
    // Krein
    CHECK((canonical_extension(gw, TauParameter::constant(Mat::Zero(q, q))) - pic.t_M()).norm() < 1e-8);

    for (double c : {0.0, 0.1, 1.0, 7.5}) {
      const TauParameter tau = TauParameter::constant(c * Mat::Identity(q, q));
      const Mat t = canonical_extension(gw, tau);
      const ExtensionCheck chk = check_extension(pic, t);
      CHECK(chk.extension_error < 1e-9);
      CHECK(chk.contraction_margin > -1e-10);
      CHECK(min_eig(t - pic.t_mu()) >= -1e-10);
      CHECK(min_eig(pic.t_M() - t) >= -1e-10);
      for (cplx z : kZs) {
        CAPTURE(c);
        CAPTURE(z);
        const Mat r = krein_resolvent(gw, tau, z);
        CHECK((r - resolvent_from_contraction(t, z)).norm() < 1e-8);
        CHECK((r.adjoint() - krein_resolvent(gw, tau, std::conj(z))).norm() < 1e-10);
      }
      // canonical resolvents satisfy the resolvent identity
      const cplx z(0, 1), w(-2, 0.5);
      const Mat rz = krein_resolvent(gw, tau, z), rw = krein_resolvent(gw, tau, w);
      CHECK((rz - rw - (z - w) * rz * rw).norm() < 1e-8);

      // and the parameter is recovered from the extension
      const TauParameter back = tau_for_extension(gw, t);
      CHECK(back.ideal_basis.cols() == 0);
      CHECK((back.tau0 - tau.tau0).norm() < 1e-7 * std::max(1.0, c));
    }
    CHECK(tau_for_extension(gw, gw.t_mu()).ideal_basis.cols() == q);
  }
}

TEST_CASE("mixed parameters") {
  const Setup s = setup(two_by_two());
  const GammaWeyl gw = build_gamma_weyl(s.ext);
  REQUIRE(gw.defect_dim() == 2);
  const TauParameter tau = make_tau(
      json::parse(R"({"type":"mixed","ideal":[[[1,0],[0,0]]],"finite":{"type":"constant","matrix":[[0.5,0],[0,0.5]]}})"),
      2);
  const Mat t = canonical_extension(gw, tau);
  CHECK(check_extension(s.ext.ext, t).extension_error < 1e-9);
  for (cplx z : kZs) CHECK((krein_resolvent(gw, tau, z) - resolvent_from_contraction(t, z)).norm() < 1e-8);
}

TEST_CASE("solution transforms") {
  SUBCASE("delta at 1") {
    const Setup s = setup(scalar_seq({1, 1, 1}));
    for (cplx z : kZs) {
      CHECK(std::abs(contraction_transform(s.ext.base.t_mu(), s.op.rep, 1, z)(0, 0) - 1.0 / (1.0 - z)) < 1e-12);
    }
  }
  SUBCASE("Dirac at 0") {
    const Setup s = setup(scalar_seq({1, 0, 0}));
    for (cplx z : kZs) {
      CHECK(std::abs(contraction_transform(s.ext.base.t_mu(), s.op.rep, 1, z)(0, 0) + 1.0 / z) < 1e-12);
    }
  }
  SUBCASE("rational parameter: Herglotz, Stieltjes and symmetry") {
    const Setup s = setup(scalar_seq({2, 3, 5}));
    const GammaWeyl gw = build_gamma_weyl(s.ext);
    const TauParameter tau =
        make_tau(json::parse(R"({"type":"rational","tau0":[[0.5]],"poles":[{"p":3,"W":[[1]]}]})"), 1);
    for (cplx z : class_sample_points()) {
      const Mat f = solution_transform(gw, tau, s.op.rep, 1, z);
      CHECK(min_eig(imag_part(f)) >= -1e-9);
      CHECK(min_eig(imag_part(z * f)) >= -1e-9);
      CHECK((f.adjoint() - solution_transform(gw, tau, s.op.rep, 1, std::conj(z))).norm() < 1e-10);
    }
  }
  SUBCASE("constant parameter matches the transform of its measure") {
    const Setup s = setup(two_by_two());
    const GammaWeyl gw = build_gamma_weyl(s.ext);
    const TauParameter tau = TauParameter::constant(0.3 * Mat::Identity(2, 2));
    const SolutionMeasure m = spectral_solution(canonical_extension(gw, tau), s.op.rep, 2);
    for (cplx z : kZs) {
      CHECK((transform_of_measure(m, z) - solution_transform(gw, tau, s.op.rep, 2, z)).norm() < 1e-8);
    }
  }
}

TEST_CASE("distinct constants give distinct solutions") {
  const Setup s = setup(scalar_seq({2, 3, 5}));
  const GammaWeyl gw = build_gamma_weyl(s.ext);
  std::vector<SolutionMeasure> sols;
  for (const auto& tau : tau_grid(gw, 4)) {
    sols.push_back(spectral_solution(canonical_extension(gw, tau), s.op.rep, 1));
    CHECK(verify_moments(sols.back(), s.seq, 2, 1e-8).pass);
  }
  for (std::size_t a = 0; a < sols.size(); ++a)
    for (std::size_t b = a + 1; b < sols.size(); ++b) CHECK(measure_distance(sols[a], sols[b], 4) >= 1e-6);
}
