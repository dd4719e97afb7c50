#include "helpers.hpp"

#include "stieltjes/generate.hpp"
#include "stieltjes/shiftop.hpp"

#include <doctest.h>

using namespace smp;
using testing::scalar_seq;

namespace {

ShiftOperator shift_of(const MomentSequence& seq) {
  return build_shift(build_space(scalarize(seq)), seq.N);
}

}  // namespace

TEST_CASE("build_shift on small instances") {
  SUBCASE("delta at 1: A is the identity") {
    const ShiftOperator op = shift_of(scalar_seq({1, 1, 1}));
    REQUIRE(op.dim() == 1);
    CHECK(std::abs(op.matrix(0, 0) - 1.0) < 1e-12);
    CHECK(op.consistency_residual < 1e-12);
  }
  SUBCASE("Dirac at 0: zero shift") {
    const ShiftOperator op = shift_of(scalar_seq({1, 0, 0}));
    REQUIRE(op.dim() == 1);
    CHECK(std::abs(op.matrix(0, 0)) < 1e-12);
    CHECK(std::abs(op.rep.xi(1)(0)) < 1e-14);
    CHECK(op.consistency_residual == 0.0);
  }
  SUBCASE("two atoms: A xi_0 = xi_1") {
    const ShiftOperator op = shift_of(scalar_seq({2, 3, 5}));
    REQUIRE(op.dim() == 2);
    CHECK(op.domain_dim() == 1);
    CHECK((op.matrix * op.rep.xi(0) - op.rep.xi(1)).norm() < 1e-12);
  }
}

TEST_CASE("build_shift errors") {
  try {
    shift_of(scalar_seq({1, 2}));
    FAIL("expected OrderTooLow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OrderTooLow);
  }
  // gamma = [[1,1,1],[1,1,1],[1,1,2]] is PSD but xi_0 = xi_1 while xi_1 != xi_2:
  // the shift cannot be well defined.
  try {
    shift_of(scalar_seq({1, 1, 1, 1, 2}));
    FAIL("expected InconsistentTruncation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentTruncation);
  }
}

TEST_CASE("check_nonneg_hermitian") {
  const NonnegReport delta = check_nonneg_hermitian(shift_of(scalar_seq({1, 1, 1})), 50, 3);
  CHECK(delta.min_rayleigh == doctest::Approx(1.0));

  const NonnegReport two = check_nonneg_hermitian(shift_of(scalar_seq({2, 3, 5})), 50, 3);
  CHECK(two.min_rayleigh >= 1.0 - 1e-9);
  CHECK(two.max_asymmetry < 1e-12);

  ShiftOperator neg;
  neg.N = 1;
  neg.domain_basis = Mat::Identity(1, 1);
  neg.matrix = -Mat::Identity(1, 1);
  try {
    check_nonneg_hermitian(neg, 5, 1);
    FAIL("expected PropertyViolated");
  } catch (const PropertyViolation& e) {
    CHECK(e.kind() == ErrorKind::PropertyViolated);
    CHECK(e.witness().size() == 1);
  }

  // same seed, same samples
  const ShiftOperator op = shift_of(testing::diag_seq(4));
  CHECK(check_nonneg_hermitian(op, 20, 9).min_rayleigh == check_nonneg_hermitian(op, 20, 9).min_rayleigh);
}

TEST_CASE("defect_subspace") {
  CHECK(defect_subspace(shift_of(scalar_seq({1, 1, 1})), cplx(0, 1)).index == 0);

  const ShiftOperator two = shift_of(scalar_seq({2, 3, 5}));
  const DefectData d = defect_subspace(two, cplx(-1, 0));
  CHECK(d.index == 1);
  CHECK((d.range_basis.adjoint() * d.defect_basis).cwiseAbs().maxCoeff() <= 1e-10);

  for (cplx z : {cplx(0, 0), cplx(2, 0)}) {
    try {
      defect_subspace(two, z);
      FAIL("expected BadPoint");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadPoint);
    }
  }
}

TEST_CASE("deficiency properties on generated instances") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    gen::RandomMeasureOptions opts;
    opts.N = 1 + static_cast<int>(seed % 3);
    opts.count = 1 + static_cast<int>(seed % 4);
    opts.normalize = true;
    const SolutionMeasure truth = gen::random_measure(opts, seed);
    const MomentSequence seq = gen::moments_for(truth, 2 + static_cast<int>(seed % 3));
    const ShiftOperator op = shift_of(seq);
    CAPTURE(seed);

    // shift identity, recomputed independently
    for (Eigen::Index k = 0; k < op.domain_count(); ++k) {
      CHECK((op.matrix * op.rep.xi(k) - op.rep.xi(k + seq.N)).norm() <= 1e-8 * std::max(1.0, seq.scale()));
    }

    const Eigen::Index ref = defect_subspace(op, cplx(0, 1)).index;
    CHECK(ref <= seq.N);
    for (cplx z : {cplx(0, -1), cplx(-1, 0), cplx(-2, 3), cplx(-2, -3)}) {
      const DefectData d = defect_subspace(op, z);
      CHECK(d.index == ref);
      // xi_k = P_{H_z} xi_k + P_{H_0} xi_k for k < N
      for (int k = 0; k < seq.N; ++k) {
        const Vec x = op.rep.xi(k);
        const Vec p1 = d.range_basis * (d.range_basis.adjoint() * x);
        const Vec p2 = d.defect_basis * (d.defect_basis.adjoint() * x);
        CHECK((p1 + p2 - x).norm() <= 1e-9 * std::max(1.0, x.norm()));
      }
    }
    check_nonneg_hermitian(op, 20, seed);
  }
}
