#include "helpers.hpp"

#include "stieltjes/commands.hpp"
#include "stieltjes/formats.hpp"
#include "stieltjes/io.hpp"

#include <doctest.h>

using namespace smp;
using nlohmann::json;
using testing::scalar_seq;

namespace {

const cmd::RunConfig kCfg{};

MomentSequence from_atoms(const std::string& atoms, int order) {
  cmd::GenRequest req;
  req.atoms = atoms;
  req.order = order;
  const cmd::Result r = cmd::generate(req);
  REQUIRE(r.exit_code == cmd::kOk);
  return load_moments(r.output["moments"]);
}

}  // namespace

TEST_CASE("gen from an atom list") {
  const MomentSequence seq = from_atoms("1:1,2:1", 5);
  const double expected[] = {2, 3, 5, 9, 17, 33};
  for (int p = 0; p <= 5; ++p) CHECK(seq.moments[p](0, 0) == cplx(expected[p]));

  cmd::GenRequest bad;
  bad.atoms = "1:1,oops";
  CHECK(cmd::generate(bad).exit_code == cmd::kUsage);
  bad.atoms = "-1:1";
  CHECK(cmd::generate(bad).exit_code == cmd::kUsage);
}

TEST_CASE("gen is deterministic and produces solvable data") {
  cmd::GenRequest req;
  req.seed = 7;
  req.random.N = 2;
  req.random.count = 2;
  req.order = 4;
  const std::string a = io::canonical_dump(cmd::generate(req).output);
  const std::string b = io::canonical_dump(cmd::generate(req).output);
  CHECK(a == b);
  req.seed = 8;
  CHECK(io::canonical_dump(cmd::generate(req).output) != a);

  req.seed = 7;
  const MomentSequence seq = load_moments(cmd::generate(req).output["moments"]);
  CHECK(seq.N == 2);
  for (const Mat& s : seq.moments) CHECK((s - s.adjoint()).norm() < 1e-14);
  const int code = cmd::check(seq, kCfg).exit_code;
  CHECK((code == cmd::kOk || code == cmd::kMarginal));
}

TEST_CASE("canonical JSON") {
  const json doc = {{"b", -0.0}, {"a", {1.0, 0.1}}, {"c", std::nan("")}};
  const std::string text = io::canonical_dump(doc);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("-0") == std::string::npos);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("null") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("measure documents round trip") {
  SolutionMeasure m;
  m.N = 2;
  m.atoms.push_back({0.5, testing::real_mat({{1, 0}, {0, 2}})});
  m.atoms.push_back({3.0, Mat::Identity(2, 2)});
  m.mass_at_infinity = Mat::Identity(2, 2);
  const SolutionMeasure back = formats::measure_from_json(json::parse(io::canonical_dump(formats::measure_to_json(m))));
  REQUIRE(back.atoms.size() == 2);
  CHECK(back.atoms[1].position == 3.0);
  CHECK(back.atoms[0].weight == m.atoms[0].weight);
  CHECK(back.mass_at_infinity.has_value());

  CHECK_THROWS_AS(formats::measure_from_json(json::parse(R"({"N":1,"atoms":[{"position":1}]})")), Error);

  const std::string csv = formats::cumulative_csv(m);
  CHECK(csv.rfind("lambda,M_0_0_re,M_0_0_im", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("exit codes") {
  CHECK(cmd::exit_code_for(ErrorKind::Schema) == 64);
  CHECK(cmd::exit_code_for(ErrorKind::InconsistentTruncation) == 4);
  CHECK(cmd::exit_code_for(ErrorKind::NoConvergence) == 70);

  CHECK(cmd::check(from_atoms("1:1,2:1", 2), kCfg).exit_code == cmd::kOk);
  CHECK(cmd::check(scalar_seq({1, -1}), kCfg).exit_code == cmd::kNegative);
  CHECK(cmd::check(scalar_seq({1, 0, 0}), kCfg).exit_code == cmd::kMarginal);
  CHECK(cmd::determinacy(scalar_seq({1, 1, 1, 1, 2}), kCfg).exit_code == cmd::kInconsistent);
  CHECK(cmd::determinacy(scalar_seq({1, -1}), kCfg).exit_code == cmd::kNegative);
  CHECK(cmd::determinacy(scalar_seq({1, 2}), kCfg).exit_code == cmd::kUsage);
}

TEST_CASE("determinacy command") {
  const json delta = cmd::determinacy(scalar_seq({1, 1, 1}), kCfg).output;
  CHECK(delta["determinate"] == true);

  const json two = cmd::determinacy(from_atoms("1:1,2:1", 2), kCfg).output;
  CHECK(two["determinate"] == false);
  CHECK(two["completely_indeterminate"] == true);
  CHECK(two["upsilon_dim"] == 0);
  CHECK(two["deficiency_index"] == 1);

  CHECK(cmd::determinacy(scalar_seq({1, 0, 0}), kCfg).output["determinate"] == true);
}

TEST_CASE("solve command") {
  SUBCASE("determinate: the unique measure") {
    const cmd::Result r = cmd::solve(scalar_seq({1, 1, 1}), {}, kCfg);
    REQUIRE(r.exit_code == cmd::kOk);
    REQUIRE(r.output["solutions"].size() == 1);
    const SolutionMeasure m = formats::measure_from_json(r.output["solutions"][0]["measure"]);
    REQUIRE(m.atoms.size() == 1);
    CHECK(m.atoms[0].position == doctest::Approx(1.0));
    CHECK(m.atoms[0].weight(0, 0).real() == doctest::Approx(1.0));
  }
  SUBCASE("two atoms, grid of three") {
    const MomentSequence seq = from_atoms("1:1,2:1", 2);
    cmd::SolveRequest req;
    req.tau_grid = 3;
    const cmd::Result r = cmd::solve(seq, req, kCfg);
    REQUIRE(r.exit_code == cmd::kOk);
    std::vector<SolutionMeasure> ok;
    for (const auto& s : r.output["solutions"]) {
      if (s["status"] == "ok") {
        ok.push_back(formats::measure_from_json(s["measure"]));
        // independent re-check by direct summation
        double s0 = 0, s1 = 0, s2 = 0;
        for (const auto& a : ok.back().atoms) {
          const double w = a.weight(0, 0).real(), x = a.position;
          s0 += w;
          s1 += w * x;
          s2 += w * x * x;
        }
        CHECK(std::abs(s0 - 2) <= 1e-8 * 2);
        CHECK(std::abs(s1 - 3) <= 1e-8 * 3);
        CHECK(std::abs(s2 - 5) <= 1e-8 * 5);
      }
    }
    REQUIRE(ok.size() == 3);
    for (std::size_t a = 0; a < ok.size(); ++a)
      for (std::size_t b = a + 1; b < ok.size(); ++b) CHECK(measure_distance(ok[a], ok[b], 4) >= 1e-6);
  }
  SUBCASE("two atoms, infinite parameter") {
    cmd::SolveRequest req;
    req.taus.push_back(json{{"type", "infinite"}});
    const cmd::Result r = cmd::solve(from_atoms("1:1,2:1", 2), req, kCfg);
    const json& s = r.output["solutions"][0];
    CHECK(s["method"] == "friedrichs");
    // The Friedrichs solution carries mass at infinity and misses S_2: it is
    // reported but not emitted.
    CHECK(s["status"] == "rejected");
    CHECK(s["infinity_overlap"].get<double>() > 0.0);
    CHECK_FALSE(s.contains("measure"));
    CHECK(r.exit_code == cmd::kInternal);
  }
  SUBCASE("per-parameter errors do not abort the batch") {
    cmd::SolveRequest req;
    req.taus.push_back(json::parse(R"({"type":"constant","matrix":[[-1]]})"));
    req.taus.push_back(json::parse(R"({"type":"constant","matrix":[[0.5]]})"));
    req.taus.push_back(json::parse(R"({"type":"rational","tau0":[[0.5]],"poles":[{"p":3,"W":[[1]]}]})"));
    const cmd::Result r = cmd::solve(from_atoms("1:1,2:1", 2), req, kCfg);
    CHECK(r.exit_code == cmd::kOk);
    const json& sols = r.output["solutions"];
    REQUIRE(sols.size() == 3);
    CHECK(sols[0]["status"] == "error");
    CHECK(sols[0]["error"]["kind"] == "NotStieltjesClass");
    CHECK(sols[1]["status"] == "ok");
    CHECK(sols[2]["method"] == "inversion");
    CHECK(sols[2].contains("transform"));
    if (sols[2]["status"] == "ok") CHECK(sols[2]["measure"]["approximate"] == true);
  }
}

TEST_CASE("transform command") {
  cmd::RunConfig cfg;
  cfg.zs = {cplx(0, 1), cplx(-2, 0), cplx(3, 1)};
  const cmd::Result r = cmd::transform(scalar_seq({1, 1, 1}), std::nullopt, cfg);
  REQUIRE(r.exit_code == cmd::kOk);
  for (const auto& s : r.output["samples"]) {
    const cplx z = io::complex_from_json(s["z"]);
    CHECK(std::abs(io::matrix_from_json(s["F"], 1, 1)(0, 0) - 1.0 / (1.0 - z)) < 1e-12);
  }
  CHECK(r.output["checks"]["min_imag_eig"].get<double>() >= -1e-9);
  CHECK(r.csv.rfind("z_re,z_im,F_0_0_re", 0) == 0);

  cfg.zs = {cplx(1, 0)};
  CHECK(cmd::transform(scalar_seq({1, 1, 1}), std::nullopt, cfg).exit_code == cmd::kUsage);
}

TEST_CASE("verify and invert commands") {
  SolutionMeasure m;
  m.N = 1;
  m.atoms.push_back({1.0, Mat::Constant(1, 1, 1.0)});
  m.atoms.push_back({2.0, Mat::Constant(1, 1, 1.0)});
  const MomentSequence seq = from_atoms("1:1,2:1", 4);
  CHECK(cmd::verify(m, seq, 4, 1e-8).exit_code == cmd::kOk);
  m.atoms[0].weight(0, 0) += 1e-3;
  const cmd::Result bad = cmd::verify(m, seq, 4, 1e-8);
  CHECK(bad.exit_code == cmd::kNegative);
  CHECK(bad.output["pass"] == false);

  m.atoms[0].weight(0, 0) = 1.0;
  const cmd::Result inv = cmd::invert([&](cplx z) { return transform_of_measure(m, z); }, 1, PerronOptions{}, 1e-2);
  REQUIRE(inv.exit_code == cmd::kOk);
  const SolutionMeasure got = formats::measure_from_json(inv.output);
  REQUIRE(got.atoms.size() == 2);
  CHECK(std::abs(got.atoms[1].position - 2.0) < 1e-4);
  CHECK(inv.csv.rfind("x,ImF_0_0_re", 0) == 0);
}
