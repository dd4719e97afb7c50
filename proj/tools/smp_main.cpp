// smp: batch front end for the truncated matrix Stieltjes moment problem.

#include "stieltjes/commands.hpp"
#include "stieltjes/formats.hpp"
#include "stieltjes/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace smp;
using nlohmann::json;

namespace {

cplx parse_point(const std::string& text) {
  std::istringstream is(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(is >> re)) throw Error(ErrorKind::Schema, "bad point \"" + text + "\"");
  if (is >> comma) {
    if (comma != ',' || !(is >> im)) throw Error(ErrorKind::Schema, "bad point \"" + text + "\" (want re,im)");
  }
  std::string rest;
  if (is >> rest) throw Error(ErrorKind::Schema, "bad point \"" + text + "\"");
  return {re, im};
}

MomentSequence read_moments(const std::string& path) {
  std::vector<std::string> warnings;
  MomentSequence seq = load_moments(io::read_json_file(path), 1e-12, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return seq;
}

void emit(const std::string& path, const json& doc) {
  const std::string text = io::canonical_dump(doc);
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_text_file(path, text);
  }
}

int finish(const cmd::Result& r, const std::string& out, const std::string& csv) {
  emit(out, r.output);
  if (!csv.empty() && !r.csv.empty() && r.exit_code == cmd::kOk) io::write_text_file(csv, r.csv);
  if (r.output.contains("error") && r.output["error"].is_object()) {
    std::cerr << "smp: " << r.output["error"].value("kind", "") << ": " << r.output["error"].value("message", "")
              << "\n";
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated matrix Stieltjes moment problem solver"};
  app.require_subcommand(1);

  cmd::RunConfig cfg;
  cfg.seed = cmd::default_seed(0);
  std::string out_path, csv_path;
  std::vector<std::string> z_text;

  auto positive = CLI::PositiveNumber;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", out_path, "Output file (default: stdout)");
    sub->add_option("--psd-tol", cfg.psd_tol, "Relative PSD tolerance")->check(positive);
    sub->add_option("--rank-tol", cfg.rank_tol, "Relative rank cutoff of the Gram matrix")->check(positive);
    sub->add_option("--consistency-tol", cfg.consistency_tol, "Shift consistency tolerance")->check(positive);
    sub->add_option("--det-tol", cfg.det_tol, "Relative determinacy gap tolerance")->check(positive);
    sub->add_option("--rtol", cfg.rtol, "Moment round-trip tolerance")->check(positive);
    sub->add_option("--seed", cfg.seed, "Random seed (env STIELTJES_MP_SEED)");
  };

  std::string moments_path, tau_path, measure_path;

  auto* check = app.add_subcommand("check", "Solvability of a moment sequence");
  check->add_option("moments", moments_path, "moments.json")->required();
  add_common(check);

  auto* det = app.add_subcommand("determinacy", "Determinacy of a solvable sequence");
  det->add_option("moments", moments_path, "moments.json")->required();
  add_common(det);

  cmd::SolveRequest solve_req;
  int tau_grid = 0;
  auto* solve = app.add_subcommand("solve", "Solution measures, one per parameter");
  solve->add_option("moments", moments_path, "moments.json")->required();
  auto* tau_opt = solve->add_option("--tau", tau_path, "Parameter file (object or array of objects)");
  auto* grid_opt = solve->add_option("--tau-grid", tau_grid, "k constant parameters plus Friedrichs")
                       ->check(CLI::PositiveNumber);
  tau_opt->excludes(grid_opt);
  solve->add_option("--csv", csv_path, "Cumulative CSV of the first emitted measure");
  add_common(solve);

  auto* transform = app.add_subcommand("transform", "Sample the Stieltjes transform of a solution");
  transform->add_option("moments", moments_path, "moments.json")->required();
  transform->add_option("--tau", tau_path, "Parameter file (default: Friedrichs)");
  transform->add_option("--z", z_text, "Evaluation points re,im (repeatable)");
  transform->add_option("--csv", csv_path, "Samples CSV");
  add_common(transform);

  PerronOptions perron;
  double scan_eps = 1e-2;
  auto* invert = app.add_subcommand("invert", "Recover atoms from a transform");
  auto* inv_meas = invert->add_option("--measure", measure_path, "Invert the transform of this measure");
  auto* inv_mom = invert->add_option("--moments", moments_path, "Invert the solution transform of these moments");
  inv_meas->excludes(inv_mom);
  invert->add_option("--tau", tau_path, "Parameter file (with --moments)")->needs(inv_mom);
  invert->add_option("--grid-lo", perron.lo, "Grid start");
  invert->add_option("--grid-hi", perron.hi, "Grid end");
  invert->add_option("--grid-points", perron.grid_points, "Grid points")->check(CLI::Range(2, 10000000));
  invert->add_option("--eps", perron.eps_schedule, "Epsilon schedule")->delimiter(',');
  invert->add_option("--atom-tol", perron.atom_tol, "Extrapolation agreement")->check(positive);
  invert->add_option("--scan-eps", scan_eps, "Epsilon of the CSV scan")->check(positive);
  invert->add_option("--csv", csv_path, "Im F scan CSV");
  add_common(invert);

  cmd::GenRequest gen_req;
  std::string truth_path;
  auto* gen = app.add_subcommand("gen", "Generate moments from a discrete measure");
  gen->add_option("--atoms", gen_req.atoms, "pos:w,... (weights w I_N)");
  gen->add_option("--N", gen_req.random.N, "Matrix size")->check(CLI::PositiveNumber);
  gen->add_option("--count", gen_req.random.count, "Number of random atoms")->check(CLI::PositiveNumber);
  gen->add_option("--order", gen_req.order, "Highest moment index m")->check(CLI::NonNegativeNumber);
  gen->add_flag("--normalize", gen_req.random.normalize, "Scale to trace(S_0) = 1");
  gen->add_option("--truth", truth_path, "Ground-truth measure output");
  gen->add_option("--csv", csv_path, "Cumulative CSV of the ground truth");
  add_common(gen);

  int upto = -1;
  auto* verify = app.add_subcommand("verify", "Check a measure against moments");
  verify->add_option("measure", measure_path, "measure.json")->required();
  verify->add_option("moments", moments_path, "moments.json")->required();
  verify->add_option("--upto", upto, "Highest order checked (default: all)");
  verify->add_option("--csv", csv_path, "Cumulative CSV of the measure");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cmd::kUsage;
  }

  try {
    for (const auto& z : z_text) cfg.zs.push_back(parse_point(z));
    std::optional<json> tau;
    if (!tau_path.empty()) tau = io::read_json_file(tau_path);

    if (check->parsed()) return finish(cmd::check(read_moments(moments_path), cfg), out_path, csv_path);
    if (det->parsed()) return finish(cmd::determinacy(read_moments(moments_path), cfg), out_path, csv_path);

    if (solve->parsed()) {
      if (tau_grid > 0) {
        solve_req.tau_grid = tau_grid;
      } else if (tau) {
        if (tau->is_array()) {
          for (const auto& t : *tau) solve_req.taus.push_back(t);
        } else {
          solve_req.taus.push_back(*tau);
        }
      } else {
        solve_req.tau_grid = 3;
      }
      cmd::Result r = cmd::solve(read_moments(moments_path), solve_req, cfg);
      if (r.exit_code == cmd::kOk && !csv_path.empty()) {
        for (const auto& s : r.output["solutions"]) {
          if (s.value("status", "") == "ok") {
            r.csv = formats::cumulative_csv(formats::measure_from_json(s["measure"]));
            break;
          }
        }
      }
      return finish(r, out_path, csv_path);
    }

    if (transform->parsed()) return finish(cmd::transform(read_moments(moments_path), tau, cfg), out_path, csv_path);

    if (invert->parsed()) {
      if (measure_path.empty() && moments_path.empty()) {
        throw Error(ErrorKind::Schema, "invert needs --measure or --moments");
      }
      TransformSampler sampler;
      int N = 1;
      if (!measure_path.empty()) {
        auto meas = std::make_shared<SolutionMeasure>(formats::measure_from_json(io::read_json_file(measure_path)));
        N = meas->N;
        sampler = [meas](cplx z) { return transform_of_measure(*meas, z); };
      } else {
        const MomentSequence seq = read_moments(moments_path);
        N = seq.N;
        sampler = cmd::solution_sampler(seq, tau, cfg);
      }
      return finish(cmd::invert(sampler, N, perron, scan_eps), out_path, csv_path);
    }

    if (gen->parsed()) {
      gen_req.seed = cfg.seed;
      const cmd::Result r = cmd::generate(gen_req);
      if (r.exit_code != cmd::kOk) return finish(r, out_path, "");
      emit(out_path, r.output["moments"]);
      if (!truth_path.empty()) emit(truth_path, r.output["truth"]);
      if (!csv_path.empty()) io::write_text_file(csv_path, r.csv);
      return cmd::kOk;
    }

    if (verify->parsed()) {
      const MomentSequence seq = read_moments(moments_path);
      const SolutionMeasure meas = formats::measure_from_json(io::read_json_file(measure_path));
      return finish(cmd::verify(meas, seq, upto < 0 ? seq.m() : upto, cfg.rtol), out_path, csv_path);
    }
  } catch (const Error& e) {
    return finish({cmd::exit_code_for(e.kind()), cmd::error_json(e), {}}, out_path, "");
  } catch (const std::exception& e) {
    std::cerr << "smp: " << e.what() << "\n";
    return cmd::kInternal;
  }
  return cmd::kUsage;
}
