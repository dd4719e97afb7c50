#include "stieltjes/commands.hpp"

#include "stieltjes/formats.hpp"
#include "stieltjes/io.hpp"
#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>

namespace smp::cmd {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Schema:
    case ErrorKind::NotHermitian:
    case ErrorKind::OrderTooHigh:
    case ErrorKind::OrderTooLow:
    case ErrorKind::BadPoint:
      return kUsage;
    case ErrorKind::InconsistentTruncation:
      return kInconsistent;
    case ErrorKind::NotPSD:
    case ErrorKind::NotIndeterminate:
    case ErrorKind::NotStieltjesClass:
    case ErrorKind::CompletionInfeasible:
      return kNegative;
    default:
      return kInternal;
  }
}

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("STIELTJES_MP_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  return (end != nullptr && *end == '\0') ? static_cast<std::uint64_t>(v) : fallback;
}

json error_json(const Error& e) {
  return {{"error", {{"kind", to_string(e.kind()), }, {"message", e.what()}}}};
}

namespace {

template <class Fn>
Result guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return {exit_code_for(e.kind()), error_json(e), {}};
  } catch (const std::exception& e) {
    return {kInternal, {{"error", {{"kind", "Internal"}, {"message", e.what()}}}}, {}};
  }
}

ExtensionTolerances extension_tolerances(const RunConfig& cfg) {
  ExtensionTolerances tol;
  tol.det_rel = cfg.det_tol;
  return tol;
}

json report_json(const SolvabilityReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"gamma_min_eigs", r.gamma_min_eigs},
          {"gamma_tilde_min_eigs", r.gamma_tilde_min_eigs},
          {"psd_tol", r.psd_tol},
          {"scale", r.scale},
          {"construction_order", r.construction_order},
          {"highest_moment", r.highest_moment}};
}

Result not_solvable(const SolvabilityReport& r) {
  return {kNegative, {{"solvability", report_json(r)}, {"error", {{"kind", "NotSolvable"},
          {"message", "the block Hankel conditions fail"}}}}, {}};
}

double max_atom(const SolutionMeasure& m) {
  double out = 0.0;
  for (const auto& a : m.atoms) out = std::max(out, a.position);
  return out;
}

/// Hermitian part of (F - F^*)/2i, minimum eigenvalue.
double min_imag_eig(const Mat& f) {
  return linalg::min_eigenvalue((f - f.adjoint()) / cplx(0.0, 2.0));
}

}  // namespace

std::vector<cplx> default_points() {
  return {cplx(0.0, 1.0), cplx(1.0, 1.0), cplx(-1.0, 1.0), cplx(0.0, 2.0), cplx(3.0, 0.5),
          cplx(-2.0, 3.0), cplx(0.5, 0.1), cplx(10.0, 1.0), cplx(-5.0, 0.2), cplx(-1.0, 0.0)};
}

Pipeline build_pipeline(const MomentSequence& seq, const RunConfig& cfg) {
  Pipeline p;
  p.seq = seq;
  p.report = check_solvable(seq, cfg.psd_tol);
  p.rep = build_space(scalarize(seq), cfg.rank_tol);
  p.op = build_shift(p.rep, seq.N, cfg.consistency_tol);
  p.deficiency_index = defect_subspace(p.op, cplx(-1.0, 0.0)).index;
  const ExtensionTolerances tol = extension_tolerances(cfg);
  const ContractionPicture pic = extremal_extensions(cayley(p.op), tol);
  p.verdict = determinacy(pic, tol);
  p.ext = extend_ext(pic, tol);
  return p;
}

Result check(const MomentSequence& seq, const RunConfig& cfg) {
  return guarded([&]() -> Result {
    const SolvabilityReport r = check_solvable(seq, cfg.psd_tol);
    const int code = r.verdict == Verdict::Solvable ? kOk : r.verdict == Verdict::Marginal ? kMarginal : kNegative;
    return {code, report_json(r), {}};
  });
}

Result determinacy(const MomentSequence& seq, const RunConfig& cfg) {
  return guarded([&]() -> Result {
    const SolvabilityReport r = check_solvable(seq, cfg.psd_tol);
    if (!r.feasible()) return not_solvable(r);
    const Pipeline p = build_pipeline(seq, cfg);
    const json out = {{"determinate", p.verdict.determinate},
                      {"completely_indeterminate", p.verdict.completely_indeterminate},
                      {"upsilon_dim", p.verdict.upsilon_dim},
                      {"defect_dim", p.verdict.defect_dim},
                      {"deficiency_index", p.deficiency_index},
                      {"gap_norm", p.verdict.gap_norm},
                      {"space_dim", p.rep.dim},
                      {"consistency_residual", p.op.consistency_residual},
                      {"solvability", to_string(r.verdict)}};
    return {kOk, out, {}};
  });
}

Result solve(const MomentSequence& seq, const SolveRequest& req, const RunConfig& cfg) {
  return guarded([&]() -> Result {
    const SolvabilityReport r = check_solvable(seq, cfg.psd_tol);
    if (!r.feasible()) return not_solvable(r);
    const Pipeline p = build_pipeline(seq, cfg);
    const int N = seq.N;
    const int upto = p.verify_upto();

    json solutions = json::array();
    int emitted = 0;
    // Every measure goes through the moment gate; failures keep only the
    // diagnostics.
    auto gate = [&](const SolutionMeasure& meas, json entry) {
      const MomentCheck mc = verify_moments(meas, seq, upto, cfg.rtol);
      entry["moment_errors"] = mc.errors;
      if (meas.infinity_overlap > 0.0) entry["infinity_overlap"] = meas.infinity_overlap;
      if (mc.pass) {
        entry["status"] = "ok";
        entry["measure"] = formats::measure_to_json(meas);
        ++emitted;
      } else {
        entry["status"] = entry.contains("transform") ? "transform_only" : "rejected";
        entry["reason"] = "moment S_" + std::to_string(mc.worst_order) + " not reproduced";
      }
      solutions.push_back(std::move(entry));
    };

    if (p.verdict.determinate) {
      gate(spectral_solution(p.ext.base.t_mu(), p.rep, N), {{"method", "unique"}, {"tau", nullptr}});
    } else {
      const GammaWeyl gw = build_gamma_weyl(p.ext, true);
      const Eigen::Index q = gw.defect_dim();

      std::vector<std::optional<TauParameter>> taus;
      std::vector<std::optional<Error>> parse_errors;
      if (req.tau_grid) {
        if (*req.tau_grid < 1) throw Error(ErrorKind::Schema, "--tau-grid needs k >= 1");
        for (auto& t : tau_grid(gw, *req.tau_grid)) {
          taus.emplace_back(std::move(t));
          parse_errors.emplace_back();
        }
        taus.emplace_back(TauParameter::infinite(q));
        parse_errors.emplace_back();
      } else {
        for (const auto& spec : req.taus) {
          try {
            taus.emplace_back(make_tau(spec, q));
            parse_errors.emplace_back();
          } catch (const Error& e) {
            taus.emplace_back();
            parse_errors.emplace_back(e);
          }
        }
      }

      // Inversion grid: generous cover of the canonical solutions' supports.
      PerronOptions perron = req.perron;
      if (req.auto_grid) {
        double top = std::max(max_atom(spectral_solution(gw.t_mu(), p.rep, N)),
                              max_atom(spectral_solution(p.ext.ext.t_M(), p.rep, N)));
        for (const auto& t : taus)
          if (t)
            for (const auto& pole : t->poles) top = std::max(top, pole.p);
        perron.lo = 0.0;
        perron.hi = 2.0 * top + 1.0;
        perron.grid_points = std::max(perron.grid_points, static_cast<int>(std::ceil(perron.hi / 0.005)) + 1);
      }

      for (std::size_t i = 0; i < taus.size(); ++i) {
        json entry = {{"index", i}};
        if (!taus[i]) {
          entry["status"] = "error";
          entry["tau"] = req.taus[i];
          entry.update(error_json(*parse_errors[i]));
          solutions.push_back(std::move(entry));
          continue;
        }
        const TauParameter& tau = *taus[i];
        entry["tau"] = tau_to_json(tau);
        try {
          if (tau.is_constant()) {
            entry["method"] = tau.kind == TauParameter::Kind::Infinite ? "friedrichs" : "canonical";
            gate(spectral_solution(canonical_extension(gw, tau), p.rep, N), entry);
          } else {
            entry["method"] = "inversion";
            auto sampler = [&](cplx z) { return solution_transform(gw, tau, p.rep, N, z); };
            TransformSamples samples;
            for (cplx z : cfg.zs.empty() ? default_points() : cfg.zs) samples.push_back({z, sampler(z)});
            entry["transform"] = formats::samples_to_json(samples)["samples"];
            gate(perron_invert(sampler, N, perron), entry);
          }
        } catch (const Error& e) {
          entry["status"] = "error";
          entry.update(error_json(e));
          solutions.push_back(std::move(entry));
        }
      }
    }

    const json out = {{"determinate", p.verdict.determinate},
                      {"verify_upto", upto},
                      {"rtol", cfg.rtol},
                      {"emitted", emitted},
                      {"solutions", solutions}};
    return {emitted > 0 ? kOk : kInternal, out, {}};
  });
}

namespace {

struct SamplerState {
  Pipeline pipeline;
  std::optional<GammaWeyl> gw;
  std::optional<TauParameter> tau;
};

}  // namespace

TransformSampler solution_sampler(const MomentSequence& seq, const std::optional<json>& tau,
                                  const RunConfig& cfg) {
  const SolvabilityReport r = check_solvable(seq, cfg.psd_tol);
  if (!r.feasible()) throw Error(ErrorKind::NotPSD, "the block Hankel conditions fail");
  auto state = std::make_shared<SamplerState>();
  state->pipeline = build_pipeline(seq, cfg);
  const Pipeline& p = state->pipeline;
  const int N = seq.N;
  if (p.verdict.determinate || !tau) {
    const Mat t = p.ext.base.t_mu();
    return [state, t, N](cplx z) { return contraction_transform(t, state->pipeline.rep, N, z); };
  }
  state->gw = build_gamma_weyl(p.ext, true);
  state->tau = make_tau(*tau, state->gw->defect_dim());
  return [state, N](cplx z) { return solution_transform(*state->gw, *state->tau, state->pipeline.rep, N, z); };
}

Result transform(const MomentSequence& seq, const std::optional<json>& tau, const RunConfig& cfg) {
  return guarded([&]() -> Result {
    const SolvabilityReport r = check_solvable(seq, cfg.psd_tol);
    if (!r.feasible()) return not_solvable(r);
    const TransformSampler sampler = solution_sampler(seq, tau, cfg);
    TransformSamples samples;
    double symmetry = 0.0, min_imag = 0.0, min_imag_z = 0.0;
    bool first = true;
    for (cplx z : cfg.zs.empty() ? default_points() : cfg.zs) {
      const Mat F = sampler(z);
      samples.push_back({z, F});
      if (z.imag() == 0.0) continue;
      const cplx zu = z.imag() > 0.0 ? z : std::conj(z);
      const Mat Fu = z.imag() > 0.0 ? F : sampler(zu);
      symmetry = std::max(symmetry, (sampler(std::conj(zu)) - Fu.adjoint()).norm());
      const double a = min_imag_eig(Fu), b = min_imag_eig(zu * Fu);
      min_imag = first ? a : std::min(min_imag, a);
      min_imag_z = first ? b : std::min(min_imag_z, b);
      first = false;
    }
    json out = formats::samples_to_json(samples);
    out["checks"] = {{"max_symmetry_error", symmetry},
                     {"min_imag_eig", min_imag},
                     {"min_imag_zF_eig", min_imag_z}};
    return {kOk, out, formats::samples_csv(samples)};
  });
}

Result invert(const TransformSampler& sampler, int N, const PerronOptions& opts, double scan_eps) {
  return guarded([&]() -> Result {
    const SolutionMeasure meas = perron_invert(sampler, N, opts);
    return {kOk, formats::measure_to_json(meas),
            formats::scan_csv(imag_scan(sampler, opts.lo, opts.hi, opts.grid_points, scan_eps))};
  });
}

Result verify(const SolutionMeasure& meas, const MomentSequence& seq, int upto, double rtol) {
  return guarded([&]() -> Result {
    if (meas.N != seq.N) throw Error(ErrorKind::Schema, "measure and moments have different N");
    const MomentCheck mc = verify_moments(meas, seq, upto, rtol);
    const json out = {{"pass", mc.pass},
                      {"errors", mc.errors},
                      {"rtol", rtol},
                      {"upto", upto},
                      {"worst_order", mc.worst_order}};
    return {mc.pass ? kOk : kNegative, out, formats::cumulative_csv(meas)};
  });
}

Result generate(const GenRequest& req) {
  return guarded([&]() -> Result {
    const SolutionMeasure meas = req.atoms ? gen::parse_atoms(*req.atoms, req.random.N)
                                           : gen::random_measure(req.random, req.seed);
    const MomentSequence seq = gen::moments_for(meas, req.order);
    return {kOk, {{"moments", formats::moments_to_json(seq)}, {"truth", formats::measure_to_json(meas)}},
            formats::cumulative_csv(meas)};
  });
}

}  // namespace smp::cmd
