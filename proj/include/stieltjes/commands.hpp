#pragma once

#include "stieltjes/extensions.hpp"
#include "stieltjes/generate.hpp"
#include "stieltjes/krein.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smp::cmd {

using nlohmann::json;

enum Exit : int {
  kOk = 0,
  kNegative = 2,
  kMarginal = 3,
  kInconsistent = 4,
  kUsage = 64,
  kInternal = 70,
};

int exit_code_for(ErrorKind kind) noexcept;

struct RunConfig {
  double psd_tol = 1e-10;
  double rank_tol = 1e-10;
  double consistency_tol = 1e-8;
  double det_tol = 1e-9;
  double rtol = 1e-8;
  std::uint64_t seed = 0;
  std::vector<cplx> zs;
};

/// Seed from STIELTJES_MP_SEED when set and parseable, otherwise `fallback`.
std::uint64_t default_seed(std::uint64_t fallback = 0);

struct Result {
  int exit_code = kOk;
  json output;
  /// Optional CSV payload (cumulative, scan or samples, depending on command).
  std::string csv;
};

/// Everything from the moments up to the extended operator.
struct Pipeline {
  MomentSequence seq;
  SolvabilityReport report;
  HilbertRep rep;
  ShiftOperator op;
  Eigen::Index deficiency_index = 0;
  ExtendedOperator ext;
  DeterminacyVerdict verdict;

  int verify_upto() const { return 2 * seq.order(); }
};

Pipeline build_pipeline(const MomentSequence& seq, const RunConfig& cfg);

json error_json(const Error& e);

Result check(const MomentSequence& seq, const RunConfig& cfg);
Result determinacy(const MomentSequence& seq, const RunConfig& cfg);

/// Either explicit parameters or a grid of k constants (plus the Friedrichs
/// element); ignored for determinate data.
struct SolveRequest {
  std::vector<json> taus;
  std::optional<int> tau_grid;
  PerronOptions perron;
  bool auto_grid = true;  // choose perron.hi from the canonical solutions
};

Result solve(const MomentSequence& seq, const SolveRequest& req, const RunConfig& cfg);
Result transform(const MomentSequence& seq, const std::optional<json>& tau, const RunConfig& cfg);
/// z -> F(z) for the solution selected by tau (the unique one when the data
/// are determinate; Friedrichs' when tau is absent).
TransformSampler solution_sampler(const MomentSequence& seq, const std::optional<json>& tau,
                                  const RunConfig& cfg);

/// Default evaluation points when RunConfig::zs is empty.
std::vector<cplx> default_points();

Result invert(const TransformSampler& sampler, int N, const PerronOptions& opts, double scan_eps);
Result verify(const SolutionMeasure& meas, const MomentSequence& seq, int upto, double rtol);

struct GenRequest {
  std::optional<std::string> atoms;  // "pos:w,..." overrides the random draw
  gen::RandomMeasureOptions random;
  int order = 4;
  std::uint64_t seed = 0;
};

/// output = {"moments": moments document, "truth": measure document}.
Result generate(const GenRequest& req);

}  // namespace smp::cmd
