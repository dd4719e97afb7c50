#pragma once

#include "stieltjes/hankel.hpp"
#include "stieltjes/solutions.hpp"

#include <json.hpp>

#include <string>

namespace smp::formats {

using nlohmann::json;

/// {"N": int, "moments": [S_0, S_1, ...]}
json moments_to_json(const MomentSequence& seq);

/// {"N": int, "atoms": [{"position": x, "weight": W}], "mass_at_infinity": W?}
json measure_to_json(const SolutionMeasure& meas);
SolutionMeasure measure_from_json(const json& doc);

/// {"samples": [{"z": [re, im], "F": matrix}]}
json samples_to_json(const TransformSamples& samples);

/// Header row then one row per atom: lambda followed by the real and
/// imaginary parts of M(lambda+) in row-major order.
std::string cumulative_csv(const SolutionMeasure& meas);

/// x followed by the entries of Im F(x + i eps).
std::string scan_csv(const std::vector<std::pair<double, Mat>>& scan);

/// z_re, z_im followed by the entries of F(z).
std::string samples_csv(const TransformSamples& samples);

}  // namespace smp::formats
