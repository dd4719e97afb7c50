#pragma once

#include "stieltjes/types.hpp"

#include <json.hpp>

#include <string>

namespace smp::io {

using nlohmann::json;

/// Complex scalars travel as [re, im]; plain numbers are accepted as reals.
json to_json(cplx value);
cplx complex_from_json(const json& j);

/// Row-major nested arrays of [re, im].
json to_json(const Mat& m);

/// Parses a rows x cols matrix; throws Error(Schema) on shape mismatch. A 1x1
/// matrix may also be written as a single row holding one [re, im] pair.
Mat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Canonical text form: sorted keys, numbers with 17 significant digits,
/// two-space indentation. Identical values always give identical bytes.
std::string canonical_dump(const json& j);

}  // namespace smp::io
