#include "stieltjes/formats.hpp"

#include "stieltjes/io.hpp"
#include "stieltjes/linalg.hpp"

#include <cstdio>
#include <sstream>

namespace smp::formats {

json moments_to_json(const MomentSequence& seq) {
  json moments = json::array();
  for (const auto& S : seq.moments) moments.push_back(io::to_json(S));
  return {{"N", seq.N}, {"moments", moments}};
}

json measure_to_json(const SolutionMeasure& meas) {
  json atoms = json::array();
  for (const auto& atom : meas.atoms) {
    atoms.push_back({{"position", atom.position}, {"weight", io::to_json(atom.weight)}});
  }
  json out = {{"N", meas.N}, {"atoms", atoms}};
  if (meas.mass_at_infinity) out["mass_at_infinity"] = io::to_json(*meas.mass_at_infinity);
  if (meas.approximate) out["approximate"] = true;
  return out;
}

SolutionMeasure measure_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("N") || !doc["N"].is_number_integer()) {
    throw Error(ErrorKind::Schema, "measure document needs an integer \"N\"");
  }
  if (!doc.contains("atoms") || !doc["atoms"].is_array()) {
    throw Error(ErrorKind::Schema, "measure document needs an \"atoms\" array");
  }
  SolutionMeasure meas;
  meas.N = doc["N"].get<int>();
  if (meas.N < 1) throw Error(ErrorKind::Schema, "N must be positive");
  for (const auto& a : doc["atoms"]) {
    if (!a.is_object() || !a.contains("position") || !a["position"].is_number() || !a.contains("weight")) {
      throw Error(ErrorKind::Schema, "each atom needs \"position\" and \"weight\"");
    }
    meas.atoms.push_back({a["position"].get<double>(), io::matrix_from_json(a["weight"], meas.N, meas.N)});
  }
  if (doc.contains("mass_at_infinity") && !doc["mass_at_infinity"].is_null()) {
    meas.mass_at_infinity = io::matrix_from_json(doc["mass_at_infinity"], meas.N, meas.N);
  }
  meas.approximate = doc.value("approximate", false);
  meas.canonicalize();
  return meas;
}

json samples_to_json(const TransformSamples& samples) {
  json list = json::array();
  for (const auto& s : samples) list.push_back({{"z", io::to_json(s.z)}, {"F", io::to_json(s.F)}});
  return {{"samples", list}};
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string matrix_header(Eigen::Index n, const char* prefix) {
  std::string out;
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string tag = std::string(prefix) + "_" + std::to_string(k) + "_" + std::to_string(j);
      out += "," + tag + "_re," + tag + "_im";
    }
  return out;
}

std::string matrix_cells(const Mat& m) {
  std::string out;
  for (Eigen::Index k = 0; k < m.rows(); ++k)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + num(m(k, j).real()) + "," + num(m(k, j).imag());
  return out;
}

}  // namespace

std::string cumulative_csv(const SolutionMeasure& meas) {
  std::ostringstream os;
  os << "lambda" << matrix_header(meas.N, "M") << "\n";
  Mat running = Mat::Zero(meas.N, meas.N);
  for (const auto& atom : meas.atoms) {
    running += atom.weight;
    os << num(atom.position) << matrix_cells(running) << "\n";
  }
  return os.str();
}

std::string scan_csv(const std::vector<std::pair<double, Mat>>& scan) {
  std::ostringstream os;
  const Eigen::Index n = scan.empty() ? 0 : scan.front().second.rows();
  os << "x" << matrix_header(n, "ImF") << "\n";
  for (const auto& [x, m] : scan) os << num(x) << matrix_cells(m) << "\n";
  return os.str();
}

std::string samples_csv(const TransformSamples& samples) {
  std::ostringstream os;
  const Eigen::Index n = samples.empty() ? 0 : samples.front().F.rows();
  os << "z_re,z_im" << matrix_header(n, "F") << "\n";
  for (const auto& s : samples) os << num(s.z.real()) << "," << num(s.z.imag()) << matrix_cells(s.F) << "\n";
  return os.str();
}

}  // namespace smp::formats
