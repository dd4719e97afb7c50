#include "stieltjes/generate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <sstream>

namespace smp::gen {

SolutionMeasure parse_atoms(const std::string& spec, int N) {
  if (N < 1) throw Error(ErrorKind::Schema, "N must be positive");
  SolutionMeasure meas;
  meas.N = N;
  std::istringstream items(spec);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Schema, "atom \"" + item + "\" is not pos:weight");
    double pos = 0.0, w = 0.0;
    try {
      std::size_t used = 0;
      pos = std::stod(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("trailing");
      const std::string rest = item.substr(colon + 1);
      w = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorKind::Schema, "atom \"" + item + "\" is not pos:weight");
    }
    if (pos < 0.0) throw Error(ErrorKind::Schema, "atom positions must be non-negative");
    if (w < 0.0) throw Error(ErrorKind::Schema, "atom weights must be non-negative");
    meas.atoms.push_back({pos, w * Mat::Identity(N, N)});
  }
  if (meas.atoms.empty()) throw Error(ErrorKind::Schema, "empty atom list");
  meas.canonicalize();
  return meas;
}

SolutionMeasure random_measure(const RandomMeasureOptions& opts, std::uint64_t seed) {
  if (opts.N < 1 || opts.count < 1) throw Error(ErrorKind::Schema, "N and count must be positive");
  if (!(opts.hi > opts.lo) || opts.lo < 0.0) throw Error(ErrorKind::Schema, "bad atom range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(opts.lo, opts.hi);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0 * opts.N));

  SolutionMeasure meas;
  meas.N = opts.N;
  std::vector<double> positions;
  for (int tries = 0; static_cast<int>(positions.size()) < opts.count; ++tries) {
    if (tries > 10000) throw Error(ErrorKind::Schema, "cannot place atoms with the requested separation");
    const double x = pos(rng);
    bool ok = true;
    for (double y : positions) ok = ok && std::abs(x - y) >= opts.min_separation;
    if (ok) positions.push_back(x);
  }
  for (double x : positions) {
    Mat G(opts.N, opts.N);
    for (Eigen::Index r = 0; r < G.rows(); ++r)
      for (Eigen::Index c = 0; c < G.cols(); ++c) G(r, c) = cplx(normal(rng), normal(rng));
    Mat W = G.adjoint() * G;
    W = 0.5 * (W + W.adjoint());
    meas.atoms.push_back({x, W});
  }
  if (opts.normalize) {
    const double total = meas.total_mass().trace().real();
    if (total > 0.0)
      for (auto& a : meas.atoms) a.weight /= total;
  }
  meas.canonicalize();
  return meas;
}

MomentSequence moments_for(const SolutionMeasure& meas, int order) {
  if (order < 0) throw Error(ErrorKind::Schema, "order must be non-negative");
  return moments_of_measure(meas, order);
}

}  // namespace smp::gen
