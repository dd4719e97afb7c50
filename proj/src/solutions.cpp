#include "stieltjes/solutions.hpp"

#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace smp {

void SolutionMeasure::canonicalize(double merge_tol) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  std::vector<Atom> merged;
  for (auto& atom : atoms) {
    if (!merged.empty() && atom.position - merged.back().position <= merge_tol) {
      Atom& last = merged.back();
      const double wa = last.weight.trace().real(), wb = atom.weight.trace().real();
      if (wa + wb > 0.0) last.position = (wa * last.position + wb * atom.position) / (wa + wb);
      last.weight += atom.weight;
    } else {
      merged.push_back(std::move(atom));
    }
  }
  atoms = std::move(merged);
}

Mat SolutionMeasure::cumulative(double lambda) const {
  Mat out = Mat::Zero(N, N);
  for (const auto& atom : atoms) {
    if (atom.position < lambda) out += atom.weight;
  }
  return out;
}

Mat SolutionMeasure::total_mass() const {
  Mat out = Mat::Zero(N, N);
  for (const auto& atom : atoms) out += atom.weight;
  return out;
}

MomentSequence moments_of_measure(const SolutionMeasure& meas, int p_max) {
  MomentSequence seq;
  seq.N = meas.N;
  seq.moments.assign(static_cast<std::size_t>(p_max + 1), Mat::Zero(meas.N, meas.N));
  for (const auto& atom : meas.atoms) {
    double power = 1.0;
    for (int p = 0; p <= p_max; ++p) {
      seq.moments[static_cast<std::size_t>(p)] += power * atom.weight;
      power *= atom.position;
    }
  }
  return seq;
}

MomentCheck verify_moments(const SolutionMeasure& meas, const MomentSequence& seq, int upto, double rtol) {
  if (upto > seq.m()) throw Error(ErrorKind::Schema, "verification order exceeds the available moments");
  MomentCheck check;
  check.rtol = rtol;
  const MomentSequence mine = moments_of_measure(meas, upto);
  double worst = -1.0;
  for (int p = 0; p <= upto; ++p) {
    const Mat& target = seq.moments[static_cast<std::size_t>(p)];
    const double err = (mine.moments[static_cast<std::size_t>(p)] - target).norm() /
                       std::max(1.0, target.norm());
    check.errors.push_back(err);
    if (err > worst) {
      worst = err;
      check.worst_order = p;
    }
    if (!(err <= rtol)) check.pass = false;
  }
  return check;
}

Mat transform_of_measure(const SolutionMeasure& meas, cplx z) {
  Mat out = Mat::Zero(meas.N, meas.N);
  for (const auto& atom : meas.atoms) {
    const cplx denom = atom.position - z;
    if (std::abs(denom) <= 1e-12) throw Error(ErrorKind::PoleHit, "transform evaluated at an atom");
    out += atom.weight / denom;
  }
  return out;
}

double measure_distance(const SolutionMeasure& a, const SolutionMeasure& b, int p_max) {
  double dist = 0.0;
  const MomentSequence ma = moments_of_measure(a, p_max), mb = moments_of_measure(b, p_max);
  for (int p = 0; p <= p_max; ++p) {
    const Mat& sa = ma.moments[static_cast<std::size_t>(p)];
    const Mat& sb = mb.moments[static_cast<std::size_t>(p)];
    dist = std::max(dist, (sa - sb).norm() / std::max({1.0, sa.norm(), sb.norm()}));
  }
  std::vector<double> grid;
  for (const auto* m : {&a, &b}) {
    for (const auto& atom : m->atoms) grid.push_back(atom.position * (1.0 + 1e-9) + 1e-12);
  }
  for (double x : grid) dist = std::max(dist, (a.cumulative(x) - b.cumulative(x)).norm());
  return dist;
}

namespace {

Mat imag_part(const Mat& f) { return (f - f.adjoint()) / cplx(0.0, 2.0); }

double imag_trace(const TransformSampler& sampler, double x, double eps) {
  return imag_part(sampler(cplx(x, eps))).trace().real();
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  // The endpoints are candidates too: peaks at the boundary of the grid.
  double best = 0.5 * (a + b), fbest = f(best);
  for (double x : {a, b}) {
    const double fx = f(x);
    if (fx > fbest) {
      best = x;
      fbest = fx;
    }
  }
  return best;
}

}  // namespace

std::vector<std::pair<double, Mat>> imag_scan(const TransformSampler& sampler, double lo, double hi,
                                              int points, double eps) {
  std::vector<std::pair<double, Mat>> out;
  for (int i = 0; i < points; ++i) {
    const double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    out.emplace_back(x, imag_part(sampler(cplx(x, eps))));
  }
  return out;
}

SolutionMeasure perron_invert(const TransformSampler& sampler, int N, const PerronOptions& opts) {
  SolutionMeasure meas;
  meas.N = N;
  meas.approximate = true;
  if (opts.eps_schedule.empty() || opts.grid_points < 2) {
    throw Error(ErrorKind::Schema, "inversion needs an eps schedule and at least two grid points");
  }

  const double eps0 = opts.eps_schedule.front();
  const int n = opts.grid_points;
  const double h = (opts.hi - opts.lo) / (n - 1);
  std::vector<double> xs(static_cast<std::size_t>(n)), vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = opts.lo + h * i;
    vals[static_cast<std::size_t>(i)] = imag_trace(sampler, xs[static_cast<std::size_t>(i)], eps0);
  }
  std::vector<double> sorted = vals;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double threshold = opts.peak_factor * std::max(0.0, sorted[static_cast<std::size_t>(n / 2)]);

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = vals[i];
    if (!(v > threshold) || v <= 0.0) continue;
    const bool left_ok = i == 0 || v >= vals[i - 1];
    const bool right_ok = i + 1 == vals.size() || v > vals[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }

  for (std::size_t idx : peaks) {
    double center = xs[idx];
    double half = h;
    std::vector<double> positions;
    std::vector<Mat> weights;
    for (double eps : opts.eps_schedule) {
      const double a = std::max(opts.lo, center - half), b = std::min(opts.hi, center + half);
      auto f = [&](double x) { return imag_trace(sampler, x, eps); };
      center = golden_max(f, a, b);
      positions.push_back(center);
      weights.push_back(eps * imag_part(sampler(cplx(center, eps))));
      half = std::max(4.0 * eps, 1e-12);
    }

    Mat weight = weights.back();
    double position = positions.back();
    if (weights.size() >= 2) {
      std::vector<Mat> extrapolated;
      for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        const double e1 = opts.eps_schedule[k] * opts.eps_schedule[k];
        const double e2 = opts.eps_schedule[k + 1] * opts.eps_schedule[k + 1];
        extrapolated.push_back((e1 * weights[k + 1] - e2 * weights[k]) / (e1 - e2));
      }
      weight = extrapolated.back();
      if (extrapolated.size() >= 2) {
        const double spread = (extrapolated.back() - extrapolated[extrapolated.size() - 2]).norm();
        if (spread > opts.atom_tol * std::max(1.0, weight.norm())) {
          throw Error(ErrorKind::NoConvergence, "weight extrapolation disagrees near x = " + std::to_string(position));
        }
      }
      if (std::abs(positions.back() - positions[positions.size() - 2]) > opts.atom_tol) {
        throw Error(ErrorKind::NoConvergence, "peak position drifts near x = " + std::to_string(position));
      }
    }
    weight = linalg::hermitian_part(weight);
    if (weight.trace().real() <= opts.weight_floor) continue;
    meas.atoms.push_back({std::max(0.0, position), weight});
  }
  meas.canonicalize(1e-8);
  return meas;
}

}  // namespace smp
