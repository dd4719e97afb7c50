#include "stieltjes/hankel.hpp"

#include "stieltjes/io.hpp"
#include "stieltjes/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace smp {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Solvable: return "solvable";
    case Verdict::NotSolvable: return "not_solvable";
    case Verdict::Marginal: return "marginal";
  }
  return "unknown";
}

double MomentSequence::scale() const {
  double s = 1.0;
  for (const auto& S : moments) s = std::max(s, linalg::max_abs_entry(S));
  return s;
}

Mat ScalarGram::shifted() const {
  const Eigen::Index dom = static_cast<Eigen::Index>(n) * N;
  return gamma.block(N, 0, dom, dom);
}

namespace {

double asymmetry(const Mat& S) { return linalg::max_abs_entry(S - S.adjoint()); }

}  // namespace

void validate(const MomentSequence& seq, double atol_rel) {
  if (seq.N < 1) throw Error(ErrorKind::Schema, "N must be positive");
  if (seq.moments.empty()) throw Error(ErrorKind::Schema, "at least one moment is required");
  const double atol = atol_rel * seq.scale();
  for (std::size_t j = 0; j < seq.moments.size(); ++j) {
    const Mat& S = seq.moments[j];
    if (S.rows() != seq.N || S.cols() != seq.N) {
      throw Error(ErrorKind::Schema, "moment " + std::to_string(j) + " is not N x N");
    }
    if (!S.allFinite()) throw Error(ErrorKind::Schema, "moment " + std::to_string(j) + " is not finite");
    if (asymmetry(S) > atol) {
      throw Error(ErrorKind::NotHermitian, "moment S_" + std::to_string(j) +
                                               " is not Hermitian (asymmetry " +
                                               std::to_string(asymmetry(S)) + ")");
    }
  }
}

MomentSequence load_moments(const nlohmann::json& doc, double atol_rel,
                            std::vector<std::string>* warnings) {
  if (!doc.is_object()) throw Error(ErrorKind::Schema, "moments document must be an object");
  if (!doc.contains("N") || !doc["N"].is_number_integer()) {
    throw Error(ErrorKind::Schema, "\"N\" must be an integer");
  }
  if (!doc.contains("moments") || !doc["moments"].is_array()) {
    throw Error(ErrorKind::Schema, "\"moments\" must be an array");
  }
  MomentSequence seq;
  seq.N = doc["N"].get<int>();
  if (seq.N < 1) throw Error(ErrorKind::Schema, "N must be positive");
  for (const auto& entry : doc["moments"]) {
    seq.moments.push_back(io::matrix_from_json(entry, seq.N, seq.N));
  }
  if (seq.moments.empty()) throw Error(ErrorKind::Schema, "at least one moment is required");

  validate(seq, atol_rel);
  for (std::size_t j = 0; j < seq.moments.size(); ++j) {
    Mat& S = seq.moments[j];
    if (asymmetry(S) > 0.0) {
      S = linalg::hermitian_part(S);
      if (warnings) warnings->push_back("S_" + std::to_string(j) + " symmetrized");
    }
  }
  return seq;
}

namespace {

BlockHankel assemble(const MomentSequence& seq, int n, int offset, HankelKind kind) {
  if (n < 0) throw Error(ErrorKind::OrderTooHigh, "negative Hankel order");
  if (2 * n + offset > seq.m()) {
    throw Error(ErrorKind::OrderTooHigh, "order " + std::to_string(n) + " needs S_" +
                                             std::to_string(2 * n + offset) + ", have up to S_" +
                                             std::to_string(seq.m()));
  }
  const Eigen::Index N = seq.N;
  BlockHankel h;
  h.order = n;
  h.kind = kind;
  h.entries.resize((n + 1) * N, (n + 1) * N);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      h.entries.block(i * N, j * N, N, N) = seq.moments[static_cast<std::size_t>(i + j + offset)];
    }
  }
  return h;
}

}  // namespace

BlockHankel build_gamma(const MomentSequence& seq, int n) {
  return assemble(seq, n, 0, HankelKind::Plain);
}

BlockHankel build_gamma_tilde(const MomentSequence& seq, int n) {
  return assemble(seq, n, 1, HankelKind::Shifted);
}

ScalarGram scalarize(const MomentSequence& seq) {
  ScalarGram g;
  g.N = seq.N;
  g.n = seq.order();
  const Eigen::Index N = seq.N;
  const Eigen::Index size = (g.n + 1) * N;
  g.gamma.resize(size, size);
  // Entry-by-entry from the index map, so the shift symmetry
  // gamma(a + N, b) == gamma(a, b + N) holds bit for bit.
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = 0; b < size; ++b) {
      const auto r = a / N, j = a % N, t = b / N, k = b % N;
      g.gamma(a, b) = seq.moments[static_cast<std::size_t>(r + t)](j, k);
    }
  }
  return g;
}

SolvabilityReport check_solvable(const MomentSequence& seq, double psd_tol) {
  SolvabilityReport rep;
  rep.psd_tol = psd_tol;
  rep.scale = seq.scale();
  rep.construction_order = seq.order();
  rep.highest_moment = seq.m();

  for (int k = 0; 2 * k <= seq.m(); ++k) {
    rep.gamma_min_eigs.push_back(linalg::min_eigenvalue(build_gamma(seq, k).entries));
  }
  for (int k = 0; 2 * k + 1 <= seq.m(); ++k) {
    rep.gamma_tilde_min_eigs.push_back(linalg::min_eigenvalue(build_gamma_tilde(seq, k).entries));
  }

  const double threshold = psd_tol * rep.scale;
  bool negative = false, marginal = false;
  for (const auto* list : {&rep.gamma_min_eigs, &rep.gamma_tilde_min_eigs}) {
    for (double e : *list) {
      if (e < -threshold) negative = true;
      else if (e < threshold) marginal = true;
    }
  }
  rep.verdict = negative ? Verdict::NotSolvable : (marginal ? Verdict::Marginal : Verdict::Solvable);
  return rep;
}

}  // namespace smp
