#pragma once

#include "stieltjes/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace smp {

/// Finite moment data S_0..S_m of an N x N matrix measure on [0, inf).
struct MomentSequence {
  int N = 1;
  std::vector<Mat> moments;

  int m() const { return static_cast<int>(moments.size()) - 1; }
  /// Construction order floor(m / 2).
  int order() const { return m() / 2; }
  /// max(1, largest absolute entry over all moments).
  double scale() const;
};

enum class HankelKind { Plain, Shifted };

/// Block Hankel matrix (S_{i+j}) or (S_{i+j+1}), i, j = 0..order.
struct BlockHankel {
  int order = 0;
  HankelKind kind = HankelKind::Plain;
  Mat entries;
};

/// The plain block Hankel matrix read entrywise as a scalar matrix:
/// gamma(rN + j, tN + k) = S_{r+t}(j, k).
struct ScalarGram {
  int N = 1;
  int n = 0;
  Mat gamma;

  Eigen::Index size() const { return gamma.rows(); }
  /// gamma(a + N, b) for a, b < nN, i.e. the shifted Hankel matrix of order n-1.
  Mat shifted() const;
};

enum class Verdict { Solvable, NotSolvable, Marginal };

const char* to_string(Verdict v) noexcept;

struct SolvabilityReport {
  std::vector<double> gamma_min_eigs;        // index k -> min eig of Gamma_k
  std::vector<double> gamma_tilde_min_eigs;  // index k -> min eig of shifted Gamma_k
  Verdict verdict = Verdict::Solvable;
  double psd_tol = 1e-10;
  double scale = 1.0;
  /// Highest order certified; moments past 2n only enter the shifted checks.
  int construction_order = 0;
  int highest_moment = 0;

  /// Feasible within tolerance (Solvable or Marginal).
  bool feasible() const { return verdict != Verdict::NotSolvable; }
};

/// Validates and normalizes a moments document. Matrices whose asymmetry is
/// at most atol_rel * scale are replaced by their Hermitian part and a note
/// is appended to `warnings`.
MomentSequence load_moments(const nlohmann::json& doc, double atol_rel = 1e-12,
                            std::vector<std::string>* warnings = nullptr);

/// Throws NotHermitian / Schema on malformed in-memory data.
void validate(const MomentSequence& seq, double atol_rel = 1e-12);

BlockHankel build_gamma(const MomentSequence& seq, int n);
BlockHankel build_gamma_tilde(const MomentSequence& seq, int n);

ScalarGram scalarize(const MomentSequence& seq);

SolvabilityReport check_solvable(const MomentSequence& seq, double psd_tol = 1e-10);

}  // namespace smp
