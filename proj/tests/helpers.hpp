#pragma once

#include "stieltjes/hankel.hpp"

#include <initializer_list>

namespace testing {

inline smp::MomentSequence scalar_seq(std::initializer_list<double> values) {
  smp::MomentSequence seq;
  seq.N = 1;
  for (double v : values) seq.moments.push_back(smp::Mat::Constant(1, 1, v));
  return seq;
}

inline smp::Mat real_mat(std::initializer_list<std::initializer_list<double>> rows) {
  smp::Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

/// S_j = diag(1, 2^j), j = 0..m: atoms at 1 and 2 with weights diag(1,0), diag(0,1).
inline smp::MomentSequence diag_seq(int m) {
  smp::MomentSequence seq;
  seq.N = 2;
  for (int j = 0; j <= m; ++j) {
    smp::Mat s = smp::Mat::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = static_cast<double>(1 << j);
    seq.moments.push_back(s);
  }
  return seq;
}

}  // namespace testing
