#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mirrorforge::detail {

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using SmallComplexMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

// Transposed cofactor matrix (adjugate) so that d det = sum_ij adj(j,i) dA(i,j).
template <typename M>
M adjugate(const M& a) {
  const auto n = a.rows();
  M out(n, n);
  if (n == 1) {
    out(0, 0) = 1.0;
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      M minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      const double sign = ((i + j) % 2) ? -1.0 : 1.0;
      out(j, i) = sign * minor.determinant();
    }
  return out;
}

}  // namespace mirrorforge::detail
