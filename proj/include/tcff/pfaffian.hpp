#pragma once

#include <cmath>
#include <utility>

#include "tcff/common.hpp"

namespace tcff {

/// Even-dimensional complex skew-symmetric matrix. Construction
/// antisymmetrizes roundoff, T <- (T - T^t)/2, and zeroes the diagonal,
/// so downstream elimination can assume exact skewness.
class SkewMatrix {
 public:
  explicit SkewMatrix(CMatrix entries) {
    const Index n = entries.rows();
    if (n == 0 || n % 2 != 0 || entries.cols() != n) {
      throw std::invalid_argument("SkewMatrix: dimension must be even and positive");
    }
    if (!entries.allFinite()) {
      throw std::invalid_argument("SkewMatrix: entries must be finite");
    }
    entries_ = 0.5 * (entries - entries.transpose()).eval();
    entries_.diagonal().setZero();
  }

  Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }

 private:
  CMatrix entries_;
};

/// Pfaffian by skew-symmetric elimination with partial pivoting on the
/// largest-magnitude column entry. Returns exactly 0 when a pivot column
/// falls below 1e-13 * maxabs(m): near-singular contraction matrices mean
/// fully decayed correlations and 0 is the correct limit.
inline Complex pfaffian(const SkewMatrix& m) {
  const Index n = m.dim();
  CMatrix k = m.entries();

  const double scale = k.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Complex(0.0, 0.0);
  const double tol = 1e-13 * scale;

  Complex pf(1.0, 0.0);
  double sign = 1.0;
  for (Index j = 0; j + 1 < n; j += 2) {
    Index p = 0;
    const double mx = k.col(j).segment(j + 1, n - j - 1).cwiseAbs().maxCoeff(&p);
    p += j + 1;
    if (!(mx > tol)) return Complex(0.0, 0.0);
    if (p != j + 1) {
      k.row(j + 1).swap(k.row(p));
      k.col(j + 1).swap(k.col(p));
      sign = -sign;
    }
    pf *= k(j, j + 1);
    if (j + 2 >= n) break;
    const Complex piv = k(j + 1, j);
    for (Index i = j + 2; i < n; ++i) {
      const Complex f = k(i, j) / piv;
      if (f != Complex(0.0, 0.0)) {
        k.row(i) -= f * k.row(j + 1);
        k.col(i) -= f * k.col(j + 1);
      }
    }
  }
  if (!std::isfinite(pf.real()) || !std::isfinite(pf.imag())) {
    throw NumericalError("pfaffian: elimination produced a non-finite value");
  }
  return sign * pf;
}

}  // namespace tcff
