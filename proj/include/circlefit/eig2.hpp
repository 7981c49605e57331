#pragma once

#include <cmath>

#include "circlefit/types.hpp"

namespace circlefit {

/// Eigen-decomposition of a symmetric 2x2 matrix, H = Q diag(d1, d2) Q^T.
struct Eigen2x2 {
  double d1 = 0.0;  // larger eigenvalue
  double d2 = 0.0;
  Matrix2d Q = Matrix2d::Identity();  // columns are eigenvectors, det(Q) = +1
};

/// Closed-form symmetric 2x2 eigensolver. Only the upper triangle is read.
/// Q is the rotation by half the angle atan2(2 h01, h00 - h11), so diagonal
/// input with h00 >= h11 yields Q = I.
inline Eigen2x2 eig_sym_2x2(const Matrix2d& H) {
  const double p = H(0, 0);
  const double q = H(0, 1);
  const double r = H(1, 1);
  const double mean = 0.5 * (p + r);
  const double disc = std::hypot(0.5 * (p - r), q);

  // Kahan's product difference keeps det accurate, so the eigenvalue of
  // smaller magnitude is recovered as det / (the larger one) without cancellation.
  const double qq = q * q;
  const double det = std::fma(p, r, -qq) + std::fma(-q, q, qq);

  Eigen2x2 e;
  if (mean >= 0.0) {
    e.d1 = mean + disc;
    e.d2 = e.d1 != 0.0 ? det / e.d1 : 0.0;
  } else {
    e.d2 = mean - disc;
    e.d1 = det / e.d2;
  }
  const double phi = 0.5 * std::atan2(2.0 * q, p - r);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  e.Q << c, -s,
         s, c;
  return e;
}

}  // namespace circlefit
