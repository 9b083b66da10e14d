#pragma once

#include <cmath>

#include "bjtrace/hermitian.hpp"

namespace fx {

using bjtrace::CMatrix;
using bjtrace::CVector;
using bjtrace::RVector;

// The 3 x 3 matrix with eigenvalues {6, 0, -6} that passes the diagonal filter
// but is not orthogonal to every diagonal matrix.
inline CMatrix h3() {
  CMatrix h(3, 3);
  h << -1, 5, 2, 5, -1, 2, 2, 2, 2;
  return h;
}

inline RVector h3_refuting_diag() { return (RVector(3) << 6, 6, -6.0 / 5).finished(); }

inline CMatrix exchange() {
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline double alpha5() { return std::sqrt((std::sqrt(10.0) - 1.0) / 3.0); }

// Rank-2 projection in dimension 5 with P_55 = 1/2, built by orthonormalising
// (1,1,1,0,0) and (0,0,1,a,1/a).
inline CMatrix p5() {
  const double a = alpha5();
  CMatrix v(5, 2);
  v.col(0) << 1, 1, 1, 0, 0;
  v.col(1) << 0, 0, 1, a, 1 / a;
  Eigen::HouseholderQR<CMatrix> qr(v);
  const CMatrix q = CMatrix(qr.householderQ()).leftCols(2);
  CMatrix p = q * q.adjoint();
  return (p + p.adjoint()) / 2.0;
}

inline RVector p5_refuting_diag() { return (RVector(5) << 0, 0, 3, -1, 3).finished() / -40.0; }

}  // namespace fx
