#include "bjtrace/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bjtrace {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::NotPsd: return "NotPSD";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::NotDensity: return "NotDensity";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::BadPermutation: return "BadPermutation";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

HermitianMatrix::HermitianMatrix(const CMatrix& a, double hermiticity_tol) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    std::ostringstream os;
    os << "expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  if (!a.allFinite()) throw Error(ErrorKind::NotHermitian, "matrix has non-finite entries");
  const double tol = hermiticity_tol < 0 ? 1e-9 : hermiticity_tol;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "max |A - A*| = " << asym << " exceeds " << tol * scale;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  m_ = (a + a.adjoint()) / 2.0;
  for (int i = 0; i < m_.rows(); ++i) m_(i, i) = m_(i, i).real();
}

HermitianMatrix HermitianMatrix::zero(int n) { return {CMatrix::Zero(n, n), Trusted{}}; }

HermitianMatrix HermitianMatrix::identity(int n) { return {CMatrix::Identity(n, n), Trusted{}}; }

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return {d.cast<Complex>().asDiagonal().toDenseMatrix(), Trusted{}};
}

HermitianMatrix HermitianMatrix::rank_one(const CVector& v) { return HermitianMatrix(v * v.adjoint()); }

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const { return {m_ + o.m_, Trusted{}}; }

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const { return {m_ - o.m_, Trusted{}}; }

HermitianMatrix HermitianMatrix::operator*(double s) const { return {m_ * s, Trusted{}}; }

double trace_product(const CMatrix& a, const CMatrix& b) {
  // Tr(AB) = sum_ij A_ij B_ji
  return (a.cwiseProduct(b.transpose())).sum().real();
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> solve(const CMatrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver did not converge (n = " << m.rows() << ", Frobenius norm = " << m.norm() << ")";
    throw Error(ErrorKind::EigenFailure, os.str());
  }
  return es;
}

}  // namespace

RVector eigenvalues(const HermitianMatrix& h) {
  auto es = solve(h.matrix(), false);
  return es.eigenvalues().reverse();
}

double default_zero_tol(const RVector& ev) {
  const double norm = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  return static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon() * norm;
}

double default_numeric_tol(double scale) { return 1e-9 * std::max(1.0, scale); }

SpectralSplit spectral_split(const HermitianMatrix& h, double zero_tol) {
  auto es = solve(h.matrix(), true);
  const int n = h.dim();
  SpectralSplit s;
  s.eigenvalues = es.eigenvalues().reverse();
  s.eigenvectors = es.eigenvectors().rowwise().reverse();
  s.zero_tol = zero_tol < 0 ? default_zero_tol(s.eigenvalues) : zero_tol;
  s.p_plus = CMatrix::Zero(n, n);
  s.p_zero = CMatrix::Zero(n, n);
  s.p_minus = CMatrix::Zero(n, n);
  // Summing outer products per eigenvalue class makes the projectors
  // independent of the basis chosen inside degenerate eigenspaces.
  for (int j = 0; j < n; ++j) {
    const double lam = s.eigenvalues[j];
    const CVector v = s.eigenvectors.col(j);
    if (lam > s.zero_tol) {
      s.p_plus.noalias() += v * v.adjoint();
      ++s.counts.mu_plus;
    } else if (lam < -s.zero_tol) {
      s.p_minus.noalias() += v * v.adjoint();
      ++s.counts.mu_minus;
    } else {
      s.p_zero.noalias() += v * v.adjoint();
      ++s.counts.mu_zero;
    }
  }
  return s;
}

CMatrix SpectralSplit::kernel_basis() const {
  // eigenvalues are non-increasing, so the zero class is a contiguous block
  return eigenvectors.middleCols(counts.mu_plus, counts.mu_zero);
}

CMatrix SpectralSplit::positive_basis() const { return eigenvectors.leftCols(counts.mu_plus); }

double trace_norm(const HermitianMatrix& a) { return eigenvalues(a).cwiseAbs().sum(); }

double operator_norm(const HermitianMatrix& a) { return eigenvalues(a).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const HermitianMatrix& a) {
  auto ev = eigenvalues(a);
  return ev[ev.size() - 1];
}

Inertia inertia(const SpectralSplit& split) { return split.counts; }

HermitianMatrix comparison_matrix(const HermitianMatrix& a) {
  const int n = a.dim();
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = i == j ? std::abs(a(i, i)) : -std::abs(a(i, j));
  return HermitianMatrix(m);
}

bool is_h_matrix(const HermitianMatrix& a, double tol) { return min_eigenvalue(comparison_matrix(a)) >= -tol; }

HermitianMatrix hermitian_polar_unitary(const SpectralSplit& split) {
  if (split.counts.mu_zero > 0) {
    std::ostringstream os;
    os << "matrix has " << split.counts.mu_zero << " eigenvalue(s) within " << split.zero_tol << " of zero";
    throw Error(ErrorKind::SingularInput, os.str());
  }
  return HermitianMatrix(split.signature());
}

bool is_projection(const CMatrix& p, double tol) {
  if (p.rows() != p.cols()) return false;
  if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return (p * p - p).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace bjtrace
