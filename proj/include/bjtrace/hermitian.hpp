#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "bjtrace/errors.hpp"

namespace bjtrace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Dense Hermitian matrix. Construction validates Hermiticity and removes
/// round-off asymmetry; the stored entries are exactly Hermitian afterwards.
class HermitianMatrix {
 public:
  /// Accepts `a` when max|a - a*| <= tol * max(1, max|a_ij|); a negative tol
  /// selects the default 1e-9.
  explicit HermitianMatrix(const CMatrix& a, double hermiticity_tol = -1.0);

  static HermitianMatrix zero(int n);
  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(const RVector& d);
  /// Outer product v v*.
  static HermitianMatrix rank_one(const CVector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  RVector diag() const { return m_.diagonal().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}

  CMatrix m_;
};

/// Real trace Tr(AB) of a product of Hermitian matrices.
double trace_product(const CMatrix& a, const CMatrix& b);

struct Inertia {
  int mu_plus = 0;
  int mu_zero = 0;
  int mu_minus = 0;

  int dim() const { return mu_plus + mu_zero + mu_minus; }
  bool operator==(const Inertia&) const = default;
};

/// Eigenvalues (non-increasing) together with the positive, zero and negative
/// eigenprojections. Eigenvectors are kept in the same order so that callers
/// can work inside one eigenspace without another decomposition.
struct SpectralSplit {
  RVector eigenvalues;
  CMatrix eigenvectors;  // column j belongs to eigenvalues[j]
  CMatrix p_plus;
  CMatrix p_zero;
  CMatrix p_minus;
  double zero_tol = 0.0;
  Inertia counts;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  /// Orthonormal basis of the zero eigenspace (columns).
  CMatrix kernel_basis() const;
  /// Orthonormal basis of the positive eigenspace (columns).
  CMatrix positive_basis() const;
  CMatrix signature() const { return p_plus - p_minus; }
};

/// n * machine epsilon * operator norm.
double default_zero_tol(const RVector& eigenvalues);

/// 1e-9 * max(1, scale).
double default_numeric_tol(double scale);

/// Spectral decomposition with signed projector splitting. zero_tol < 0
/// selects `default_zero_tol`.
SpectralSplit spectral_split(const HermitianMatrix& h, double zero_tol = -1.0);

/// Eigenvalues in non-increasing order.
RVector eigenvalues(const HermitianMatrix& h);

double trace_norm(const HermitianMatrix& a);
double operator_norm(const HermitianMatrix& a);
double min_eigenvalue(const HermitianMatrix& a);

Inertia inertia(const SpectralSplit& split);

/// M(A): |A_ii| on the diagonal, -|A_ij| off it.
HermitianMatrix comparison_matrix(const HermitianMatrix& a);

bool is_h_matrix(const HermitianMatrix& a, double tol = 1e-9);

/// The Hermitian unitary P+ - P- of the polar decomposition of an invertible
/// matrix. Throws SingularInput when the split has a zero eigenspace.
HermitianMatrix hermitian_polar_unitary(const SpectralSplit& split);

/// True when p is Hermitian and idempotent within tol.
bool is_projection(const CMatrix& p, double tol = 1e-9);

}  // namespace bjtrace
