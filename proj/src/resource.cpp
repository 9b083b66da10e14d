#include "bjtrace/resource.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bjtrace {

DensityMatrix::DensityMatrix(HermitianMatrix rho, double tol) : rho_(std::move(rho)) {
  const double tr = rho_.diag().sum();
  if (std::abs(tr - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "trace is " << tr << ", expected 1";
    throw Error(ErrorKind::NotDensity, os.str());
  }
  const double lo = min_eigenvalue(rho_);
  if (lo < -tol) {
    std::ostringstream os;
    os << "minimum eigenvalue " << lo << " is negative";
    throw Error(ErrorKind::NotDensity, os.str());
  }
}

DensityMatrix DensityMatrix::normalized(const HermitianMatrix& rho, double tol) {
  const double tr = rho.diag().sum();
  if (!(tr > 0.0)) throw Error(ErrorKind::NotDensity, "trace must be positive to normalise");
  return DensityMatrix(rho * (1.0 / tr), tol);
}

DensityMatrix DensityMatrix::pure(const CVector& v) {
  const double nrm = v.squaredNorm();
  if (!(nrm > 0.0)) throw Error(ErrorKind::NotDensity, "zero vector is not a state");
  return DensityMatrix(HermitianMatrix(v * v.adjoint() / nrm));
}

CMatrix DensityMatrix::range_projection(double zero_tol) const { return spectral_split(rho_, zero_tol).p_plus; }

int DensityMatrix::rank(double zero_tol) const { return spectral_split(rho_, zero_tol).counts.mu_plus; }

void ConeSpec::validate(int dim) const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::DomainError, msg); };
  switch (kind) {
    case Kind::DiagonalPSD:
    case Kind::FullPSD:
      return;
    case Kind::KCoherent:
      if (k < 1 || k > dim) fail("k-coherence needs 1 <= k <= n");
      return;
    case Kind::KEntangled:
      if (m < 1 || n < 1 || m * n != dim) fail("bipartite dimensions must multiply to the matrix size");
      if (k < 1 || k > std::min(m, n)) fail("k-entanglement needs 1 <= k <= min(m, n)");
      return;
  }
}

bool is_max_coherent(const DensityMatrix& rho, double tol, double zero_tol) {
  return rho.range_projection(zero_tol).diagonal().real().maxCoeff() <= 0.5 + tol;
}

SubmatrixMax pnorm_k(const CMatrix& p, int k, const PNormConfig& cfg) {
  const int n = static_cast<int>(p.rows());
  if (!is_projection(p, cfg.projection_tol)) throw Error(ErrorKind::NotProjection, "matrix is not an orthogonal projection");
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "k = " << k << " outside [1, " << n << "]";
    throw Error(ErrorKind::DomainError, os.str());
  }
  const std::uint64_t subsets = binomial(n, k);
  if (subsets > cfg.max_subsets) {
    std::ostringstream os;
    os << "C(" << n << ", " << k << ") = " << subsets << " principal submatrices exceeds the budget of "
       << cfg.max_subsets;
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
  return max_principal_submatrix_norm(p, k, cfg.execution);
}

bool is_max_k_coherent(const DensityMatrix& rho, int k, double tol, const PNormConfig& cfg) {
  return pnorm_k(rho.range_projection(), k, cfg).value <= 0.5 + tol;
}

int coherence_rank_bound(int n, int k) {
  if (k < 1 || k >= n) {
    std::ostringstream os;
    os << "rank bound needs 1 <= k < n (got n = " << n << ", k = " << k << ")";
    throw Error(ErrorKind::DomainError, os.str());
  }
  const long long num = static_cast<long long>(n) * (n + 1 - 2 * k);
  const long long den = 2LL * (n - k);
  if (num <= 0) return 0;
  return static_cast<int>(num / den);
}

ConeDistance distance_to_diag_cone(const DensityMatrix& rho, const DiagonalShiftConfig& cfg) {
  // ||rho - diag(x)||_tr with x >= 0 is ||rho + diag(d)||_tr with d <= 0.
  const int n = rho.dim();
  const DiagonalShiftResult r = minimize_diagonal_shift(rho.rho(), std::nullopt, RVector::Zero(n), cfg);
  return ConeDistance{r.value, -r.d, r.low_confidence};
}

bool is_two_coherent(const DensityMatrix& rho, double tol) { return is_h_matrix(rho.rho(), tol); }

}  // namespace bjtrace
