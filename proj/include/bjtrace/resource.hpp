#pragma once

#include <cstdint>
#include <vector>

#include "bjtrace/hermitian.hpp"
#include "bjtrace/kernels.hpp"
#include "bjtrace/trace_min.hpp"

namespace bjtrace {

/// Positive semidefinite, trace-one matrix.
class DensityMatrix {
 public:
  /// Throws NotDensity unless rho is PSD within tol and Tr(rho) = 1 within 1e-9.
  explicit DensityMatrix(HermitianMatrix rho, double tol = 1e-9);

  /// rho / Tr(rho) for a PSD rho with positive trace.
  static DensityMatrix normalized(const HermitianMatrix& rho, double tol = 1e-9);
  /// |v><v| / <v|v>.
  static DensityMatrix pure(const CVector& v);

  const HermitianMatrix& rho() const { return rho_; }
  int dim() const { return rho_.dim(); }

  /// Orthogonal projection onto range(rho), from the positive eigenspace.
  CMatrix range_projection(double zero_tol = -1.0) const;
  int rank(double zero_tol = -1.0) const;

 private:
  HermitianMatrix rho_;
};

struct ConeSpec {
  enum class Kind { DiagonalPSD, KCoherent, KEntangled, FullPSD };
  Kind kind = Kind::DiagonalPSD;
  int k = 1;
  int m = 0;  // bipartite dimensions for KEntangled
  int n = 0;

  /// Throws DomainError when k or the dimensions do not fit a space of size dim.
  void validate(int dim) const;
};

/// Every diagonal entry of the range projection is at most 1/2 + tol.
bool is_max_coherent(const DensityMatrix& rho, double tol = 1e-9, double zero_tol = -1.0);

struct PNormConfig {
  std::uint64_t max_subsets = 2'000'000;
  double projection_tol = 1e-9;
  Execution execution = Execution::Parallel;
};

/// Largest operator norm of a k x k principal submatrix of the projection p,
/// by exhaustive enumeration. Throws NotProjection, DomainError (k outside
/// [1, n]) or BudgetExceeded (C(n, k) above the configured limit).
SubmatrixMax pnorm_k(const CMatrix& p, int k, const PNormConfig& cfg = {});

bool is_max_k_coherent(const DensityMatrix& rho, int k, double tol = 1e-9, const PNormConfig& cfg = {});

/// floor(n (n + 1 - 2k) / (2 (n - k))), clamped at 0. DomainError unless 1 <= k < n.
int coherence_rank_bound(int n, int k);

struct ConeDistance {
  double value = 0.0;
  RVector x;  // the diagonal of the closest cone member found
  bool low_confidence = false;
};

/// min ||rho - diag(x)||_tr over x >= 0.
ConeDistance distance_to_diag_cone(const DensityMatrix& rho, const DiagonalShiftConfig& cfg = {});

/// Factor width at most two, decided through the comparison matrix.
bool is_two_coherent(const DensityMatrix& rho, double tol = 1e-9);

}  // namespace bjtrace
