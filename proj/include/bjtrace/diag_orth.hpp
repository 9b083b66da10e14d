#pragma once

#include <optional>
#include <string>

#include "bjtrace/hermitian.hpp"
#include "bjtrace/trace_min.hpp"

namespace bjtrace {

enum class Certainty { ProvenYes, ProvenNo, NumericalYes, NumericalNo };

enum class DiagRule {
  PsdDiagonalFilter,  // necessary condition failed
  TwoByTwo,
  Invertible,
  PsdSmallDim,
  PsdRankCase,
  ConstantDiagonalRange,
  Feasibility,
  Oracle,
};

const char* to_string(Certainty c);
const char* to_string(DiagRule r);

inline bool is_yes(Certainty c) { return c == Certainty::ProvenYes || c == Certainty::NumericalYes; }

struct DiagVerdict {
  bool psd_diag_orthogonal = false;
  Certainty all_diag_orthogonal = Certainty::NumericalNo;
  DiagRule rule_fired = DiagRule::Oracle;
  std::optional<HermitianMatrix> witness;  // zero-diagonal M in the order interval
  std::optional<RVector> refuting_diagonal;  // d with ||H + diag(d)||_tr < ||H||_tr
  double trace_norm = 0.0;
  double refuted_value = 0.0;  // ||H + diag(d)||_tr for the refuting diagonal
};

struct DiagConfig {
  double zero_tol = -1.0;     // spectral classification, < 0 for the default policy
  double tol = 1e-9;          // diagonal inequalities and witness checks
  double feasibility_tol = 1e-9;
  int feasibility_max_iter = 20000;
  double oracle_tol = 1e-9;   // decrease below ||H||_tr - oracle_tol * max(1, ||H||_tr) refutes
  DiagonalShiftConfig oracle;
};

/// P+_jj <= 1/2 and P-_jj <= 1/2 for every j.
bool check_psd_diag(const HermitianMatrix& h, double tol = 1e-9, double zero_tol = -1.0);
bool check_psd_diag(const SpectralSplit& split, double tol = 1e-9);

/// Orthogonality to every diagonal matrix: necessary filter, then exact
/// sufficient rules, then the zero-diagonal feasibility search and finally the
/// convex oracle.
DiagVerdict check_all_diag(const HermitianMatrix& h, const DiagConfig& cfg = {});

/// Dykstra alternating projections between the order interval
/// {P+ - P- + P0 X P0 : -I <= X <= I} and the zero-diagonal subspace.
/// Returns M from the order interval with max |M_jj| <= tol, or nothing when
/// max_iter is exhausted (inconclusive, not a refutation).
std::optional<HermitianMatrix> feasibility_zero_diag(const SpectralSplit& split, double tol = 1e-9,
                                                     int max_iter = 20000);

/// Minimises d -> ||H + diag(d)||_tr.
DiagonalShiftResult min_over_diagonal(const HermitianMatrix& h, const DiagonalShiftConfig& cfg = {});

/// Zero-diagonal witness for a rank-one H = +-v v* whose entries satisfy
/// max |v_j|^2 <= ||v||^2 / 2: M = +-(v v* - w w*) / ||v||^2 with |w_j| = |v_j|
/// and v* w = 0. Empty when the polygon inequality fails.
std::optional<CMatrix> rank_one_zero_diag_witness(const CVector& v, double tol = 1e-12);

}  // namespace bjtrace
