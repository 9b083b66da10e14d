#pragma once

#include <optional>

#include "bjtrace/hermitian.hpp"

namespace bjtrace {

/// Certificate that H is Birkhoff-James orthogonal to B in the trace norm:
/// ||m|| <= 1, Tr(H m) = ||H||_tr and Tr(B m) = 0.
struct BJWitness {
  HermitianMatrix m;
  double attained_trace_norm = 0.0;  // Tr(H m)
  double b_pairing = 0.0;            // Tr(B m)
};

struct BJVerdict {
  bool orthogonal = false;
  double margin_plus = 0.0;   // Tr(B)/2 - Tr(B P+)
  double margin_minus = 0.0;  // Tr(B)/2 - Tr(B P-)
  // ||P0 B P0||_tr - |Tr(B (P+ - P-))|; the general criterion is slack >= -tol.
  double general_slack = 0.0;
  double decision_tol = 0.0;
  std::optional<BJWitness> witness;
};

struct Tolerances {
  double zero_tol = -1.0;      // < 0: n * eps * ||H||
  double decision_tol = -1.0;  // < 0: 1e-9 * max(1, Tr(B)) (||B||_tr for indefinite B)
};

/// Exact criterion for positive semidefinite B: Tr(B P+) <= Tr(B)/2 and
/// Tr(B P-) <= Tr(B)/2. Throws NotPsd when B has a negative eigenvalue below
/// -decision_tol * max(1, ||B||).
BJVerdict check_bj_psd(const HermitianMatrix& h, const HermitianMatrix& b, const Tolerances& tol = {});

/// Witness built from the eigenprojections:
///   alpha = Tr(B(I - 2P+)), beta = Tr(B(I - 2P-)),
///   alpha = 0 -> 2P+ - I, beta = 0 -> I - 2P-, otherwise the convex blend
///   (beta (2P+ - I) + alpha (I - 2P-)) / (alpha + beta).
/// Throws NotOrthogonal when alpha or beta is negative beyond tolerance.
BJWitness witness_psd(const HermitianMatrix& h, const HermitianMatrix& b, const Tolerances& tol = {});

/// Criterion for arbitrary Hermitian B. Every M in the order interval
/// 2P+ - I <= M <= I - 2P- has the form P+ - P- + P0 X P0 with -I <= X <= I,
/// so Tr(BM) = 0 is attainable iff |Tr(B(P+ - P-))| <= ||P0 B P0||_tr.
/// The verdict carries a witness of that form whenever it is orthogonal.
BJVerdict check_bj_general(const HermitianMatrix& h, const HermitianMatrix& b, const Tolerances& tol = {});

struct LineSearchConfig {
  double half_width = -1.0;  // < 0: 4 ||H||_tr / max(||B||_tr, eps)
  double tol = 1e-12;        // relative width at which golden-section stops
  int max_iter = 400;
};

struct LineSearchResult {
  double lambda_star = 0.0;
  double min_value = 0.0;
  double base_value = 0.0;  // ||H||_tr
};

/// Golden-section minimisation of the convex map lambda -> ||H + lambda B||_tr.
/// The two half-lines are searched independently and merged by minimum.
/// Throws DegenerateDirection when B = 0.
LineSearchResult oracle_line_search(const HermitianMatrix& h, const HermitianMatrix& b, const LineSearchConfig& cfg = {});

/// Checks the four witness conditions: operator norm, attained trace norm,
/// zero pairing with B and the order interval 2P+ - I <= m <= I - 2P-.
/// Scalar conditions are judged relative to max(1, ||H||_tr) and max(1, ||B||_tr).
bool verify_witness(const HermitianMatrix& h, const HermitianMatrix& b, const BJWitness& w, double tol = 1e-9);

/// Order-interval membership only (no condition involving B).
bool in_order_interval(const SpectralSplit& split, const CMatrix& m, double tol);

}  // namespace bjtrace
