#pragma once

#include <optional>

#include "bjtrace/hermitian.hpp"

namespace bjtrace {

struct DiagonalShiftConfig {
  double mu_start = -1.0;  // < 0: 0.1 * max(1, ||A||)
  double mu_end = 1e-12;   // relative to max(1, ||A||)
  double mu_factor = 0.1;
  int newton_iters = 60;   // per smoothing level
  double grad_tol = 1e-13; // Newton decrement stopping threshold (relative)
};

struct DiagonalShiftResult {
  RVector d;               // minimiser
  double value = 0.0;      // ||A + diag(d)||_tr, exact (unsmoothed)
  double start_value = 0.0;
  int iterations = 0;
  bool low_confidence = false;
};

/// Minimises d -> ||A + diag(d)||_tr, optionally over the box lower <= d <= upper.
///
/// The trace norm is replaced by the smooth spectral function
/// sum_i sqrt(lambda_i^2 + mu^2), which overestimates it by at most n * mu, and
/// minimised by (projected) Newton steps while mu is driven to zero. Gradient
/// and Hessian come from the first and second divided differences of
/// x -> sqrt(x^2 + mu^2) in the eigenbasis of A + diag(d).
///
/// The returned value never exceeds the value at the (projected) zero start.
DiagonalShiftResult minimize_diagonal_shift(const HermitianMatrix& a,
                                            const std::optional<RVector>& lower = std::nullopt,
                                            const std::optional<RVector>& upper = std::nullopt,
                                            const DiagonalShiftConfig& cfg = {});

}  // namespace bjtrace
