#pragma once

// Data-parallel kernels. Each has an OpenMP implementation and a serial
// reference selected by `Execution`; both produce bit-identical results
// because every work item is computed independently and merged with a fixed
// tie-breaking rule.

#include <cstdint>
#include <vector>

#include "bjtrace/hermitian.hpp"

namespace bjtrace {

enum class Execution { Serial, Parallel };

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// The combination of {0..n-1} with lexicographic rank `rank`.
std::vector<int> unrank_combination(int n, int k, std::uint64_t rank);

struct SubmatrixMax {
  double value = 0.0;
  std::vector<int> indices;  // lexicographically smallest maximiser
  std::uint64_t subsets = 0;
};

/// max over all k-element index sets S of the operator norm of A[S, S].
SubmatrixMax max_principal_submatrix_norm(const CMatrix& a, int k, Execution ex = Execution::Parallel);

struct SeesawConfig {
  int max_iter = 2000;
  double tol = 1e-14;  // stop when one full sweep gains less than tol * max(1, value)
  bool record_history = false;
};

/// One see-saw restart maximising <v|X|v> over v = sum_{i<k} x_i (x) y_i.
struct SeesawRun {
  double value = 0.0;
  CMatrix x;  // m x k, columns x_i
  CMatrix y;  // n x k, columns y_i (orthonormal)
  int iterations = 0;
  std::vector<double> history;  // value after every half-step when recorded
};

/// Runs `restarts` independent see-saw ascents on the (m n) x (m n) operator
/// `op` (row index a * n + b for a < m, b < n). Restart r draws its Gaussian
/// start from a generator seeded with (seed, r).
std::vector<SeesawRun> seesaw_restarts(const CMatrix& op, int m, int n, int k, int restarts, std::uint64_t seed,
                                       const SeesawConfig& cfg = {}, Execution ex = Execution::Parallel);

/// Index of the best run; ties go to the lowest index.
int best_run(const std::vector<SeesawRun>& runs);

}  // namespace bjtrace
