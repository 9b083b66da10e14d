#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bjtrace/hermitian.hpp"
#include "bjtrace/kernels.hpp"
#include "bjtrace/resource.hpp"

namespace bjtrace {

enum class Side { A, B };

/// A Hermitian matrix on a tensor product of subsystems, each tagged with the
/// side of the bipartite cut it belongs to.
struct BipartiteOperator {
  HermitianMatrix matrix;
  std::vector<int> dims;
  std::vector<Side> side_labels;

  /// Throws BadInput if the dims do not multiply to the matrix size or the label count differs.
  void validate() const;
  /// Product of the A-side (respectively B-side) dimensions.
  int dim_a() const;
  int dim_b() const;
  /// True when every A system precedes every B system.
  bool canonical() const;
};

/// Plain two-party operator with dims [m, n] and labels [A, B].
BipartiteOperator bipartite(HermitianMatrix x, int m, int n);

/// Unit vector v = sum_i x_i (x) y_i with at most k terms, and <v|X|v>.
struct SchmidtWitness {
  std::vector<CVector> x_vectors;
  std::vector<CVector> y_vectors;
  double value = 0.0;

  CVector assemble() const;
  /// Unit norm and value reproduction within tol.
  bool verify(const HermitianMatrix& x, double tol = 1e-9) const;
};

/// (1/sqrt(n)) sum_j e_j (x) e_j. DomainError for n < 1.
CVector max_entangled_state(int n);

/// (I - (2/n) Swap) / (n^2 - 2) on dims [n, n]. DomainError for n < 2.
BipartiteOperator werner_state(int n);

/// Transpose on every B-labelled subsystem.
HermitianMatrix partial_transpose(const BipartiteOperator& op);

/// Permutes subsystems: new system i is old system perm[i]. Throws BadPermutation.
BipartiteOperator reorder_systems(const BipartiteOperator& op, const std::vector<int>& perm);

/// Stable permutation that moves every A system before every B system.
std::vector<int> canonical_order(const std::vector<Side>& labels);

struct BuildBudget {
  int max_dim = 1024;
};

/// P_1 = |phi+><phi+|, P_r = (I - P_1) (x) P_{r-1} + P_1 (x) (I - P_{r-1}),
/// returned in canonical order A^r | B^r. Throws BudgetExceeded or DomainError.
BipartiteOperator build_pr(int n, int r, const BuildBudget& budget = {});

struct SkConfig {
  int restarts = 64;
  std::uint64_t seed = 0;
  SeesawConfig seesaw;
  Execution execution = Execution::Parallel;
};

/// Best see-saw value of <v|X|v> over unit v of Schmidt rank <= k across the
/// A|B cut; the operator is brought to canonical order first. DomainError
/// unless 1 <= k <= min(dim_a, dim_b).
SchmidtWitness sk_norm_lower_bound(const BipartiteOperator& x, int k, const SkConfig& cfg = {});

enum class KEntVerdict { RefutedNo, ConsistentYes };
const char* to_string(KEntVerdict v);

struct KEntResult {
  KEntVerdict verdict = KEntVerdict::ConsistentYes;
  SchmidtWitness witness;
  double threshold = 0.5;
  double tol = 1e-6;
};

/// Refuted when the S(k) lower bound of the range projection exceeds 1/2 + tol.
KEntResult is_max_k_entangled(const DensityMatrix& rho, int m, int n, int k, const SkConfig& cfg = {},
                              double tol = 1e-6);

/// floor(min(mn (min - 2k + 1) / (2 (min - k)), (m + 1 - 2k)(n + 1 - 2k))), clamped
/// at 0, with min = min(m, n). DomainError unless 1 <= k < min(m, n).
int ent_rank_bound(int m, int n, int k);

enum class UndistillVerdict { Refuted, Consistent };
const char* to_string(UndistillVerdict v);

struct UndistillReport {
  int n = 0;
  int r = 0;
  int dim = 0;
  int projection_rank = 0;
  double bound = 0.0;
  double threshold = 0.5;
  double tol = 1e-6;
  UndistillVerdict verdict = UndistillVerdict::Consistent;
  SchmidtWitness witness;
  bool witness_verified = false;
  std::string statement;
};

/// Lower-bounds ||P_r||_S(2) across A^r | B^r. A bound above 1/2 + tol refutes
/// r-copy undistillability of the Werner state; otherwise nothing is claimed.
UndistillReport undistillability_report(int n, int r, const SkConfig& cfg = {}, const BuildBudget& budget = {},
                                        double tol = 1e-6);

}  // namespace bjtrace
