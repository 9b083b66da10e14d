#include "bjtrace/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <omp.h>

namespace bjtrace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::vector<int> unrank_combination(int n, int k, std::uint64_t rank) {
  std::vector<int> c;
  c.reserve(k);
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int v = next; v < n; ++v) {
      const std::uint64_t below = binomial(n - v - 1, k - slot - 1);
      if (rank < below) {
        c.push_back(v);
        next = v + 1;
        break;
      }
      rank -= below;
    }
  }
  return c;
}

namespace {

bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

double submatrix_norm(const CMatrix& a, const std::vector<int>& idx, CMatrix& scratch) {
  const int k = static_cast<int>(idx.size());
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) scratch(r, c) = a(idx[r], idx[c]);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(scratch, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct Best {
  double value = -1.0;
  std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();

  void offer(double v, std::uint64_t r) {
    if (v > value || (v == value && r < rank)) {
      value = v;
      rank = r;
    }
  }
};

// Scans ranks [begin, end) in lexicographic order.
Best scan_range(const CMatrix& a, int k, std::uint64_t begin, std::uint64_t end) {
  Best best;
  if (begin >= end) return best;
  const int n = static_cast<int>(a.rows());
  CMatrix scratch(k, k);
  std::vector<int> c = unrank_combination(n, k, begin);
  for (std::uint64_t r = begin; r < end; ++r) {
    best.offer(submatrix_norm(a, c, scratch), r);
    next_combination(c, n);
  }
  return best;
}

}  // namespace

SubmatrixMax max_principal_submatrix_norm(const CMatrix& a, int k, Execution ex) {
  const int n = static_cast<int>(a.rows());
  const std::uint64_t total = binomial(n, k);
  Best best;
  if (ex == Execution::Serial) {
    best = scan_range(a, k, 0, total);
  } else {
#pragma omp parallel
    {
      const std::uint64_t threads = static_cast<std::uint64_t>(omp_get_num_threads());
      const std::uint64_t t = static_cast<std::uint64_t>(omp_get_thread_num());
      const std::uint64_t chunk = (total + threads - 1) / threads;
      const Best local = scan_range(a, k, std::min(total, t * chunk), std::min(total, (t + 1) * chunk));
#pragma omp critical
      best.offer(local.value, local.rank);
    }
  }
  SubmatrixMax out;
  out.value = best.value;
  out.indices = unrank_combination(n, k, best.rank);
  out.subsets = total;
  return out;
}

namespace {

// Contracts op against the second factor: C[(a,i),(a2,j)] =
// sum_{b,b2} conj(q[b,i]) op[(a,b),(a2,b2)] q[b2,j].
CMatrix contract_second(const CMatrix& op, const CMatrix& q, int m, int n) {
  const int k = static_cast<int>(q.cols());
  CMatrix c(m * k, m * k);
  for (int a = 0; a < m; ++a)
    for (int a2 = 0; a2 < m; ++a2)
      c.block(a * k, a2 * k, k, k).noalias() = q.adjoint() * (op.block(a * n, a2 * n, n, n) * q);
  return c;
}

// Reorders the (a, b) row/column layout into (b, a).
CMatrix swap_factors(const CMatrix& op, int m, int n) {
  CMatrix s(m * n, m * n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b)
      for (int a2 = 0; a2 < m; ++a2)
        for (int b2 = 0; b2 < n; ++b2) s(b * m + a, b2 * m + a2) = op(a * n + b, a2 * n + b2);
  return s;
}

// Top eigenpair of the contracted operator, reshaped to a d x k factor.
double top_factor(const CMatrix& c, int d, int k, CMatrix& factor) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(c);
  const Eigen::Index top = es.eigenvalues().size() - 1;
  const CVector v = es.eigenvectors().col(top);
  factor.resize(d, k);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < k; ++i) factor(a, i) = v[a * k + i];
  return es.eigenvalues()[top];
}

// Replaces the columns of q by an orthonormal basis of a space containing them.
void orthonormalize(CMatrix& q) {
  const int rows = static_cast<int>(q.rows()), cols = static_cast<int>(q.cols());
  Eigen::HouseholderQR<CMatrix> qr(q);
  q = qr.householderQ() * CMatrix::Identity(rows, cols);
}

SeesawRun seesaw_single(const CMatrix& op, const CMatrix& op_swapped, int m, int n, int k, std::uint64_t seed,
                        int restart, const SeesawConfig& cfg) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal;
  auto gaussian = [&](int r, int c) {
    CMatrix g(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) {
        const double re = normal(gen);
        const double im = normal(gen);
        g(i, j) = Complex(re, im);
      }
    return g;
  };

  SeesawRun run;
  run.x = gaussian(m, k);
  run.y = gaussian(n, k);
  double previous = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iter; ++it) {
    run.iterations = it + 1;
    // Each half-step fixes one factor (orthonormalised, so the map to v is an
    // isometry) and takes the top eigenvector of the contracted operator; the
    // current v stays feasible, so the objective cannot decrease.
    orthonormalize(run.y);
    const double after_x = top_factor(contract_second(op, run.y, m, n), m, k, run.x);
    if (cfg.record_history) run.history.push_back(after_x);

    orthonormalize(run.x);
    const double value = top_factor(contract_second(op_swapped, run.x, n, m), n, k, run.y);
    if (cfg.record_history) run.history.push_back(value);
    run.value = value;
    if (value - previous <= cfg.tol * std::max(1.0, std::abs(value))) break;
    previous = value;
  }
  return run;
}

}  // namespace

std::vector<SeesawRun> seesaw_restarts(const CMatrix& op, int m, int n, int k, int restarts, std::uint64_t seed,
                                       const SeesawConfig& cfg, Execution ex) {
  const CMatrix swapped = swap_factors(op, m, n);
  std::vector<SeesawRun> runs(std::max(0, restarts));
  if (ex == Execution::Serial) {
    for (int r = 0; r < restarts; ++r) runs[r] = seesaw_single(op, swapped, m, n, k, seed, r, cfg);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) runs[r] = seesaw_single(op, swapped, m, n, k, seed, r, cfg);
  }
  return runs;
}

int best_run(const std::vector<SeesawRun>& runs) {
  int best = -1;
  for (int r = 0; r < static_cast<int>(runs.size()); ++r)
    if (best < 0 || runs[r].value > runs[best].value) best = r;
  return best;
}

}  // namespace bjtrace
