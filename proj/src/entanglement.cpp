#include "bjtrace/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bjtrace {

namespace {

int product(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) p *= d;
  return static_cast<int>(p);
}

// Row-major digits: system 0 is the most significant.
std::vector<int> digits(int index, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
    out[s] = index % dims[s];
    index /= dims[s];
  }
  return out;
}

int compose(const std::vector<int>& dig, const std::vector<int>& dims) {
  int index = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) index = index * dims[s] + dig[s];
  return index;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

void BipartiteOperator::validate() const {
  if (dims.empty() || dims.size() != side_labels.size())
    throw Error(ErrorKind::BadInput, "every subsystem needs exactly one side label");
  for (int d : dims)
    if (d < 1) throw Error(ErrorKind::BadInput, "subsystem dimensions must be positive");
  if (product(dims) != matrix.dim()) {
    std::ostringstream os;
    os << "subsystem dimensions multiply to " << product(dims) << " but the matrix is " << matrix.dim() << " x "
       << matrix.dim();
    throw Error(ErrorKind::BadInput, os.str());
  }
}

int BipartiteOperator::dim_a() const {
  int p = 1;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (side_labels[s] == Side::A) p *= dims[s];
  return p;
}

int BipartiteOperator::dim_b() const {
  int p = 1;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (side_labels[s] == Side::B) p *= dims[s];
  return p;
}

bool BipartiteOperator::canonical() const {
  return std::is_partitioned(side_labels.begin(), side_labels.end(), [](Side s) { return s == Side::A; });
}

BipartiteOperator bipartite(HermitianMatrix x, int m, int n) {
  BipartiteOperator op{std::move(x), {m, n}, {Side::A, Side::B}};
  op.validate();
  return op;
}

CVector SchmidtWitness::assemble() const {
  if (x_vectors.empty()) return CVector();
  const Eigen::Index m = x_vectors.front().size(), n = y_vectors.front().size();
  CVector v = CVector::Zero(m * n);
  for (std::size_t i = 0; i < x_vectors.size(); ++i)
    for (Eigen::Index a = 0; a < m; ++a) v.segment(a * n, n) += x_vectors[i][a] * y_vectors[i];
  return v;
}

bool SchmidtWitness::verify(const HermitianMatrix& x, double tol) const {
  if (x_vectors.size() != y_vectors.size() || x_vectors.empty()) return false;
  const CVector v = assemble();
  if (v.size() != x.dim()) return false;
  if (std::abs(v.norm() - 1.0) > tol) return false;
  const double value_now = v.dot(x.matrix() * v).real();
  return std::abs(value_now - value) <= tol;
}

CVector max_entangled_state(int n) {
  if (n < 1) throw Error(ErrorKind::DomainError, "maximally entangled state needs n >= 1");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n) * n);
  for (int j = 0; j < n; ++j) v[j * n + j] = 1.0 / std::sqrt(static_cast<double>(n));
  return v;
}

BipartiteOperator werner_state(int n) {
  if (n < 2) throw Error(ErrorKind::DomainError, "Werner state needs n >= 2");
  const int d = n * n;
  CMatrix swap = CMatrix::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) swap(i * n + j, j * n + i) = 1.0;
  const CMatrix rho = (CMatrix::Identity(d, d) - (2.0 / n) * swap) / static_cast<double>(n * n - 2);
  return bipartite(HermitianMatrix(rho), n, n);
}

HermitianMatrix partial_transpose(const BipartiteOperator& op) {
  op.validate();
  const int d = op.matrix.dim();
  CMatrix out(d, d);
  for (int row = 0; row < d; ++row) {
    const std::vector<int> rd = digits(row, op.dims);
    for (int col = 0; col < d; ++col) {
      std::vector<int> r2 = rd, c2 = digits(col, op.dims);
      for (std::size_t s = 0; s < op.dims.size(); ++s)
        if (op.side_labels[s] == Side::B) std::swap(r2[s], c2[s]);
      out(compose(r2, op.dims), compose(c2, op.dims)) = op.matrix(row, col);
    }
  }
  return HermitianMatrix(out);
}

BipartiteOperator reorder_systems(const BipartiteOperator& op, const std::vector<int>& perm) {
  op.validate();
  const int systems = static_cast<int>(op.dims.size());
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(systems);
  std::iota(expected.begin(), expected.end(), 0);
  if (sorted != expected) throw Error(ErrorKind::BadPermutation, "not a permutation of the subsystem indices");

  std::vector<int> new_dims(systems);
  std::vector<Side> new_labels(systems);
  for (int i = 0; i < systems; ++i) {
    new_dims[i] = op.dims[perm[i]];
    new_labels[i] = op.side_labels[perm[i]];
  }
  // source[p] is the old basis index that lands at new basis index p.
  const int d = op.matrix.dim();
  std::vector<int> source(d);
  std::vector<int> old_digits(systems);
  for (int p = 0; p < d; ++p) {
    const std::vector<int> nd = digits(p, new_dims);
    for (int i = 0; i < systems; ++i) old_digits[perm[i]] = nd[i];
    source[p] = compose(old_digits, op.dims);
  }
  CMatrix out(d, d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) out(p, q) = op.matrix(source[p], source[q]);
  return BipartiteOperator{HermitianMatrix(out), new_dims, new_labels};
}

std::vector<int> canonical_order(const std::vector<Side>& labels) {
  std::vector<int> perm;
  for (int pass = 0; pass < 2; ++pass)
    for (int s = 0; s < static_cast<int>(labels.size()); ++s)
      if ((labels[s] == Side::A) == (pass == 0)) perm.push_back(s);
  return perm;
}

BipartiteOperator build_pr(int n, int r, const BuildBudget& budget) {
  if (n < 2 || r < 1) throw Error(ErrorKind::DomainError, "P_r needs n >= 2 and r >= 1");
  double dim = 1.0;
  for (int i = 0; i < r; ++i) dim *= static_cast<double>(n) * n;
  if (dim > budget.max_dim) {
    std::ostringstream os;
    os << "P_r for n = " << n << ", r = " << r << " has dimension " << dim << ", above the budget of "
       << budget.max_dim;
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
  const CVector phi = max_entangled_state(n);
  const CMatrix p1 = phi * phi.adjoint();
  const CMatrix i1 = CMatrix::Identity(n * n, n * n);

  // Interleaved layout (A B)(A B)...; each recursion step prepends one pair.
  CMatrix p = p1;
  std::vector<int> dims{n, n};
  std::vector<Side> labels{Side::A, Side::B};
  for (int step = 2; step <= r; ++step) {
    const CMatrix ir = CMatrix::Identity(p.rows(), p.cols());
    p = kron(i1 - p1, p) + kron(p1, ir - p);
    dims.insert(dims.begin(), {n, n});
    labels.insert(labels.begin(), {Side::A, Side::B});
  }
  BipartiteOperator interleaved{HermitianMatrix(p), dims, labels};
  return reorder_systems(interleaved, canonical_order(labels));
}

SchmidtWitness sk_norm_lower_bound(const BipartiteOperator& x, int k, const SkConfig& cfg) {
  x.validate();
  const BipartiteOperator op = x.canonical() ? x : reorder_systems(x, canonical_order(x.side_labels));
  const int m = op.dim_a(), n = op.dim_b();
  if (k < 1 || k > std::min(m, n)) {
    std::ostringstream os;
    os << "Schmidt rank " << k << " outside [1, " << std::min(m, n) << "]";
    throw Error(ErrorKind::DomainError, os.str());
  }
  const std::vector<SeesawRun> runs =
      seesaw_restarts(op.matrix.matrix(), m, n, k, std::max(1, cfg.restarts), cfg.seed, cfg.seesaw, cfg.execution);
  const SeesawRun& best = runs[best_run(runs)];

  SchmidtWitness w;
  for (int i = 0; i < k; ++i) {
    w.x_vectors.emplace_back(best.x.col(i));
    w.y_vectors.emplace_back(best.y.col(i));
  }
  // Normalise and recompute the value from the assembled vector, so the
  // reported bound is exactly what the witness attains.
  const double nrm = w.assemble().norm();
  for (auto& y : w.y_vectors) y /= nrm;
  const CVector v = w.assemble();
  w.value = v.dot(op.matrix.matrix() * v).real();
  return w;
}

const char* to_string(KEntVerdict v) { return v == KEntVerdict::RefutedNo ? "RefutedNo" : "ConsistentYes"; }

KEntResult is_max_k_entangled(const DensityMatrix& rho, int m, int n, int k, const SkConfig& cfg, double tol) {
  const BipartiteOperator p = bipartite(HermitianMatrix(rho.range_projection()), m, n);
  KEntResult out;
  out.tol = tol;
  out.witness = sk_norm_lower_bound(p, k, cfg);
  out.verdict = out.witness.value > out.threshold + tol ? KEntVerdict::RefutedNo : KEntVerdict::ConsistentYes;
  return out;
}

int ent_rank_bound(int m, int n, int k) {
  const int lo = std::min(m, n);
  if (k < 1 || k >= lo) {
    std::ostringstream os;
    os << "rank bound needs 1 <= k < min(m, n) (got m = " << m << ", n = " << n << ", k = " << k << ")";
    throw Error(ErrorKind::DomainError, os.str());
  }
  const long long num = static_cast<long long>(m) * n * (lo - 2 * k + 1);
  const long long den = 2LL * (lo - k);
  const long long first = num < 0 ? -((-num + den - 1) / den) : num / den;
  const long long second = static_cast<long long>(m + 1 - 2 * k) * (n + 1 - 2 * k);
  return static_cast<int>(std::max(0LL, std::min(first, second)));
}

const char* to_string(UndistillVerdict v) { return v == UndistillVerdict::Refuted ? "REFUTED" : "CONSISTENT"; }

UndistillReport undistillability_report(int n, int r, const SkConfig& cfg, const BuildBudget& budget, double tol) {
  const BipartiteOperator p = build_pr(n, r, budget);
  UndistillReport rep;
  rep.n = n;
  rep.r = r;
  rep.dim = p.matrix.dim();
  rep.tol = tol;
  rep.projection_rank = static_cast<int>(std::lround(p.matrix.diag().sum()));
  rep.witness = sk_norm_lower_bound(p, 2, cfg);
  rep.bound = rep.witness.value;
  rep.witness_verified = rep.witness.verify(p.matrix);
  std::ostringstream os;
  if (rep.witness_verified && rep.bound > rep.threshold + tol) {
    rep.verdict = UndistillVerdict::Refuted;
    os << "a Schmidt-rank-2 vector attains " << rep.bound << " > 1/2 on P_" << r << ", so the Werner state with n = "
       << n << " is " << r << "-copy distillable";
  } else {
    rep.verdict = UndistillVerdict::Consistent;
    os << "no Schmidt-rank-2 vector above 1/2 was found on P_" << r
       << "; this is a one-sided search and does not establish " << r << "-copy undistillability";
  }
  rep.statement = os.str();
  return rep;
}

}  // namespace bjtrace
