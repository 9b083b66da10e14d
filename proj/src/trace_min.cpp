#include "bjtrace/trace_min.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bjtrace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Smoothed {
  double value = 0.0;  // sum sqrt(lambda^2 + mu^2)
  double exact = 0.0;  // sum |lambda|
  RVector grad;
  Eigen::MatrixXd hess;
};

double dphi(double x, double mu) { return x / std::hypot(x, mu); }

double d2phi(double x, double mu) {
  const double r = std::hypot(x, mu);
  return mu * mu / (r * r * r);
}

// First divided difference of dphi, i.e. the Daleckii-Krein kernel.
double kernel(double a, double b, double mu) {
  const double gap = std::abs(a - b);
  if (gap > 1e-4 * std::max({std::abs(a), std::abs(b), mu})) return (dphi(a, mu) - dphi(b, mu)) / (a - b);
  return d2phi(0.5 * (a + b), mu);
}

double smoothed_value(const CMatrix& a, const RVector& d, double mu) {
  CMatrix m = a;
  m.diagonal() += d.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  double v = 0.0;
  for (double lam : es.eigenvalues()) v += std::hypot(lam, mu);
  return v;
}

Smoothed evaluate(const CMatrix& a, const RVector& d, double mu) {
  CMatrix m = a;
  m.diagonal() += d.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "eigensolver failed in diagonal-shift minimiser");
  const RVector& lam = es.eigenvalues();
  const CMatrix& u = es.eigenvectors();
  const int n = static_cast<int>(lam.size());

  Smoothed s;
  RVector first(n);
  for (int i = 0; i < n; ++i) {
    s.value += std::hypot(lam[i], mu);
    s.exact += std::abs(lam[i]);
    first[i] = dphi(lam[i], mu);
  }
  s.grad = u.cwiseAbs2() * first;

  CMatrix w(n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double g = std::sqrt(kernel(lam[i], lam[j], mu));
      w.col(i * n + j) = g * u.col(i).conjugate().cwiseProduct(u.col(j));
    }
  s.hess = (w * w.adjoint()).real();
  return s;
}

double exact_value(const CMatrix& a, const RVector& d) {
  CMatrix m = a;
  m.diagonal() += d.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

DiagonalShiftResult minimize_diagonal_shift(const HermitianMatrix& a, const std::optional<RVector>& lower,
                                            const std::optional<RVector>& upper, const DiagonalShiftConfig& cfg) {
  const int n = a.dim();
  const CMatrix& am = a.matrix();
  const RVector lo = lower.value_or(RVector::Constant(n, -kInf));
  const RVector hi = upper.value_or(RVector::Constant(n, kInf));
  if (lo.size() != n || hi.size() != n || (lo.array() > hi.array()).any())
    throw Error(ErrorKind::DomainError, "inconsistent diagonal bounds");
  auto project = [&](const RVector& x) -> RVector { return x.cwiseMax(lo).cwiseMin(hi); };

  const double scale = std::max(1.0, operator_norm(a));
  DiagonalShiftResult res;
  res.d = project(RVector::Zero(n));
  res.start_value = exact_value(am, res.d);
  res.value = res.start_value;

  RVector d = res.d;
  double mu = cfg.mu_start > 0 ? cfg.mu_start : 0.1 * scale;
  const double mu_end = cfg.mu_end * scale;
  bool converged_last = false;

  while (true) {
    converged_last = false;
    for (int it = 0; it < cfg.newton_iters; ++it) {
      ++res.iterations;
      const Smoothed s = evaluate(am, d, mu);
      const RVector& g = s.grad;

      // Bertsekas-style active set: variables held at a bound by the gradient.
      const double eps_act = std::min(1e-9 * scale, (d - project(d - g)).norm());
      std::vector<int> free_idx;
      std::vector<bool> active(n, false);
      for (int k = 0; k < n; ++k) {
        active[k] = (d[k] <= lo[k] + eps_act && g[k] > 0) || (d[k] >= hi[k] - eps_act && g[k] < 0);
        if (!active[k]) free_idx.push_back(k);
      }

      RVector p = RVector::Zero(n);
      if (!free_idx.empty()) {
        const int nf = static_cast<int>(free_idx.size());
        Eigen::MatrixXd hf(nf, nf);
        RVector gf(nf);
        for (int r = 0; r < nf; ++r) {
          gf[r] = g[free_idx[r]];
          for (int c = 0; c < nf; ++c) hf(r, c) = s.hess(free_idx[r], free_idx[c]);
        }
        const double ridge = 1e-14 * std::max(1.0, hf.diagonal().cwiseAbs().maxCoeff());
        hf.diagonal().array() += ridge;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hf);
        RVector pf = ldlt.solve(-gf);
        if (ldlt.info() != Eigen::Success || !pf.allFinite() || pf.dot(gf) >= 0) pf = -gf;
        for (int r = 0; r < nf; ++r) p[free_idx[r]] = pf[r];
      }
      for (int k = 0; k < n; ++k)
        if (active[k]) p[k] = -g[k] / std::max(s.hess(k, k), 1e-12);

      const double decrement = -g.dot(project(d + p) - d);
      if (decrement <= cfg.grad_tol * std::max(1.0, s.value)) {
        converged_last = true;
        break;
      }

      double t = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        const RVector trial = project(d + t * p);
        const double fv = smoothed_value(am, trial, mu);
        if (fv <= s.value + 1e-4 * g.dot(trial - d)) {
          d = trial;
          moved = true;
          break;
        }
      }
      if (!moved) {
        converged_last = true;
        break;
      }
    }
    const double v = exact_value(am, d);
    if (v < res.value) {
      res.value = v;
      res.d = d;
    }
    if (mu <= mu_end) break;
    mu = std::max(mu * cfg.mu_factor, mu_end);
  }
  res.low_confidence = !converged_last;
  return res;
}

}  // namespace bjtrace
