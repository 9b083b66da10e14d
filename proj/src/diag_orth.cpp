#include "bjtrace/diag_orth.hpp"

#include <algorithm>
#include <cmath>

#include "bjtrace/bj_orth.hpp"

namespace bjtrace {

const char* to_string(Certainty c) {
  switch (c) {
    case Certainty::ProvenYes: return "ProvenYes";
    case Certainty::ProvenNo: return "ProvenNo";
    case Certainty::NumericalYes: return "NumericalYes";
    case Certainty::NumericalNo: return "NumericalNo";
  }
  return "?";
}

const char* to_string(DiagRule r) {
  switch (r) {
    case DiagRule::PsdDiagonalFilter: return "PsdDiagonalFilter";
    case DiagRule::TwoByTwo: return "TwoByTwo";
    case DiagRule::Invertible: return "Invertible";
    case DiagRule::PsdSmallDim: return "PsdSmallDim";
    case DiagRule::PsdRankCase: return "PsdRankCase";
    case DiagRule::ConstantDiagonalRange: return "ConstantDiagonalRange";
    case DiagRule::Feasibility: return "Feasibility";
    case DiagRule::Oracle: return "Oracle";
  }
  return "?";
}

bool check_psd_diag(const SpectralSplit& split, double tol) {
  const double worst = std::max(split.p_plus.diagonal().real().maxCoeff(), split.p_minus.diagonal().real().maxCoeff());
  return worst <= 0.5 + tol;
}

bool check_psd_diag(const HermitianMatrix& h, double tol, double zero_tol) {
  return check_psd_diag(spectral_split(h, zero_tol), tol);
}

std::optional<CMatrix> rank_one_zero_diag_witness(const CVector& v, double tol) {
  const int n = static_cast<int>(v.size());
  const RVector len = v.cwiseAbs2();
  const double total = len.sum();
  if (total == 0.0) return CMatrix::Zero(n, n);
  if (len.maxCoeff() > 0.5 * total * (1.0 + tol)) return std::nullopt;

  // Split the lengths |v_j|^2 into three consecutive groups, each at most half
  // the total, so that the group sums close up as a triangle in the plane.
  std::vector<int> group(n, 2);
  double s1 = 0.0;
  int j = 0;
  while (j < n && s1 + len[j] <= 0.5 * total) {
    group[j] = 0;
    s1 += len[j++];
  }
  double s2 = 0.0;
  if (j < n) {
    group[j] = 1;
    s2 = len[j++];
  }
  const double s3 = std::max(0.0, total - s1 - s2);

  const double x = (s1 * s1 + s3 * s3 - s2 * s2) / (2.0 * s1);
  const double y = std::sqrt(std::max(0.0, s3 * s3 - x * x));
  const Complex sides[3] = {Complex(s1, 0.0), Complex(x - s1, y), Complex(-x, -y)};
  Complex phase[3];
  for (int g = 0; g < 3; ++g) phase[g] = std::abs(sides[g]) > 0 ? sides[g] / std::abs(sides[g]) : Complex(1.0, 0.0);

  CVector w(n);
  for (int k = 0; k < n; ++k) w[k] = v[k] * phase[group[k]];
  return CMatrix((v * v.adjoint() - w * w.adjoint()) / total);
}

namespace {

// Witness for a semidefinite H with range projection P, following the rank:
// rank 0 -> 0, rank 1 -> polygon construction, constant diagonal c ->
// (P - cI)/(1 - c), which has zero diagonal and spectrum {1, -c/(1-c)}.
std::optional<CMatrix> semidefinite_witness(const SpectralSplit& s, double tol) {
  const int n = s.dim();
  const bool positive = s.counts.mu_minus == 0;
  const int rank = positive ? s.counts.mu_plus : s.counts.mu_minus;
  const double sign = positive ? 1.0 : -1.0;
  if (rank == 0) return CMatrix::Zero(n, n);
  if (rank == 1) {
    const CVector v = positive ? CVector(s.eigenvectors.col(0)) : CVector(s.eigenvectors.col(n - 1));
    auto m = rank_one_zero_diag_witness(v, tol);
    if (!m) return std::nullopt;
    return CMatrix(sign * *m);
  }
  const CMatrix& p = positive ? s.p_plus : s.p_minus;
  const RVector diag = p.diagonal().real();
  const double c = diag.mean();
  if ((diag.array() - c).abs().maxCoeff() > tol || c > 0.5 + tol) return std::nullopt;
  const CMatrix id = CMatrix::Identity(n, n);
  return CMatrix(sign * (p - c * id) / (1.0 - c));
}

bool accept_witness(const SpectralSplit& s, const CMatrix& m, double tol) {
  if (m.diagonal().cwiseAbs().maxCoeff() > tol) return false;
  return in_order_interval(s, m, tol);
}

}  // namespace

std::optional<HermitianMatrix> feasibility_zero_diag(const SpectralSplit& split, double tol, int max_iter) {
  const CMatrix base = split.signature();
  const CMatrix kernel = split.kernel_basis();
  auto diag_gap = [](const CMatrix& m) { return m.diagonal().cwiseAbs().maxCoeff(); };
  if (kernel.cols() == 0) {
    if (diag_gap(base) <= tol) return HermitianMatrix(base);
    return std::nullopt;
  }

  auto project_interval = [&](const CMatrix& y) -> CMatrix {
    const CMatrix z = kernel.adjoint() * y * kernel;
    Eigen::SelfAdjointEigenSolver<CMatrix> es((z + z.adjoint()) / 2.0);
    const RVector clipped = es.eigenvalues().cwiseMax(-1.0).cwiseMin(1.0);
    const CMatrix x = es.eigenvectors() * clipped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return base + kernel * x * kernel.adjoint();
  };

  const int n = split.dim();
  CMatrix x = base;
  CMatrix p = CMatrix::Zero(n, n);
  CMatrix q = CMatrix::Zero(n, n);
  for (int it = 0; it < max_iter; ++it) {
    const CMatrix y = project_interval(x + p);
    if (diag_gap(y) <= tol) return HermitianMatrix(y);
    p = x + p - y;
    CMatrix next = y + q;
    next.diagonal().setZero();
    q = y + q - next;
    x = next;
  }
  return std::nullopt;
}

DiagonalShiftResult min_over_diagonal(const HermitianMatrix& h, const DiagonalShiftConfig& cfg) {
  return minimize_diagonal_shift(h, std::nullopt, std::nullopt, cfg);
}

DiagVerdict check_all_diag(const HermitianMatrix& h, const DiagConfig& cfg) {
  const SpectralSplit s = spectral_split(h, cfg.zero_tol);
  const int n = s.dim();
  DiagVerdict v;
  v.trace_norm = s.eigenvalues.cwiseAbs().sum();
  v.psd_diag_orthogonal = check_psd_diag(s, cfg.tol);

  if (!v.psd_diag_orthogonal) {
    v.all_diag_orthogonal = Certainty::ProvenNo;
    v.rule_fired = DiagRule::PsdDiagonalFilter;
    // The worst diagonal entry names an e_j e_j* that H is not orthogonal to;
    // the line search along it produces an explicit decreasing diagonal.
    const RVector worst = s.p_plus.diagonal().real().cwiseMax(s.p_minus.diagonal().real());
    Eigen::Index j = 0;
    worst.maxCoeff(&j);
    RVector e = RVector::Zero(n);
    e[j] = 1.0;
    const LineSearchResult ls = oracle_line_search(h, HermitianMatrix::diagonal(e));
    if (ls.min_value < v.trace_norm) {
      v.refuting_diagonal = RVector(ls.lambda_star * e);
      v.refuted_value = ls.min_value;
    }
    return v;
  }

  const bool semidefinite = s.counts.mu_minus == 0 || s.counts.mu_plus == 0;
  const int rank = s.counts.mu_plus + s.counts.mu_minus;
  const double wtol = std::max(2.0 * cfg.tol, 1e-10);

  std::optional<CMatrix> candidate;
  DiagRule rule = DiagRule::Feasibility;
  if (n == 2) {
    rule = DiagRule::TwoByTwo;
    candidate = s.counts.mu_zero == 0 ? std::optional<CMatrix>(s.signature()) : semidefinite_witness(s, wtol);
  } else if (s.counts.mu_zero == 0) {
    rule = DiagRule::Invertible;
    candidate = hermitian_polar_unitary(s).matrix();
  } else if (semidefinite && n <= 4) {
    rule = DiagRule::PsdSmallDim;
    candidate = semidefinite_witness(s, wtol);
  } else if (semidefinite && (rank == 1 || 2 * rank == n || rank == n)) {
    rule = DiagRule::PsdRankCase;
    candidate = semidefinite_witness(s, wtol);
  } else if (semidefinite) {
    const CMatrix& p = s.counts.mu_minus == 0 ? s.p_plus : s.p_minus;
    const RVector d = p.diagonal().real();
    if ((d.array() - d.mean()).abs().maxCoeff() <= wtol) {
      rule = DiagRule::ConstantDiagonalRange;
      candidate = semidefinite_witness(s, wtol);
    }
  }
  if (candidate && accept_witness(s, *candidate, wtol)) {
    v.all_diag_orthogonal = Certainty::ProvenYes;
    v.rule_fired = rule;
    v.witness = HermitianMatrix(*candidate);
    return v;
  }

  if (auto m = feasibility_zero_diag(s, cfg.feasibility_tol, cfg.feasibility_max_iter)) {
    v.all_diag_orthogonal = Certainty::NumericalYes;
    v.rule_fired = DiagRule::Feasibility;
    v.witness = *m;
    return v;
  }

  const DiagonalShiftResult best = min_over_diagonal(h, cfg.oracle);
  v.rule_fired = DiagRule::Oracle;
  if (best.value < v.trace_norm - cfg.oracle_tol * std::max(1.0, v.trace_norm)) {
    v.all_diag_orthogonal = Certainty::NumericalNo;
    v.refuting_diagonal = best.d;
    v.refuted_value = best.value;
  } else {
    v.all_diag_orthogonal = Certainty::NumericalYes;
  }
  return v;
}

}  // namespace bjtrace
