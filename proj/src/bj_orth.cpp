#include "bjtrace/bj_orth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bjtrace {

namespace {

double psd_decision_tol(const HermitianMatrix& b, const Tolerances& tol) {
  if (tol.decision_tol >= 0) return tol.decision_tol;
  return default_numeric_tol(b.diag().sum());
}

void require_psd(const HermitianMatrix& b, double dtol) {
  const RVector ev = eigenvalues(b);
  const double lo = ev[ev.size() - 1];
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (lo < -dtol * scale) {
    std::ostringstream os;
    os << "B has eigenvalue " << lo << "; use the general criterion for indefinite B";
    throw Error(ErrorKind::NotPsd, os.str());
  }
}

BJWitness make_witness(const HermitianMatrix& h, const HermitianMatrix& b, CMatrix m) {
  HermitianMatrix mh(m);
  return BJWitness{mh, trace_product(h.matrix(), mh.matrix()), trace_product(b.matrix(), mh.matrix())};
}

BJWitness witness_from_split(const HermitianMatrix& h, const HermitianMatrix& b, const SpectralSplit& s, double dtol) {
  const int n = h.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  const double alpha = trace_product(b.matrix(), id - 2.0 * s.p_plus);
  const double beta = trace_product(b.matrix(), id - 2.0 * s.p_minus);
  if (alpha < -2.0 * dtol || beta < -2.0 * dtol) {
    std::ostringstream os;
    os << "alpha = " << alpha << ", beta = " << beta << "; both must be non-negative";
    throw Error(ErrorKind::NotOrthogonal, os.str());
  }
  if (std::abs(alpha) <= 2.0 * dtol) return make_witness(h, b, 2.0 * s.p_plus - id);
  if (std::abs(beta) <= 2.0 * dtol) return make_witness(h, b, id - 2.0 * s.p_minus);
  return make_witness(h, b, (beta * (2.0 * s.p_plus - id) + alpha * (id - 2.0 * s.p_minus)) / (alpha + beta));
}

// sign(C) for a Hermitian C, with the zero eigenspace mapped to 0.
CMatrix matrix_sign(const CMatrix& c) {
  if (c.rows() == 0) return c;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(c);
  const RVector& ev = es.eigenvalues();
  const double cut = c.rows() * std::numeric_limits<double>::epsilon() * std::max(1e-300, ev.cwiseAbs().maxCoeff());
  RVector sg(ev.size());
  for (int i = 0; i < ev.size(); ++i) sg[i] = ev[i] > cut ? 1.0 : (ev[i] < -cut ? -1.0 : 0.0);
  return es.eigenvectors() * sg.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

BJVerdict check_bj_psd(const HermitianMatrix& h, const HermitianMatrix& b, const Tolerances& tol) {
  const double dtol = psd_decision_tol(b, tol);
  require_psd(b, dtol);
  const SpectralSplit s = spectral_split(h, tol.zero_tol);
  BJVerdict v;
  v.decision_tol = dtol;
  const double half = 0.5 * b.diag().sum();
  v.margin_plus = half - trace_product(b.matrix(), s.p_plus);
  v.margin_minus = half - trace_product(b.matrix(), s.p_minus);
  const CMatrix k = s.kernel_basis();
  v.general_slack = (k.adjoint() * b.matrix() * k).trace().real() - std::abs(v.margin_plus - v.margin_minus);
  v.orthogonal = v.margin_plus >= -dtol && v.margin_minus >= -dtol;
  if (v.orthogonal) v.witness = witness_from_split(h, b, s, dtol);
  return v;
}

BJWitness witness_psd(const HermitianMatrix& h, const HermitianMatrix& b, const Tolerances& tol) {
  const double dtol = psd_decision_tol(b, tol);
  return witness_from_split(h, b, spectral_split(h, tol.zero_tol), dtol);
}

BJVerdict check_bj_general(const HermitianMatrix& h, const HermitianMatrix& b, const Tolerances& tol) {
  const SpectralSplit s = spectral_split(h, tol.zero_tol);
  const double dtol = tol.decision_tol >= 0 ? tol.decision_tol : default_numeric_tol(trace_norm(b));
  BJVerdict v;
  v.decision_tol = dtol;
  const double half = 0.5 * b.diag().sum();
  v.margin_plus = half - trace_product(b.matrix(), s.p_plus);
  v.margin_minus = half - trace_product(b.matrix(), s.p_minus);

  const double pairing = trace_product(b.matrix(), s.signature());
  const CMatrix k = s.kernel_basis();
  const CMatrix compressed = k.adjoint() * b.matrix() * k;
  double kernel_norm = 0.0;
  if (compressed.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(compressed, Eigen::EigenvaluesOnly);
    kernel_norm = es.eigenvalues().cwiseAbs().sum();
  }
  v.general_slack = kernel_norm - std::abs(pairing);
  // 2 * dtol matches the PSD criterion, whose two margins each carry dtol.
  v.orthogonal = v.general_slack >= -2.0 * dtol;
  if (v.orthogonal) {
    CMatrix m = s.signature();
    if (kernel_norm > 0.0) {
      const double t = std::clamp(-pairing / kernel_norm, -1.0, 1.0);
      m += k * (t * matrix_sign(compressed)) * k.adjoint();
    }
    v.witness = make_witness(h, b, m);
  }
  return v;
}

LineSearchResult oracle_line_search(const HermitianMatrix& h, const HermitianMatrix& b, const LineSearchConfig& cfg) {
  const double b_norm = trace_norm(b);
  if (b_norm == 0.0) throw Error(ErrorKind::DegenerateDirection, "direction B is the zero matrix");
  auto f = [&](double lam) { return trace_norm(h + b * lam); };

  LineSearchResult res;
  res.base_value = f(0.0);
  res.min_value = res.base_value;
  res.lambda_star = 0.0;

  double width = cfg.half_width > 0 ? cfg.half_width
                                     : 4.0 * res.base_value / std::max(b_norm, std::numeric_limits<double>::epsilon());
  if (width <= 0.0) width = 1.0 / b_norm;

  auto consider = [&](double lam, double val) {
    if (val < res.min_value || (val == res.min_value && std::abs(lam) < std::abs(res.lambda_star))) {
      res.min_value = val;
      res.lambda_star = lam;
    }
  };

  constexpr double inv_phi = 0.6180339887498949;
  for (double sign : {-1.0, 1.0}) {
    // Convexity: once f(w) >= f(0) every minimiser on this side lies in [0, w].
    double w = width;
    for (int grow = 0; grow < 64 && f(sign * w) < res.base_value; ++grow) w *= 2.0;
    double lo = 0.0, hi = w;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(sign * x1), f2 = f(sign * x2);
    consider(sign * x1, f1);
    consider(sign * x2, f2);
    for (int it = 0; it < cfg.max_iter && (hi - lo) > cfg.tol * w; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = f(sign * x1);
        consider(sign * x1, f1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = f(sign * x2);
        consider(sign * x2, f2);
      }
    }
  }
  return res;
}

bool in_order_interval(const SpectralSplit& s, const CMatrix& m, double tol) {
  const int n = s.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  const HermitianMatrix lower_gap(m - (2.0 * s.p_plus - id));
  const HermitianMatrix upper_gap((id - 2.0 * s.p_minus) - m);
  return min_eigenvalue(lower_gap) >= -tol && min_eigenvalue(upper_gap) >= -tol;
}

bool verify_witness(const HermitianMatrix& h, const HermitianMatrix& b, const BJWitness& w, double tol) {
  if (w.m.dim() != h.dim() || b.dim() != h.dim()) return false;
  if (operator_norm(w.m) > 1.0 + tol) return false;
  const double h_norm = trace_norm(h);
  if (std::abs(trace_product(h.matrix(), w.m.matrix()) - h_norm) > tol * std::max(1.0, h_norm)) return false;
  if (std::abs(trace_product(b.matrix(), w.m.matrix())) > tol * std::max(1.0, trace_norm(b))) return false;
  return in_order_interval(spectral_split(h), w.m.matrix(), tol);
}

}  // namespace bjtrace
