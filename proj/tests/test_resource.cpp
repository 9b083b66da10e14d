#include <doctest.h>

#include <numeric>

#include "bjtrace/bj_orth.hpp"
#include "bjtrace/diag_orth.hpp"
#include "bjtrace/resource.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace bjtrace;

namespace {

DensityMatrix uniform_pure(int n) { return DensityMatrix::pure(CVector::Ones(n)); }

DensityMatrix from(const CMatrix& m) { return DensityMatrix::normalized(HermitianMatrix(m)); }

// Sum of the k largest |v_j|^2, maximised over random unit vectors in range(P).
double sampled_top_k_weight(const CMatrix& p, int k, gen::Rng& rng, int samples) {
  const SpectralSplit s = spectral_split(HermitianMatrix(p));
  const CMatrix basis = s.positive_basis();
  double best = 0.0;
  for (int t = 0; t < samples; ++t) {
    CVector v = basis * gen::gaussian(static_cast<int>(basis.cols()), 1, rng).col(0);
    v.normalize();
    // Local ascent: repeatedly project the indicator of the top-k entries.
    for (int it = 0; it < 50; ++it) {
      RVector w = v.cwiseAbs2();
      std::vector<int> idx(w.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) { return w[a] > w[b]; });
      CVector u = CVector::Zero(v.size());
      for (int i = 0; i < k; ++i) u[idx[i]] = v[idx[i]];
      CVector next = p * u;
      if (next.norm() == 0) break;
      v = next.normalized();
    }
    RVector w = v.cwiseAbs2();
    std::sort(w.data(), w.data() + w.size(), std::greater<>());
    best = std::max(best, w.head(k).sum());
  }
  return best;
}

}  // namespace

TEST_SUITE("resource") {

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::identity(2)), Error);
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal((RVector(2) << 1.5, -0.5).finished())), Error);
  CHECK(DensityMatrix::normalized(HermitianMatrix::identity(3)).rho()(0, 0).real() == doctest::Approx(1.0 / 3));
}

TEST_CASE("cone spec validation") {
  CHECK_NOTHROW((ConeSpec{ConeSpec::Kind::KCoherent, 2}.validate(4)));
  CHECK_THROWS_AS((ConeSpec{ConeSpec::Kind::KCoherent, 5}.validate(4)), Error);
  CHECK_NOTHROW((ConeSpec{ConeSpec::Kind::KEntangled, 2, 2, 3}.validate(6)));
  CHECK_THROWS_AS((ConeSpec{ConeSpec::Kind::KEntangled, 3, 2, 3}.validate(6)), Error);
  CHECK_THROWS_AS((ConeSpec{ConeSpec::Kind::KEntangled, 1, 2, 3}.validate(5)), Error);
}

TEST_CASE("maximal coherence examples") {
  CHECK(is_max_coherent(uniform_pure(2)));
  CHECK_FALSE(is_max_coherent(DensityMatrix::normalized(HermitianMatrix::identity(3))));
  CHECK(is_max_coherent(from(fx::p5())));
}

TEST_CASE("pnorm_k examples") {
  CHECK(pnorm_k(CMatrix::Identity(4, 4), 2).value == doctest::Approx(1.0));
  CHECK(pnorm_k(fx::p5(), 1).value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pnorm_k(fx::p5(), 5).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(pnorm_k(fx::h3(), 1), Error);
  CHECK_THROWS_AS(pnorm_k(CMatrix::Identity(4, 4), 0), Error);
  PNormConfig tight;
  tight.max_subsets = 10;
  try {
    pnorm_k(CMatrix::Identity(8, 8), 4, tight);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}

TEST_CASE("maximal k-coherence of the uniform pure state in dimension 4") {
  const DensityMatrix rho = uniform_pure(4);
  CHECK(pnorm_k(rho.range_projection(), 2).value == doctest::Approx(0.5));
  CHECK(is_max_k_coherent(rho, 2));
  CHECK(pnorm_k(rho.range_projection(), 3).value == doctest::Approx(0.75));
  CHECK_FALSE(is_max_k_coherent(rho, 3));
  CHECK_FALSE(is_max_k_coherent(rho, 4));
}

TEST_CASE("k = 1 agrees with maximal coherence") {
  gen::Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    const int n = gen::uniform_int(rng, 2, 7);
    const DensityMatrix rho = from(gen::psd(n, gen::uniform_int(rng, 1, (n + 1) / 2), rng));
    CHECK(is_max_k_coherent(rho, 1) == is_max_coherent(rho));
  }
}

TEST_CASE("rank bounds") {
  CHECK(coherence_rank_bound(4, 1) == 2);
  CHECK(coherence_rank_bound(4, 2) == 1);
  CHECK(coherence_rank_bound(5, 3) == 0);
  for (int n = 2; n < 12; ++n) CHECK(coherence_rank_bound(n, 1) == n / 2);
  CHECK_THROWS_AS(coherence_rank_bound(4, 4), Error);
}

TEST_CASE("pnorm properties on random projections") {
  gen::Rng rng(52);
  for (int t = 0; t < 60; ++t) {
    const int n = gen::uniform_int(rng, 2, 7);
    const int rank = gen::uniform_int(rng, 1, std::min(3, n));
    const CMatrix p = gen::projection(n, rank, rng);
    const double p1 = pnorm_k(p, 1).value;
    CHECK(p1 >= rank / double(n) - 1e-12);
    for (int k = 1; k <= n; ++k) {
      const double pk = pnorm_k(p, k).value;
      if (k < n) CHECK(pk <= pnorm_k(p, k + 1).value + 1e-12);
      CHECK(pk >= p1 + (k - 1) * (1 - p1) / (n - 1) - 1e-9);
      const double sampled = sampled_top_k_weight(p, k, rng, 40);
      CHECK(sampled <= pk + 1e-9);
      CHECK(sampled >= pk - 1e-6);
    }
  }
}

TEST_CASE("maximal k-coherence respects the rank bound") {
  gen::Rng rng(53);
  int hits = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = gen::uniform_int(rng, 3, 7);
    const int k = gen::uniform_int(rng, 1, n - 1);
    const int rank = gen::uniform_int(rng, 1, 2);
    CMatrix g = gen::fourier(n) * CMatrix::Identity(n, rank) + 0.1 * gen::gaussian(n, rank, rng);
    const DensityMatrix rho = from(g * g.adjoint());
    if (!is_max_k_coherent(rho, k)) continue;
    ++hits;
    CHECK(rho.rank() <= coherence_rank_bound(n, k));
  }
  CHECK(hits > 20);
}

TEST_CASE("factor width two states are H-matrices") {
  gen::Rng rng(54);
  for (int t = 0; t < 200; ++t) {
    const int n = gen::uniform_int(rng, 2, 7);
    const int cols = gen::uniform_int(rng, 1, 2 * n);
    CMatrix v = CMatrix::Zero(n, cols);
    for (int c = 0; c < cols; ++c) {
      const int i = gen::uniform_int(rng, 0, n - 1), j = gen::uniform_int(rng, 0, n - 1);
      v(i, c) = gen::gaussian(1, 1, rng)(0, 0);
      v(j, c) = gen::gaussian(1, 1, rng)(0, 0);
    }
    if (v.norm() == 0) continue;
    CHECK(is_two_coherent(from(v * v.adjoint())));
  }
  CHECK(is_two_coherent(DensityMatrix::normalized(HermitianMatrix::diagonal((RVector(3) << 1, 2, 3).finished()))));
  CHECK(is_two_coherent(uniform_pure(2)));
  CHECK_FALSE(is_two_coherent(uniform_pure(3)));
}

TEST_CASE("distance to the diagonal cone") {
  const auto diag = DensityMatrix::normalized(HermitianMatrix::diagonal((RVector(3) << 1, 2, 3).finished()));
  CHECK(distance_to_diag_cone(diag).value < 1e-9);
  CHECK(distance_to_diag_cone(uniform_pure(2)).value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(distance_to_diag_cone(DensityMatrix::normalized(HermitianMatrix::identity(3))).value < 1e-9);
  CHECK(distance_to_diag_cone(uniform_pure(3)).value == doctest::Approx(1.0).epsilon(1e-6));
  // Pure state with |v_1|^2 = p > 1/2: the optimum is 2 sqrt(p (1 - p)).
  const double p = 0.8;
  const ConeDistance d = distance_to_diag_cone(DensityMatrix::pure((CVector(3) << std::sqrt(p), std::sqrt(0.1), std::sqrt(0.1)).finished()));
  CHECK(d.value < 1.0 - 1e-3);
  CHECK(d.x.minCoeff() >= 0.0);
}

TEST_CASE("distance one exactly when the range projection passes the diagonal test") {
  gen::Rng rng(55);
  int maximal = 0, total = 0;
  for (int t = 0; t < 80; ++t) {
    const int n = gen::uniform_int(rng, 2, 6);
    const int rank = gen::uniform_int(rng, 1, n / 2);
    // Half the samples sit near the Fourier basis (diagonal 1/n), half are
    // pushed towards a coordinate axis.
    CMatrix g = gen::fourier(n) * CMatrix::Identity(n, rank) + 0.05 * gen::gaussian(n, rank, rng);
    if (t % 2) g.row(0) *= 3.0;
    const DensityMatrix rho = from(g * g.adjoint());
    const double worst = rho.range_projection().diagonal().real().maxCoeff();
    // Just above 1/2 the distance falls below 1 by only about (2p - 1)^2 / 2,
    // less than the comparison slack; keep those samples out.
    if (worst > 0.5 && worst < 0.56) continue;
    ++total;
    const bool max = is_max_coherent(rho);
    maximal += max;
    CHECK(max == (std::abs(distance_to_diag_cone(rho).value - 1.0) <= 2e-3));
  }
  CHECK(maximal > 10);
  CHECK(total - maximal > 10);
}

TEST_CASE("maximal coherence agrees with orthogonality to diagonal PSD matrices") {
  gen::Rng rng(56);
  for (int t = 0; t < 100; ++t) {
    const int n = gen::uniform_int(rng, 2, 6);
    const DensityMatrix rho = from(gen::psd(n, gen::uniform_int(rng, 1, n), rng));
    bool all = true;
    for (int j = 0; j < n; ++j) {
      RVector e = RVector::Zero(n);
      e[j] = 1.0;
      all = all && check_bj_psd(rho.rho(), HermitianMatrix::diagonal(e)).orthogonal;
    }
    CHECK(all == is_max_coherent(rho));
  }
}

}  // TEST_SUITE
