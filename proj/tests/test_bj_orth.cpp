#include <doctest.h>

#include "bjtrace/bj_orth.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace bjtrace;

namespace {

HermitianMatrix e(int n, int j) {
  RVector d = RVector::Zero(n);
  d[j] = 1.0;
  return HermitianMatrix::diagonal(d);
}

HermitianMatrix diag2(double a, double b) { return HermitianMatrix::diagonal((RVector(2) << a, b).finished()); }

}  // namespace

TEST_SUITE("bj_orth") {

TEST_CASE("3 x 3 example is orthogonal to every e_j e_j*") {
  const HermitianMatrix h(fx::h3());
  for (int j = 0; j < 3; ++j) {
    const BJVerdict v = check_bj_psd(h, e(3, j));
    CHECK(v.orthogonal);
    REQUIRE(v.witness);
    CHECK(verify_witness(h, e(3, j), *v.witness));
  }
}

TEST_CASE("identity is not orthogonal to itself") {
  const BJVerdict v = check_bj_psd(HermitianMatrix::identity(3), HermitianMatrix::identity(3));
  CHECK_FALSE(v.orthogonal);
  CHECK(v.margin_plus == doctest::Approx(-1.5));
  CHECK_FALSE(v.witness);
  CHECK_THROWS_AS(witness_psd(HermitianMatrix::identity(3), HermitianMatrix::identity(3)), Error);
}

TEST_CASE("diag(1,-1) against the identity sits on the boundary") {
  const BJVerdict v = check_bj_psd(diag2(1, -1), HermitianMatrix::identity(2));
  CHECK(v.orthogonal);
  CHECK(v.margin_plus == doctest::Approx(0.0));
  CHECK(v.margin_minus == doctest::Approx(0.0));
  const BJWitness w = witness_psd(diag2(1, -1), HermitianMatrix::identity(2));
  CHECK((w.m.matrix() - diag2(1, -1).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("witness cases from the proof") {
  // alpha = 1/3, beta = 0 selects I - 2P-.
  const HermitianMatrix h(fx::h3());
  const SpectralSplit s = spectral_split(h);
  const BJWitness w = witness_psd(h, e(3, 0));
  const CMatrix expect = CMatrix::Identity(3, 3) - 2.0 * s.p_minus;
  CHECK((w.m.matrix() - expect).cwiseAbs().maxCoeff() < 1e-9);

  // alpha = beta = 0 selects 2P+ - I.
  const HermitianMatrix x(fx::exchange());
  const BJWitness wx = witness_psd(x, e(2, 0));
  CHECK((wx.m.matrix() - fx::exchange()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-PSD input is rejected by the PSD criterion") {
  try {
    check_bj_psd(diag2(1, 2), diag2(1, -1));
    FAIL("expected NotPsd");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotPsd);
  }
}

TEST_CASE("general criterion examples") {
  CHECK(check_bj_general(diag2(1, -1), diag2(1, 1)).orthogonal);
  const HermitianMatrix h(fx::h3());
  CHECK_FALSE(check_bj_general(h, HermitianMatrix::diagonal(fx::h3_refuting_diag())).orthogonal);
  gen::Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const RVector d = RVector::Random(2);
    const BJVerdict v = check_bj_general(HermitianMatrix(fx::exchange()), HermitianMatrix::diagonal(d));
    CHECK(v.orthogonal);
    REQUIRE(v.witness);
    CHECK(verify_witness(HermitianMatrix(fx::exchange()), HermitianMatrix::diagonal(d), *v.witness));
  }
}

TEST_CASE("line search examples") {
  const HermitianMatrix h(fx::h3());
  const LineSearchResult r = oracle_line_search(h, HermitianMatrix::diagonal(fx::h3_refuting_diag()));
  CHECK(r.min_value <= 54.0 / 5 + 1e-9);
  CHECK(r.base_value == doctest::Approx(12.0));

  const LineSearchResult flat = oracle_line_search(diag2(1, -1), HermitianMatrix::identity(2) * 1e-3);
  CHECK(flat.min_value == doctest::Approx(2.0).epsilon(1e-12));

  const HermitianMatrix p(fx::p5());
  const RVector d = (RVector(5) << 0, 0, 3, -1, 3).finished();
  const LineSearchResult r5 = oracle_line_search(p, HermitianMatrix::diagonal(d));
  CHECK(r5.min_value <= trace_norm(p - HermitianMatrix::diagonal(d / 40.0)) + 1e-12);
  CHECK(r5.min_value <= 1.99441235 + 1e-8);
  CHECK(r5.lambda_star < 0);

  CHECK_THROWS_AS(oracle_line_search(h, HermitianMatrix::zero(3)), Error);
}

TEST_CASE("verify_witness rejects wrong matrices") {
  const HermitianMatrix h = diag2(1, -1), b = HermitianMatrix::identity(2);
  CHECK_FALSE(verify_witness(h, b, BJWitness{HermitianMatrix::identity(2), 0.0, 2.0}));
  CHECK(verify_witness(h, b, BJWitness{diag2(1, -1), 2.0, 0.0}));
}

TEST_CASE("line search agrees with an independent grid search") {
  gen::Rng rng(22);
  for (int t = 0; t < 30; ++t) {
    const int n = gen::uniform_int(rng, 2, 4);
    const CMatrix hm = gen::hermitian(n, rng), bm = gen::hermitian(n, rng);
    const HermitianMatrix h(hm), b(bm);
    const LineSearchResult r = oracle_line_search(h, b);
    const double grid = gen::min_along(hm, bm, 4.0 * trace_norm(h) / trace_norm(b));
    CHECK(r.min_value <= grid + 1e-8);
    CHECK(r.min_value >= grid - 1e-6);
  }
}

TEST_CASE("general and PSD criteria agree on PSD directions") {
  gen::Rng rng(23);
  int agree = 0, orth = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = gen::uniform_int(rng, 2, 6);
    const int z = gen::uniform_int(rng, 0, n - 1);
    const int p = gen::uniform_int(rng, 0, n - z);
    const HermitianMatrix h(gen::with_inertia(p, z, n - z - p, rng));
    const HermitianMatrix b(gen::psd(n, gen::uniform_int(rng, 1, n), rng));
    const BJVerdict a = check_bj_psd(h, b), g = check_bj_general(h, b);
    agree += a.orthogonal == g.orthogonal;
    orth += a.orthogonal;
  }
  CHECK(agree == 500);
  MESSAGE("orthogonal pairs: " << orth);
}

TEST_CASE("orthogonality to a PSD direction only needs negative steps") {
  gen::Rng rng(24);
  for (int t = 0; t < 100; ++t) {
    const int n = gen::uniform_int(rng, 2, 5);
    // Positive H (a state up to scale): adding a positive multiple of B only
    // raises the trace, so the negative ray alone decides the verdict.
    const HermitianMatrix h(gen::psd(n, gen::uniform_int(rng, 1, n), rng));
    const HermitianMatrix b(gen::psd(n, gen::uniform_int(rng, 1, n), rng));
    const double base = trace_norm(h);
    const HermitianMatrix step = b * (base / trace_norm(b));
    CHECK(trace_norm(h + step) >= base - 1e-9);
    CHECK(trace_norm(h + step * 7.0) >= base - 1e-9);
    const double width = 4.0 * base / trace_norm(b);
    const double neg = gen::min_along(h.matrix() - width / 2 * b.matrix(), b.matrix(), width / 2, 200);
    if (check_bj_psd(h, b).orthogonal) CHECK(neg >= base - 1e-7);
    else CHECK(neg < base - 1e-9);
  }
}

TEST_CASE("every orthogonal PSD verdict yields a verified witness") {
  gen::Rng rng(25);
  int count = 0;
  for (int t = 0; t < 400; ++t) {
    const int n = gen::uniform_int(rng, 2, 6);
    const int z = gen::uniform_int(rng, 1, n - 1);
    const int p = gen::uniform_int(rng, 0, n - z);
    const HermitianMatrix h(gen::with_inertia(p, z, n - z - p, rng));
    const SpectralSplit s = spectral_split(h);
    // Direction mostly inside the kernel, so orthogonality is common.
    const CMatrix k = s.kernel_basis();
    const CMatrix g = k * gen::gaussian(z, z, rng) + 0.3 * gen::gaussian(n, z, rng);
    const HermitianMatrix b(g * g.adjoint());
    const BJVerdict v = check_bj_psd(h, b);
    if (!v.orthogonal) continue;
    ++count;
    REQUIRE(v.witness);
    CHECK(verify_witness(h, b, *v.witness));
  }
  CHECK(count > 50);
}

}  // TEST_SUITE
