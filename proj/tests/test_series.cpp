#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cubicsq/series.hpp"
#include "cubicsq/squares.hpp"

using namespace cubicsq;
using namespace cubicsq::series;
using field::SplitCode;

namespace {

const field::CubicField& k23() {
  static const field::CubicField K = field::CubicField::create(0, -1, -1);
  return K;
}

const SeriesContext& shared_ctx() {
  static const SeriesContext ctx(k23(), 2000000, 1000000);
  return ctx;
}

// Euler-Maclaurin with ten Bernoulli corrections at N = 50.
double zeta_oracle(double s) {
  const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510,
                      43867.0 / 798, -174611.0 / 330};
  const double N = 50;
  long double sum = 0;
  for (int n = 1; n < 50; ++n) sum += std::pow(static_cast<long double>(n), -s);
  sum += std::pow(N, 1 - s) / (s - 1) + 0.5 * std::pow(N, -s);
  long double rising = s;  // s (s+1) ... (s+2k-2)
  long double fact = 2;    // (2k)!
  for (int k = 1; k <= 10; ++k) {
    sum += B[k - 1] / fact * rising * std::pow(N, -s - 2 * k + 1);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return static_cast<double>(sum);
}

// Power series in Y of the local factor at p of zeta^2 L^2(f) L(sym^2 f),
// from the Dirichlet coefficients at p^k.
std::vector<double> local_dirichlet(std::uint64_t p, int depth) {
  std::vector<double> ones(depth + 1, 1.0), lf(depth + 1), ls(depth + 1);
  std::uint64_t pk = 1;
  for (int k = 0; k <= depth; ++k, pk *= p) {
    lf[k] = static_cast<double>(field::lambda_f(k23(), pk));
    ls[k] = static_cast<double>(field::lambda_sym2(k23(), pk));
  }
  auto conv = [depth](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> w(depth + 1, 0.0);
    for (int i = 0; i <= depth; ++i)
      for (int j = 0; i + j <= depth; ++j) w[i + j] += u[i] * v[j];
    return w;
  };
  return conv(conv(conv(conv(ones, ones), lf), lf), ls);
}

double eval_series(const std::vector<double>& c, double Y) {
  double v = 0, y = 1;
  for (double ck : c) {
    v += ck * y;
    y *= Y;
  }
  return v;
}

}  // namespace

TEST_CASE("zeta on the real axis") {
  CHECK(std::fabs(zeta_real(2.0) - std::numbers::pi * std::numbers::pi / 6) < 1e-10);
  CHECK(std::fabs(zeta_real(4.0) - std::pow(std::numbers::pi, 4) / 90) < 1e-10);
  for (double s : {1.5, 1.01, 2.5, 3.0, 5.0, 7.0}) CHECK_MESSAGE(std::fabs(zeta_real(s) - zeta_oracle(s)) < 1e-10, s);
  CHECK_THROWS_AS(zeta_real(1.0), DomainError);
  CHECK_THROWS_AS(zeta_real(0.5), DomainError);
}

TEST_CASE("local series A_p") {
  CHECK(A_p(k23(), 7, 4.5, 0).value == 1.0);
  CHECK(A_p(k23(), 2, 4.5, 1).value == 1.0);
  CHECK(A_p(k23(), 2, 4.5, 2).value == 1.0);
  CHECK(A_p(k23(), 2, 4.5, 3).value > 1.0);
  const double g59 = static_cast<double>(squares::g(59));
  CHECK(A_p(k23(), 59, 5.0, 1).value == doctest::Approx(1 + 9 * g59 / std::pow(59.0, 5)).epsilon(1e-15));
  const LocalSeries a = A_p(k23(), 59, 5.0, 1);
  CHECK(a.tail_estimate > 0);
  CHECK(std::isfinite(a.tail_estimate));
  CHECK_THROWS_AS(A_p(k23(), 5, 3.0, 4), DivergenceError);
  CHECK_THROWS_AS(A_p(k23(), 5, 2.0, kAutoDepth), DivergenceError);

  // Direct sum of a_K(p^k)^2 g_odd(p^k) p^-ks.
  for (std::uint64_t p : {3ull, 5ull, 23ull, 59ull}) {
    long double direct = 0;
    std::uint64_t pk = 1;
    for (; pk < 1000000000000ull; pk *= p) {
      const long double aK = field::a_K(k23(), pk);
      direct += aK * aK * static_cast<long double>(squares::g(pk)) * std::pow(static_cast<long double>(pk), -5.0L);
    }
    CHECK(A_p(k23(), p, 5.0, kAutoDepth).value == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
  }
}

TEST_CASE("B2/A2 ratio") {
  for (double s : {3.51, 3.75, 4.0, 5.0, 8.0}) {
    const double r = A2_B2_ratio(k23(), s).value;
    CHECK(r > 0.0);
    CHECK(r <= 1.0);
  }
  // a_K(2) = a_K(4) = 0 for x^3 - x - 1, so both truncations are 1.
  CHECK(A2_B2_ratio(k23(), 4.0, 2).value == 1.0);
  const field::CubicField split2 = field::CubicField::create(0, 0, -2);
  CHECK(A2_B2_ratio(split2, 4.0).value > 0.0);
  CHECK(A2_B2_ratio(split2, 4.0).value <= 1.0);
}

TEST_CASE("coefficient identity at p") {
  for (std::uint32_t p : arith::primes_up_to(10000)) {
    if (k23().is_ramified(p)) continue;
    const Int128 a = static_cast<Int128>(field::a_K(k23(), p));
    const Int128 rhs = (2 + 2 * field::lambda_f(k23(), p) + field::lambda_sym2(k23(), p)) * (1 + Int128(p) * p * p);
    CHECK(a * a * squares::g(p) == rhs);
  }
}

TEST_CASE("harmless local factor") {
  CHECK(B_local(k23(), 59, 4.0, 0).value == 1.0);
  CHECK(std::fabs(B_local(k23(), 59, 4.0, kAutoDepth).value - 1.0) < 1e-2);
  for (std::uint64_t p : {3ull, 5ull, 7ull, 23ull, 59ull}) {
    const double exact = B_local_exact(field::splitting_code(k23(), p), k23().is_ramified(p), p, 4.2);
    CHECK(B_local(k23(), p, 4.2, 60).value == doctest::Approx(exact).epsilon(1e-12));
  }
  // p = 5 has a_K(5) = 1 and lambda_f(5) = 0: B_5 against its local factors
  // built from the Dirichlet coefficients.
  REQUIRE(field::a_K(k23(), 5) == 1);
  REQUIRE(field::lambda_f(k23(), 5) == 0);
  const double s = 5.0;
  const std::vector<double> local = local_dirichlet(5, 24);
  long double A = 0;
  std::uint64_t pk = 1;
  for (int k = 0; k <= 24 && pk < 100000000000ull; ++k, pk *= 5) {
    const long double aK = field::a_K(k23(), pk);
    A += aK * aK * static_cast<long double>(squares::g(pk)) * std::pow(static_cast<long double>(pk), -s);
  }
  const double expected =
      static_cast<double>(A) / (eval_series(local, std::pow(5.0, 3 - s)) * eval_series(local, std::pow(5.0, -s)));
  CHECK(B_local_exact(SplitCode::LinearQuadratic, false, 5, s) == doctest::Approx(expected).epsilon(1e-9));
  CHECK_THROWS_AS(B_local(k23(), 5, 3.5, 4), DivergenceError);
}

TEST_CASE("harmless factor converges") {
  const SeriesContext& ctx = shared_ctx();
  double prev = INFINITY;
  for (std::uint64_t P : {1000ull, 10000ull, 100000ull}) {
    const double d = std::fabs(log_harmless_factor(ctx, 4.0, 10 * P).value - log_harmless_factor(ctx, 4.0, P).value);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(harmless_factor(ctx, 4.0).tail_estimate < 1e-5);
  CHECK_THROWS_AS(log_harmless_factor(ctx, 3.5, 1000), DivergenceError);
}

TEST_CASE("L-values") {
  const SeriesContext& ctx = shared_ctx();
  CHECK(std::fabs(L_f(ctx, 8.0).value - 1.0) < 1e-2);
  CHECK(std::fabs(L_sym2(ctx, 8.0).value - 1.0) < 1e-2);
  CHECK(L_f(ctx, 8.0).method == Method::DirichletSum);
  CHECK(L_f(ctx, 1.0).method == Method::SmoothedSum);

  // Euler products at s = 3 over primes up to 10^6.
  long double lf = 1, ls = 1;
  for (std::uint32_t p : ctx.primes()) {
    const double Y = std::pow(static_cast<double>(p), -3.0);
    long double fl = 0, fs = 0, Yk = 1;
    for (std::uint32_t k = 0; k <= 12 && Yk > 1e-30; ++k, Yk *= Y) {
      fl += field::lambda_f_prime_power(ctx.splits().code(p), k) * Yk;
      fs += field::lambda_sym2_prime_power(ctx.splits().code(p), k23().is_ramified(p), k) * Yk;
    }
    lf *= fl;
    ls *= fs;
  }
  CHECK(L_f(ctx, 3.0).value == doctest::Approx(static_cast<double>(lf)).epsilon(1e-10));
  CHECK(L_sym2(ctx, 3.0).value == doctest::Approx(static_cast<double>(ls)).epsilon(1e-10));

  for (double s : {2.0, 3.0}) {
    CHECK(std::fabs(L_f(k23(), s, 500000).value - L_f(k23(), s, 1000000).value) < 1e-6);
    CHECK(std::fabs(L_sym2(k23(), s, 500000).value - L_sym2(k23(), s, 1000000).value) < 1e-6);
  }
}

TEST_CASE("L-values at s = 1") {
  const SeriesContext& ctx = shared_ctx();
  const auto cd = field::builtin_class_data(k23());
  REQUIRE(cd.has_value());
  const double closed = L1f_classnumber(k23(), *cd);
  CHECK(closed == doctest::Approx(0.3684).epsilon(1e-3));
  const EulerEval lf = L_f(ctx, 1.0);
  CHECK(std::fabs(lf.value - closed) / closed < 0.01);
  CHECK(std::fabs(lf.value - closed) < 1e-7);

  // L(s, sym^2 f) here equals L(s, chi_-23) L(s, f) prime by prime, and
  // L(1, chi_-23) = 3 pi / sqrt(23) (class number 3).
  const double chi = 3 * std::numbers::pi / std::sqrt(23.0);
  CHECK(L_sym2(ctx, 1.0).value == doctest::Approx(chi * lf.value).epsilon(1e-7));

  const SmoothingOptions loose{256, 1e-3};
  CHECK(std::fabs(L_sym2(ctx, 1.0, loose).value - L_sym2(ctx, 1.0).value) < 1e-3);
  CHECK_THROWS_AS(smoothed_sum(ctx.lambda_f(), ctx.logs(), 0.5), DomainError);
  CHECK_THROWS_AS(L_f(k23(), 1.0, 5000), DomainError);
  CHECK_THROWS_AS(dirichlet_sum(ctx.lambda_f(), ctx.logs(), 1.0, 2), DomainError);
}

TEST_CASE("class number residue formula") {
  field::ClassData cd = *field::builtin_class_data(k23());
  double x = 1.3;
  for (int i = 0; i < 50; ++i) x -= (x * x * x - x - 1) / (3 * x * x - 1);
  const double expected = 2 * 2 * std::numbers::pi * std::log(x) / (2 * std::sqrt(23.0));
  CHECK(L1f_classnumber(k23(), cd) == doctest::Approx(expected).epsilon(1e-10));
  const double one = L1f_classnumber(k23(), cd);
  cd.class_number = 2;
  CHECK(L1f_classnumber(k23(), cd) == doctest::Approx(2 * one).epsilon(1e-15));
  cd.r1 = 3;
  CHECK_THROWS_AS(L1f_classnumber(k23(), cd), DomainError);
}

TEST_CASE("factorization of F reproduces the Dirichlet series at s = 6") {
  const SeriesContext& ctx = shared_ctx();
  long double direct = 0;
  for (std::uint64_t n = 1; n <= 200000; ++n) {
    const long double a = field::a_K(k23(), n);
    if (a != 0) direct += a * a * static_cast<long double>(squares::g(n)) * std::pow(static_cast<long double>(n), -6.0L);
  }
  const double z = zeta_real(3.0);
  const double product = evaluate_H(ctx, 6.0).value * z * z / 16.0;
  CHECK(product == doctest::Approx(static_cast<double>(direct)).epsilon(1e-9));
}

TEST_CASE("Laurent algebra") {
  const auto [c1, c0] = laurent_coefficients(2.0, 0.0);
  CHECK(c1 == doctest::Approx(0.5));
  CHECK(c0 == doctest::Approx(2.0 * (2 * kEulerGamma / 4 - 1.0 / 16)));
}

TEST_CASE("main-term coefficients") {
  const MainTermCoeffs mc = main_term_coeffs(shared_ctx());
  CHECK(mc.c1 > 0);
  CHECK(mc.c1 == doctest::Approx(mc.at4.value / 4));
  CHECK(mc.c0_step_delta <= 1e-4);
  CHECK(mc.steps.size() >= 3);
  double prev = main_term(mc, 3.0);
  for (double x = 3.25; x < 1e8; x *= 1.07) {
    const double m = main_term(mc, x);
    CHECK(m > prev);
    prev = m;
  }
}
