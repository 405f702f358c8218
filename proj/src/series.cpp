#include "cubicsq/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cubicsq::series {

using field::SplitCode;

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

constexpr std::uint32_t kMaxLocalDepth = 4000;

double amax(std::uint32_t k) { return (k + 1.0) * (k + 2.0) / 2.0; }

// Majorant of sum_{k > K} a(p^k)^2 g(p^k) p^(-ks) from a(p^k) <= (k+1)(k+2)/2
// and g(p^k) p^(-ks) <= y^k / (1 - p^-3), y = p^(3-s).
double local_tail_bound(std::uint64_t p, double y, std::uint32_t K) {
  const double scale = 1.0 / (1.0 - std::pow(static_cast<double>(p), -3.0));
  double tail = 0.0;
  double yk = std::pow(y, static_cast<double>(K + 1));
  for (std::uint32_t k = K + 1;; ++k) {
    const double b = amax(k) * amax(k) * yk * scale;
    tail += b;
    const double rho = std::pow((k + 3.0) / (k + 1.0), 2.0) * y;
    if (rho < 1.0) {
      const double rest = b * rho / (1.0 - rho);
      if (rest <= 1e-3 * tail || b == 0.0) return tail + rest;
    }
    yk *= y;
    if (k > K + 100000) return tail;
  }
}

LocalSeries sum_local(SplitCode code, std::uint64_t p, double s, std::uint32_t depth, bool two_adic) {
  if (s <= 3.0) throw DivergenceError("local series at p=" + std::to_string(p) + " diverges for s <= 3");
  const double pd = static_cast<double>(p);
  const double x = std::pow(pd, -s);
  const double y = std::pow(pd, 3.0 - s);
  const bool automatic = depth == kAutoDepth;
  const std::uint32_t max_k = automatic ? kMaxLocalDepth : depth;

  CompensatedSum acc;
  acc.add(1.0);
  double G = 1.0;   // G_k = g_odd(p^k) p^(-ks) = sum_{i<=k} y^i x^(k-i)
  double xk = 1.0;  // x^k
  double yk = 1.0;  // y^k
  std::uint32_t k = 0;
  while (k < max_k) {
    ++k;
    xk *= x;
    yk *= y;
    G = x * G + yk;
    const double a = static_cast<double>(field::a_K_prime_power(code, k));
    acc.add(a * a * (two_adic ? G - 2.0 * xk : G));
    if (automatic && k % 4 == 0 && local_tail_bound(p, y, k) < 1e-18 * acc.value()) break;
  }
  return {acc.value(), local_tail_bound(p, y, k), k};
}

// Inverse local factor of zeta^2 L^2(f) L(sym^2 f) at Y = p^-w.
double inverse_local_factor(SplitCode code, bool ramified, double Y) {
  const double lam = static_cast<double>(field::lambda_f_prime_power(code, 1));
  const double zeta_inv = 1.0 - Y;
  if (ramified) {
    const double lf_inv = 1.0 - lam * Y;
    return zeta_inv * zeta_inv * lf_inv * lf_inv * (1.0 - lam * lam * Y);
  }
  // alpha beta = -1 at primes with one linear and one quadratic factor.
  const double chi = code == SplitCode::LinearQuadratic ? -1.0 : 1.0;
  const double lf_inv = 1.0 - lam * Y + chi * Y * Y;
  const double sym2_inv = (1.0 - (lam * lam - 2.0) * Y + Y * Y) * (1.0 - Y);
  return zeta_inv * zeta_inv * lf_inv * lf_inv * sym2_inv;
}

// Dirichlet coefficients at p^0..p^depth of zeta^2 L^2(f) L(sym^2 f).
std::vector<double> nonic_local_coefficients(SplitCode code, bool ramified, std::uint32_t depth) {
  auto convolve = [depth](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> w(depth + 1, 0.0);
    for (std::uint32_t i = 0; i <= depth; ++i)
      for (std::uint32_t j = 0; i + j <= depth; ++j) w[i + j] += u[i] * v[j];
    return w;
  };
  std::vector<double> ones(depth + 1, 1.0), lf(depth + 1), ls2(depth + 1);
  for (std::uint32_t k = 0; k <= depth; ++k) {
    lf[k] = static_cast<double>(field::lambda_f_prime_power(code, k));
    ls2[k] = static_cast<double>(field::lambda_sym2_prime_power(code, ramified, k));
  }
  return convolve(convolve(convolve(convolve(ones, ones), lf), lf), ls2);
}

// d_k(n)-majorant of sum_{n > M} |c(n)| n^-s.
double divisor_tail(double M, double s, int order) {
  const double lm = std::log(M);
  return std::exp((1.0 - s) * lm) * std::pow(lm + 1.0, order - 1) / (s - 1.0);
}

double smoothed_once(std::span<const std::int32_t> c, std::span<const double> logs, double s, double N) {
  const std::uint64_t last = std::min<std::uint64_t>(c.size() - 1, static_cast<std::uint64_t>(std::ceil(46.0 * N)));
  const double inv_n = 1.0 / N;
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= last; ++n) {
    if (c[n] == 0) continue;
    acc.add(static_cast<double>(c[n]) * std::exp(-s * logs[n] - static_cast<double>(n) * inv_n));
  }
  return acc.value();
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::EulerProduct: return "euler_product";
    case Method::DirichletSum: return "dirichlet_sum";
    case Method::SmoothedSum: return "smoothed_sum";
    case Method::ClosedForm: return "closed_form";
  }
  return "unknown";
}

LocalSeries A_p(SplitCode code, std::uint64_t p, double s, std::uint32_t depth) {
  return sum_local(code, p, s, depth, false);
}

LocalSeries A_p(const field::CubicField& field, std::uint64_t p, double s, std::uint32_t depth) {
  return A_p(field::splitting_code(field, p), p, s, depth);
}

LocalSeries B_2(SplitCode code_at_2, double s, std::uint32_t depth) { return sum_local(code_at_2, 2, s, depth, true); }

LocalSeries A2_B2_ratio(const field::CubicField& field, double s, std::uint32_t depth) {
  const SplitCode code = field::splitting_code(field, 2);
  const LocalSeries a = A_p(code, 2, s, depth);
  const LocalSeries b = B_2(code, s, a.depth);
  return {b.value / a.value, (a.tail_estimate + b.tail_estimate) / a.value, a.depth};
}

double zeta_real(double s) {
  if (s <= 1.0) throw DomainError("zeta(s) has its pole at s = 1; real evaluation needs s > 1");
  constexpr int N = 10000;
  const double n = N;
  // Tail corrections first, then the terms from smallest to largest.
  CompensatedSum acc;
  acc.add(-s * (s + 1.0) * (s + 2.0) * std::pow(n, -s - 3.0) / 720.0);
  acc.add(s * std::pow(n, -s - 1.0) / 12.0);
  acc.add(0.5 * std::pow(n, -s));
  acc.add(std::pow(n, 1.0 - s) / (s - 1.0));
  for (int k = N - 1; k >= 1; --k) acc.add(std::pow(static_cast<double>(k), -s));
  return acc.value();
}

double L1f_classnumber(const field::CubicField& field, const field::ClassData& cd) {
  if (cd.r1 + 2 * cd.r2 != 3 || cd.r1 < 0 || cd.r2 < 0) throw DomainError("class data: r1 + 2 r2 must be 3");
  if (cd.class_number < 1 || !(cd.regulator > 0.0) || cd.roots_of_unity < 2)
    throw DomainError("class data: need h >= 1, R > 0 and omega >= 2");
  const double D = std::fabs(static_cast<double>(field.field_disc()));
  return std::pow(2.0, cd.r1) * std::pow(2.0 * std::numbers::pi, cd.r2) * static_cast<double>(cd.class_number) *
         cd.regulator / (cd.roots_of_unity * std::sqrt(D));
}

SeriesContext::SeriesContext(const field::CubicField& field, std::uint64_t coefficient_cutoff,
                             std::uint64_t prime_cutoff, unsigned workers)
    : splits_(std::make_shared<field::SplitTable>(field, std::max(coefficient_cutoff, prime_cutoff), workers)),
      cutoff_(coefficient_cutoff),
      prime_cutoff_(prime_cutoff),
      workers_(workers) {
  if (coefficient_cutoff < 2) throw DomainError("coefficient cutoff must be at least 2");
  const arith::SieveOptions opts{std::uint64_t{1} << 16, workers};
  auto narrow = [](const arith::SieveTable<std::int64_t>& t) {
    std::vector<std::int32_t> out(t.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (t.values[i] > INT32_MAX || t.values[i] < INT32_MIN) throw OverflowError("coefficient exceeds 32 bits");
      out[i] = static_cast<std::int32_t>(t.values[i]);
    }
    return out;
  };
  lambda_f_ = narrow(arith::sieve_multiplicative<std::int64_t>(field::lambda_f_spec(splits_), cutoff_, opts));
  lambda_sym2_ = narrow(arith::sieve_multiplicative<std::int64_t>(field::lambda_sym2_spec(splits_), cutoff_, opts));
  logs_.resize(cutoff_ + 1, 0.0);
  for (std::uint64_t n = 1; n <= cutoff_; ++n) logs_[n] = std::log(static_cast<double>(n));
  primes_ = arith::primes_up_to(prime_cutoff_);
}

EulerEval smoothed_sum(std::span<const std::int32_t> coeffs, std::span<const double> logs, double s,
                       const SmoothingOptions& opts) {
  if (!(s > 0.5)) throw DomainError("smoothed evaluation needs s > 1/2");
  const double cutoff = static_cast<double>(coeffs.size() - 1);
  double N = static_cast<double>(opts.initial_length);
  if (46.0 * 4.0 * N > cutoff) throw DomainError("coefficient cutoff too small for the smoothing sweep");

  double prev_raw = smoothed_once(coeffs, logs, s, N);
  double prev_est = 0.0;
  bool have_est = false;
  double last_delta = INFINITY;
  while (46.0 * 2.0 * N <= cutoff) {
    N *= 2.0;
    const double raw = smoothed_once(coeffs, logs, s, N);
    const double est = 2.0 * raw - prev_raw;  // cancels the 1/N term
    if (have_est) {
      last_delta = std::fabs(est - prev_est);
      if (last_delta < opts.tolerance * std::max(1.0, std::fabs(est)))
        return {est, static_cast<std::uint64_t>(std::ceil(46.0 * N)), last_delta, Method::SmoothedSum};
    }
    prev_raw = raw;
    prev_est = est;
    have_est = true;
  }
  throw DivergenceError("smoothed sum at s=" + std::to_string(s) + " did not stabilize (last change " +
                        std::to_string(last_delta) + "); raise the coefficient cutoff");
}

EulerEval dirichlet_sum(std::span<const std::int32_t> coeffs, std::span<const double> logs, double s, int divisor_order) {
  if (!(s > 1.0)) throw DomainError("direct Dirichlet sums need s > 1");
  const std::uint64_t M = coeffs.size() - 1;
  CompensatedSum acc;
  std::uint64_t n = 1;
  for (; n <= M; ++n) {
    if (coeffs[n] != 0) acc.add(static_cast<double>(coeffs[n]) * std::exp(-s * logs[n]));
    if (n % 4096 == 0 && divisor_tail(static_cast<double>(n), s, divisor_order) < 1e-17) break;
  }
  n = std::min(n, M);
  return {acc.value(), n, divisor_tail(static_cast<double>(n), s, divisor_order), Method::DirichletSum};
}

EulerEval L_f(const SeriesContext& ctx, double s, const SmoothingOptions& opts) {
  if (s < 2.5) return smoothed_sum(ctx.lambda_f(), ctx.logs(), s, opts);
  return dirichlet_sum(ctx.lambda_f(), ctx.logs(), s, 2);
}

EulerEval L_sym2(const SeriesContext& ctx, double s, const SmoothingOptions& opts) {
  if (s < 2.5) return smoothed_sum(ctx.lambda_sym2(), ctx.logs(), s, opts);
  return dirichlet_sum(ctx.lambda_sym2(), ctx.logs(), s, 3);
}

EulerEval L_f(const field::CubicField& field, double s, std::uint64_t cutoff) {
  return L_f(SeriesContext(field, cutoff, 2), s);
}

EulerEval L_sym2(const field::CubicField& field, double s, std::uint64_t cutoff) {
  return L_sym2(SeriesContext(field, cutoff, 2), s);
}

LocalSeries B_local(const field::CubicField& field, std::uint64_t p, double s, std::uint32_t depth) {
  if (!(s > 3.5)) throw DivergenceError("harmless factor needs s > 7/2");
  if (depth == kAutoDepth) {
    return {B_local_exact(field::splitting_code(field, p), field.is_ramified(p), p, s), 0.0, depth};
  }
  const SplitCode code = field::splitting_code(field, p);
  const bool ramified = field.is_ramified(p);
  const LocalSeries a = A_p(code, p, s, depth);
  const std::vector<double> c = nonic_local_coefficients(code, ramified, depth);
  const double pd = static_cast<double>(p);
  const double x = std::pow(pd, -s), y = std::pow(pd, 3.0 - s);
  std::vector<double> at_shift(depth + 1), at_s(depth + 1);
  for (std::uint32_t k = 0; k <= depth; ++k) {
    at_shift[k] = c[k] * std::pow(y, static_cast<double>(k));
    at_s[k] = c[k] * std::pow(x, static_cast<double>(k));
  }
  CompensatedSum local;
  for (std::uint32_t i = 0; i <= depth; ++i)
    for (std::uint32_t j = 0; i + j <= depth; ++j) local.add(at_shift[i] * at_s[j]);
  return {a.value / local.value(), a.tail_estimate / local.value(), depth};
}

double B_local_exact(SplitCode code, bool ramified, std::uint64_t p, double s) {
  const double pd = static_cast<double>(p);
  const LocalSeries a = A_p(code, p, s, kAutoDepth);
  return a.value * inverse_local_factor(code, ramified, std::pow(pd, 3.0 - s)) *
         inverse_local_factor(code, ramified, std::pow(pd, -s));
}

EulerEval log_harmless_factor(const SeriesContext& ctx, double s, std::uint64_t prime_cutoff) {
  if (!(s > 3.5)) throw DivergenceError("harmless factor needs s > 7/2");
  if (prime_cutoff > ctx.prime_cutoff()) throw DomainError("prime cutoff exceeds the context's prime table");
  const auto& primes = ctx.primes();
  const std::size_t count =
      static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), prime_cutoff) - primes.begin());
  constexpr std::size_t kBlock = 2048;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  arith::detail::parallel_for_index(blocks, ctx.workers(), [&](std::size_t b) {
    CompensatedSum acc;
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const std::uint64_t p = primes[i];
      acc.add(std::log(B_local_exact(ctx.splits().code(p), ctx.splits().is_ramified(p), p, s)));
    }
    partial[b] = acc.value();
  });
  CompensatedSum total;
  for (double v : partial) total.add(v);
  // B_p - 1 is of size about 10 p^(6 - 2s); integrate against the prime density.
  const double P = static_cast<double>(std::max<std::uint64_t>(prime_cutoff, 2));
  const double tail = 10.0 * std::pow(P, 7.0 - 2.0 * s) / ((2.0 * s - 7.0) * std::log(P));
  return {total.value(), prime_cutoff, tail, Method::EulerProduct};
}

EulerEval harmless_factor(const SeriesContext& ctx, double s) {
  EulerEval log_b = log_harmless_factor(ctx, s, ctx.prime_cutoff());
  const double value = std::exp(log_b.value);
  return {value, log_b.prime_cutoff, value * std::expm1(log_b.tail_estimate), Method::EulerProduct};
}

HEvaluation evaluate_H(const SeriesContext& ctx, double s, const SmoothingOptions& opts) {
  HEvaluation h;
  h.s = s;
  h.ratio = A2_B2_ratio(ctx.field(), s, kAutoDepth);
  h.lf_shift = L_f(ctx, s - 3.0, opts);
  h.ls2_shift = L_sym2(ctx, s - 3.0, opts);
  h.zeta = zeta_real(s);
  h.lf = L_f(ctx, s, opts);
  h.ls2 = L_sym2(ctx, s, opts);
  h.harmless = harmless_factor(ctx, s);
  h.G = 16.0 * h.zeta * h.zeta * h.lf.value * h.lf.value * h.ls2.value * h.harmless.value;
  h.value = h.ratio.value * h.lf_shift.value * h.lf_shift.value * h.ls2_shift.value * h.G;
  return h;
}

std::pair<double, double> laurent_coefficients(double H4, double dH4) {
  return {H4 / 4.0, dH4 / 4.0 - H4 / 16.0 + kEulerGamma * H4 / 2.0};
}

MainTermCoeffs main_term_coeffs(const SeriesContext& ctx, const MainTermOptions& opts) {
  MainTermCoeffs out;
  out.coefficient_cutoff = ctx.coefficient_cutoff();
  out.prime_cutoff = ctx.prime_cutoff();
  out.at4 = evaluate_H(ctx, 4.0, opts.smoothing);
  out.H4 = out.at4.value;
  out.c1 = laurent_coefficients(out.H4, 0.0).first;
  auto c0_from = [&](double dH) { return laurent_coefficients(out.H4, dH).second; };

  double prev_d = 0.0, prev_c0 = 0.0;
  bool have_c0 = false;
  double delta = INFINITY;
  for (double h = opts.initial_step; h >= opts.min_step * (1 - 1e-12); h /= 2.0) {
    const double d = (evaluate_H(ctx, 4.0 + h, opts.smoothing).value - evaluate_H(ctx, 4.0 - h, opts.smoothing).value) /
                     (2.0 * h);
    StepRecord rec{h, d, c0_from(d)};
    if (!out.steps.empty()) {
      const double rich = (4.0 * d - prev_d) / 3.0;
      rec.c0 = c0_from(rich);
      if (have_c0) delta = std::fabs(rec.c0 - prev_c0);
      out.dH4 = rich;
      out.c0 = rec.c0;
      out.step = h;
      prev_c0 = rec.c0;
      have_c0 = true;
    }
    out.steps.push_back(rec);
    prev_d = d;
    if (delta < opts.target_stability * std::max(1.0, std::fabs(out.c0))) break;
  }
  out.c0_step_delta = delta;
  if (!(delta <= opts.required_stability))
    throw DivergenceError("c0 is not stable under step halving (last change " + std::to_string(delta) + ")");
  return out;
}

long double main_term(double c1, double c0, long double x) {
  return x * x * x * x * (static_cast<long double>(c1) * std::log(x) + static_cast<long double>(c0));
}

double main_term(const MainTermCoeffs& coeffs, double x) {
  return static_cast<double>(main_term(coeffs.c1, coeffs.c0, static_cast<long double>(x)));
}

}  // namespace cubicsq::series
