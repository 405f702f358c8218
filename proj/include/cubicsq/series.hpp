#pragma once

// Real-axis evaluation of the Dirichlet series attached to a_K^2(n) r_8(n):
//
//   F(s) = (B_2/A_2)(s) zeta^2(s-3) L^2(s-3,f) L(s-3,sym^2 f) G(s),
//   G(s) = 16 zeta^2(s) L^2(s,f) L(s,sym^2 f) B(s),
//
// and the main term x^4 (c1 log x + c0) from the double pole at s = 4.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cubicsq/field.hpp"

namespace cubicsq::series {

inline constexpr double kEulerGamma = 0.57721566490153286061;

enum class Method { EulerProduct, DirichletSum, SmoothedSum, ClosedForm };
std::string to_string(Method m);

struct EulerEval {
  double value = 0.0;
  std::uint64_t prime_cutoff = 0;  // primes (products) or terms (sums) used
  double tail_estimate = 0.0;
  Method method = Method::ClosedForm;
};

/// A truncated local series 1 + c_1 p^-s + ... + c_depth p^(-depth s).
struct LocalSeries {
  double value = 1.0;
  double tail_estimate = 0.0;
  std::uint32_t depth = 0;
};

/// Depth large enough that the neglected tail is below 1e-18 relative.
inline constexpr std::uint32_t kAutoDepth = ~std::uint32_t{0};

/// A_p(s) = sum_k a_K(p^k)^2 g_odd(p^k) p^(-ks), with g_odd(p^k) = 1 + p^3 + ...
/// + p^(3k) (at p = 2 this is the A_2 of the factorization). Throws
/// DivergenceError when s <= 3.
LocalSeries A_p(const field::CubicField& field, std::uint64_t p, double s, std::uint32_t depth);
LocalSeries A_p(field::SplitCode code, std::uint64_t p, double s, std::uint32_t depth);

/// B_2(s): the true local factor at 2, with g(2^k) = -1 + 2^3 + ... + 2^(3k).
LocalSeries B_2(field::SplitCode code_at_2, double s, std::uint32_t depth);

/// B_2(s) / A_2(s) with both series truncated at the same depth.
LocalSeries A2_B2_ratio(const field::CubicField& field, double s, std::uint32_t depth = kAutoDepth);

/// Riemann zeta for real s > 1 (Euler-Maclaurin tail on a 10^4-term sum).
double zeta_real(double s);

/// Closed-form L(1, f) from the residue of zeta_K at s = 1.
double L1f_classnumber(const field::CubicField& field, const field::ClassData& cd);

/// Coefficient tables for L(s,f) and L(s,sym^2 f) up to a cutoff, shared by
/// all evaluations for one field.
class SeriesContext {
 public:
  SeriesContext(const field::CubicField& field, std::uint64_t coefficient_cutoff, std::uint64_t prime_cutoff,
                unsigned workers = 1);

  const field::CubicField& field() const { return splits_->field(); }
  const field::SplitTable& splits() const { return *splits_; }
  std::uint64_t coefficient_cutoff() const { return cutoff_; }
  std::uint64_t prime_cutoff() const { return prime_cutoff_; }
  unsigned workers() const { return workers_; }

  std::span<const std::int32_t> lambda_f() const { return lambda_f_; }
  std::span<const std::int32_t> lambda_sym2() const { return lambda_sym2_; }
  std::span<const double> logs() const { return logs_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

 private:
  std::shared_ptr<const field::SplitTable> splits_;
  std::uint64_t cutoff_;
  std::uint64_t prime_cutoff_;
  unsigned workers_;
  std::vector<std::int32_t> lambda_f_;     // index n, 0 unused
  std::vector<std::int32_t> lambda_sym2_;  // index n, 0 unused
  std::vector<double> logs_;               // log n
  std::vector<std::uint32_t> primes_;      // primes <= prime_cutoff
};

struct SmoothingOptions {
  std::uint64_t initial_length = 256;
  /// Sweep stops once two successive extrapolated estimates differ by less
  /// than tolerance * max(1, |value|).
  double tolerance = 1e-9;
};

/// sum_n c(n) n^-s exp(-n/N) over a doubling sweep of N, with one Richardson
/// step in N. Valid for s > 1/2 for the entire L-functions used here.
EulerEval smoothed_sum(std::span<const std::int32_t> coeffs, std::span<const double> logs, double s,
                       const SmoothingOptions& opts = {});

/// Direct sum with a d_k(n) divisor-bound tail estimate; stops early once the
/// tail estimate drops below 1e-17.
EulerEval dirichlet_sum(std::span<const std::int32_t> coeffs, std::span<const double> logs, double s, int divisor_order);

/// L(s, f): smoothed sum for s < 2.5, direct sum above.
EulerEval L_f(const SeriesContext& ctx, double s, const SmoothingOptions& opts = {});
EulerEval L_sym2(const SeriesContext& ctx, double s, const SmoothingOptions& opts = {});
/// Convenience overloads that build a context of the given cutoff.
EulerEval L_f(const field::CubicField& field, double s, std::uint64_t cutoff);
EulerEval L_sym2(const field::CubicField& field, double s, std::uint64_t cutoff);

/// B_p(s): A_p(s) times the inverse local factors at p of
/// zeta^2 L^2(f) L(sym^2 f) at s - 3 and at s, each side truncated as a
/// Dirichlet series at the same depth. At p = 2 the A_2 series is used.
LocalSeries B_local(const field::CubicField& field, std::uint64_t p, double s, std::uint32_t depth);

/// Same local factor with closed-form Euler factors and a converged A_p.
double B_local_exact(field::SplitCode code, bool ramified, std::uint64_t p, double s);

/// log prod_{p <= P} B_p(s), reduced in prime-block order.
EulerEval log_harmless_factor(const SeriesContext& ctx, double s, std::uint64_t prime_cutoff);
EulerEval harmless_factor(const SeriesContext& ctx, double s);

/// All constituents of H(s) = F(s) / zeta^2(s - 3) at one point.
struct HEvaluation {
  double s = 0.0;
  LocalSeries ratio;    // B_2/A_2 at s
  EulerEval lf_shift;   // L(s-3, f)
  EulerEval ls2_shift;  // L(s-3, sym^2 f)
  double zeta = 0.0;    // zeta(s)
  EulerEval lf;         // L(s, f)
  EulerEval ls2;        // L(s, sym^2 f)
  EulerEval harmless;   // B(s)
  double G = 0.0;       // 16 zeta^2 L^2(f) L(sym^2 f) B at s
  double value = 0.0;   // H(s)
};

HEvaluation evaluate_H(const SeriesContext& ctx, double s, const SmoothingOptions& opts = {});

struct MainTermOptions {
  double initial_step = 1e-2;
  double min_step = 1e-4;
  /// Early stop once successive c0 estimates agree to this relative level.
  double target_stability = 1e-8;
  /// c0 must at least be stable to this absolute level under step halving.
  double required_stability = 1e-4;
  SmoothingOptions smoothing{};
};

struct StepRecord {
  double step = 0.0;
  double derivative = 0.0;  // central difference of H at 4
  double c0 = 0.0;          // from the Richardson-extrapolated derivative
};

struct MainTermCoeffs {
  double c1 = 0.0;
  double c0 = 0.0;
  double H4 = 0.0;
  double dH4 = 0.0;
  double gamma = kEulerGamma;
  double step = 0.0;           // smallest step used
  double c0_step_delta = 0.0;  // |c0(step) - c0(2 step)|
  HEvaluation at4;
  std::vector<StepRecord> steps;
  std::uint64_t coefficient_cutoff = 0;
  std::uint64_t prime_cutoff = 0;
};

/// (c1, c0) from H(4) and H'(4).
std::pair<double, double> laurent_coefficients(double H4, double dH4);

/// c1 = H(4)/4 and c0 = (H(s)/s)'(4) + gamma H(4)/2 from the Laurent expansion
/// zeta(s-3)^2 = (s-4)^-2 + 2 gamma (s-4)^-1 + O(1).
MainTermCoeffs main_term_coeffs(const SeriesContext& ctx, const MainTermOptions& opts = {});

/// x^4 (c1 log x + c0).
double main_term(const MainTermCoeffs& coeffs, double x);
long double main_term(double c1, double c0, long double x);

}  // namespace cubicsq::series
