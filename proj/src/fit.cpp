#include "cubicsq/fit.hpp"

#include <cfloat>
#include <cstdio>
#include <limits>
#include <string>

namespace cubicsq::fit {

namespace {

std::string format_x(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct Converted {
  std::vector<double> x;
  std::vector<long double> S;
};

Converted convert(const hybrid::SumSeries& series) {
  Converted c;
  for (const hybrid::SumSample& s : series.grid) {
    (void)significance_headroom(s.S, s.x);
    c.x.push_back(static_cast<double>(s.x));
    c.S.push_back(s.S.to_long_double());
  }
  return c;
}

}  // namespace

int significance_headroom(const WideInt& S, std::uint64_t x) {
  if (S.is_zero()) return std::numeric_limits<long double>::digits;
  const long double scaled = std::fabs(S.to_long_double()) / std::pow(static_cast<long double>(x), 4.0L);
  const int bits = std::numeric_limits<long double>::digits - std::max(0, static_cast<int>(std::ceil(std::log2(scaled))));
  if (bits < kRequiredHeadroomBits)
    throw DomainError("S at x=" + std::to_string(x) + " keeps only " + std::to_string(bits) +
                      " bits below x^4 after conversion");
  return bits;
}

FitResult fit_main_term(std::span<const double> x, std::span<const long double> S, double x_min) {
  if (x.size() != S.size()) throw DomainError("x and S differ in length");
  std::vector<long double> t, y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < x_min) continue;
    const long double xl = x[i];
    t.push_back(std::log(xl));
    y.push_back(S[i] / (xl * xl * xl * xl));
  }
  if (t.size() < kMinPoints)
    throw InsufficientPointsError("main-term fit needs " + std::to_string(kMinPoints) + " points with x >= " +
                                  format_x(x_min) + ", have " + std::to_string(t.size()));
  const LineFit<long double> line = fit_line<long double>(t, y);
  FitResult out;
  out.c1_hat = static_cast<double>(line.slope);
  out.c0_hat = static_cast<double>(line.intercept);
  out.c1_se = static_cast<double>(line.slope_se);
  out.c0_se = static_cast<double>(line.intercept_se);
  out.condition_number = static_cast<double>(line.condition);
  out.points_used = line.points;
  out.x_min = x_min;
  return out;
}

FitResult fit_main_term(const hybrid::SumSeries& series, double x_min) {
  const Converted c = convert(series);
  return fit_main_term(c.x, c.S, x_min);
}

ResidualFit residual_exponent(std::span<const double> x, std::span<const long double> S, double c1, double c0,
                              double x_min) {
  if (x.size() != S.size()) throw DomainError("x and S differ in length");
  std::vector<long double> t, y;
  std::size_t considered = 0, dropped = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < x_min) continue;
    ++considered;
    const long double M = series::main_term(c1, c0, static_cast<long double>(x[i]));
    const long double r = S[i] - M;
    // Below a few ulps of S the residual is rounding noise.
    if (std::fabs(r) <= 4.0L * LDBL_EPSILON * std::fabs(S[i])) {
      ++dropped;
      continue;
    }
    t.push_back(std::log(static_cast<long double>(x[i])));
    y.push_back(std::log(std::fabs(r)));
  }
  if (considered < kMinPoints)
    throw InsufficientPointsError("residual fit needs " + std::to_string(kMinPoints) + " points with x >= " +
                                  format_x(x_min) + ", have " + std::to_string(considered));
  if (t.empty()) throw DegenerateError("every residual vanishes; the slope is undefined");
  if (t.size() < kMinPoints)
    throw InsufficientPointsError("only " + std::to_string(t.size()) + " nonzero residuals with x >= " +
                                  format_x(x_min));
  const LineFit<long double> line = fit_line<long double>(t, y);
  ResidualFit out;
  out.slope = static_cast<double>(line.slope);
  out.slope_se = static_cast<double>(line.slope_se);
  out.intercept = static_cast<double>(line.intercept);
  out.points_used = line.points;
  out.zero_residuals_dropped = dropped;
  return out;
}

ResidualFit residual_exponent(const hybrid::SumSeries& series, double c1, double c0, double x_min) {
  const Converted c = convert(series);
  return residual_exponent(c.x, c.S, c1, c0, x_min);
}

ResidualFit residual_exponent(const hybrid::SumSeries& series, const series::MainTermCoeffs& coeffs, double x_min) {
  return residual_exponent(series, coeffs.c1, coeffs.c0, x_min);
}

LadderOutcome apply_tolerances(const FitResult& fit, const ResidualFit& residual, double c1, const Tolerances& tol) {
  LadderOutcome out;
  out.c1_relative_error = std::fabs(fit.c1_hat - c1) / std::fabs(c1);
  out.c1_ok = out.c1_relative_error <= tol.c1_relative;
  out.slope_ok = residual.slope > tol.slope_low && residual.slope < tol.slope_high;
  return out;
}

}  // namespace cubicsq::fit
