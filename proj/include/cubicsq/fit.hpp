#pragma once

// Least-squares comparison of sampled S(x) with x^4 (c1 log x + c0).

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cubicsq/errors.hpp"
#include "cubicsq/hybrid.hpp"
#include "cubicsq/series.hpp"

namespace cubicsq::fit {

inline constexpr double kDefaultXMin = 1e4;
inline constexpr std::size_t kMinPoints = 8;
inline constexpr int kRequiredHeadroomBits = 40;

template <typename Scalar>
struct LineFit {
  Scalar slope{}, intercept{};
  Scalar slope_se{}, intercept_se{};
  Scalar condition{};  // 2-norm condition number of the design matrix
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * t + intercept.
template <typename Scalar>
LineFit<Scalar> fit_line(std::span<const Scalar> t, std::span<const Scalar> y) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto n = static_cast<Eigen::Index>(t.size());
  if (n < 3 || y.size() != t.size()) throw InsufficientPointsError("line fit needs at least 3 points");
  Matrix A(n, 2);
  Vector b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = t[static_cast<std::size_t>(i)];
    A(i, 1) = Scalar(1);
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(1) > Scalar(0))) throw DegenerateError("line fit: design matrix is rank deficient");
  const Eigen::Matrix<Scalar, 2, 1> beta = svd.solve(b);
  const Vector resid = b - A * beta;
  const Scalar sigma2 = resid.squaredNorm() / Scalar(n - 2);
  const Eigen::Matrix<Scalar, 2, 2> cov = sigma2 * (A.transpose() * A).inverse();

  LineFit<Scalar> out;
  out.slope = beta(0);
  out.intercept = beta(1);
  out.slope_se = std::sqrt(cov(0, 0));
  out.intercept_se = std::sqrt(cov(1, 1));
  out.condition = sv(0) / sv(1);
  out.points = static_cast<std::size_t>(n);
  return out;
}

struct FitResult {
  double c1_hat = 0.0, c0_hat = 0.0;
  double c1_se = 0.0, c0_se = 0.0;
  double condition_number = 0.0;
  std::size_t points_used = 0;
  double x_min = kDefaultXMin;
};

struct ResidualFit {
  double slope = 0.0, slope_se = 0.0, intercept = 0.0;
  std::size_t points_used = 0;
  std::size_t zero_residuals_dropped = 0;
};

/// Fit of S(x)/x^4 against (log x, 1) over the samples with x >= x_min.
FitResult fit_main_term(std::span<const double> x, std::span<const long double> S, double x_min = kDefaultXMin);
FitResult fit_main_term(const hybrid::SumSeries& series, double x_min = kDefaultXMin);

/// Slope of log|S - M| against log x, M(x) = x^4 (c1 log x + c0).
ResidualFit residual_exponent(std::span<const double> x, std::span<const long double> S, double c1, double c0,
                              double x_min = kDefaultXMin);
ResidualFit residual_exponent(const hybrid::SumSeries& series, const series::MainTermCoeffs& coeffs,
                              double x_min = kDefaultXMin);
ResidualFit residual_exponent(const hybrid::SumSeries& series, double c1, double c0, double x_min = kDefaultXMin);

/// Mantissa bits of long double left over after scaling S by x^4; throws
/// DomainError below kRequiredHeadroomBits.
int significance_headroom(const WideInt& S, std::uint64_t x);

struct Tolerances {
  double c1_relative = 0.05;
  double slope_low = 3.0;
  double slope_high = 4.0;
};

struct LadderOutcome {
  double c1_relative_error = 0.0;
  bool c1_ok = false;
  bool slope_ok = false;
  bool passed() const { return c1_ok && slope_ok; }
};

LadderOutcome apply_tolerances(const FitResult& fit, const ResidualFit& residual, double c1, const Tolerances& tol);

}  // namespace cubicsq::fit
