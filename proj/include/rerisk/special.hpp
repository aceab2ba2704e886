#pragma once

// Distribution functions needed by the test statistics and risk measures.

namespace rerisk::special {

inline constexpr double k_pi = 3.14159265358979323846;

[[nodiscard]] double normal_pdf(double x);
[[nodiscard]] double normal_cdf(double x);
/// Inverse of normal_cdf on (0, 1); accurate to a few ulps.
[[nodiscard]] double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x).
[[nodiscard]] double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
[[nodiscard]] double gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double beta_inc(double a, double b, double x);

/// P(X >= x) for X ~ chi-square(df).
[[nodiscard]] double chi2_sf(double x, double df);
/// P(X >= x) for X ~ F(d1, d2).
[[nodiscard]] double f_sf(double x, double d1, double d2);

}  // namespace rerisk::special
