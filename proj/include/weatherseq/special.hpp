#pragma once

// Special functions backing the statistics module: normal CDF/quantile,
// regularized incomplete gamma and beta, digamma/trigamma, and the asymptotic
// Kolmogorov distribution. Series/continued-fraction forms follow the classic
// Numerical Recipes presentations; the normal quantile is Acklam's rational
// approximation with one Halley refinement.

#include <cmath>
#include <limits>

#include "weatherseq/core.hpp"

namespace wseq::special {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * detail::kPi);
}

inline double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw error("norm_quantile: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // one Halley step against the exact CDF
  double e = norm_cdf(x) - p;
  double u = e * std::sqrt(2.0 * detail::kPi) * std::exp(x * x / 2.0);
  x = x - u / (1 + x * u / 2);
  return x;
}

// Regularized lower incomplete gamma P(a,x).
inline double gamma_p(double a, double x) {
  if (a <= 0 || x < 0) throw error("gamma_p: bad arguments");
  if (x == 0) return 0;
  if (x < a + 1) {  // series
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // continued fraction for Q(a,x)
  const double fpmin = 1e-300;
  double b = x + 1 - a, c = 1 / fpmin, d = 1 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return 1 - q;
}

inline double gamma_q(double a, double x) { return 1 - gamma_p(a, x); }

// Chi-square survival function with k degrees of freedom.
inline double chi2_sf(double stat, double dof) {
  if (stat <= 0) return 1;
  return gamma_q(dof / 2.0, stat / 2.0);
}

namespace detail_beta {
inline double betacf(double a, double b, double x) {
  const double fpmin = 1e-300;
  double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1) < 1e-15) break;
  }
  return h;
}
}  // namespace detail_beta

// Regularized incomplete beta I_x(a,b).
inline double beta_inc(double a, double b, double x) {
  if (a <= 0 || b <= 0) throw error("beta_inc: shapes must be positive");
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                       b * std::log(1 - x));
  if (x < (a + 1) / (a + b + 2)) return bt * detail_beta::betacf(a, b, x) / a;
  return 1 - bt * detail_beta::betacf(b, a, 1 - x) / b;
}

// Inverse of I_x(a,b) by bisection with Newton polish.
inline double beta_inc_inv(double a, double b, double p) {
  if (!(p >= 0 && p <= 1)) throw error("beta_inc_inv: p outside [0,1]");
  if (p == 0) return 0;
  if (p == 1) return 1;
  double lo = 0, hi = 1, x = a / (a + b);
  for (int i = 0; i < 200; ++i) {
    double f = beta_inc(a, b, x) - p;
    if (f > 0)
      hi = x;
    else
      lo = x;
    double pdf = std::exp((a - 1) * std::log(std::max(x, 1e-300)) +
                          (b - 1) * std::log(std::max(1 - x, 1e-300)) + std::lgamma(a + b) -
                          std::lgamma(a) - std::lgamma(b));
    double step = pdf > 0 ? f / pdf : 0;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < 1e-14) return xn;
    x = xn;
  }
  return x;
}

inline double digamma(double x) {
  double result = 0;
  while (x < 6) {
    result -= 1 / x;
    x += 1;
  }
  double inv = 1 / x, inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 / 240)));
  return result;
}

inline double trigamma(double x) {
  double result = 0;
  while (x < 6) {
    result += 1 / (x * x);
    x += 1;
  }
  double inv = 1 / x, inv2 = inv * inv;
  result += inv * (1 + 0.5 * inv + inv2 * (1.0 / 6 - inv2 * (1.0 / 30 - inv2 / 42)));
  return result;
}

// Asymptotic Kolmogorov distribution survival Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0) return 1;
  double sum = 0;
  double sign = 1;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

}  // namespace wseq::special
