#pragma once

// Distribution fitting and goodness-of-fit testing, autocorrelation, linear
// regression, PCA of hourly daily profiles, and Welch spectral coherence.

#include <complex>
#include <numeric>
#include <optional>
#include <vector>

#include "weatherseq/core.hpp"
#include "weatherseq/linalg.hpp"
#include "weatherseq/special.hpp"

namespace wseq::stats {

constexpr double kAlpha = 0.05;
constexpr size_t kMinSampleSize = 8;

// ---------------------------------------------------------------------------
// distributions

enum class Family { gaussian, weibull, bounded_beta };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::weibull: return "weibull";
    case Family::bounded_beta: return "bounded-beta";
  }
  return "?";
}

inline std::optional<Family> family_from_name(const std::string& s) {
  if (s == "gaussian") return Family::gaussian;
  if (s == "weibull") return Family::weibull;
  if (s == "bounded-beta") return Family::bounded_beta;
  return std::nullopt;
}

struct FittedDistribution {
  Family family = Family::gaussian;
  // gaussian
  double mu = 0, sigma = 1;
  // weibull
  double shape_k = 1, scale_lambda = 1;
  // bounded beta
  double alpha = 1, beta = 1, lo = 0, hi = 1;

  size_t n = 0;
  double log_likelihood = 0;
  bool used_fallback = false;  // weibull moment fallback / beta polish rejected

  int parameter_count() const { return 2; }

  double cdf(double x) const {
    switch (family) {
      case Family::gaussian:
        return special::norm_cdf((x - mu) / sigma);
      case Family::weibull:
        return x <= 0 ? 0.0 : 1.0 - std::exp(-std::pow(x / scale_lambda, shape_k));
      case Family::bounded_beta: {
        if (x <= lo) return 0;
        if (x >= hi) return 1;
        return special::beta_inc(alpha, beta, (x - lo) / (hi - lo));
      }
    }
    return 0;
  }

  double quantile(double p) const {
    if (!(p >= 0 && p <= 1)) throw error("quantile: p outside [0,1]");
    switch (family) {
      case Family::gaussian:
        return mu + sigma * special::norm_quantile(std::clamp(p, 1e-15, 1 - 1e-15));
      case Family::weibull: {
        double pc = std::clamp(p, 1e-15, 1 - 1e-15);
        return scale_lambda * std::pow(-std::log1p(-pc), 1.0 / shape_k);
      }
      case Family::bounded_beta:
        return lo + (hi - lo) * special::beta_inc_inv(alpha, beta, p);
    }
    return 0;
  }
};

namespace detail {

inline void require_sample(const std::vector<double>& sample) {
  if (sample.size() < kMinSampleSize)
    throw error("sample too small (need >= " + std::to_string(kMinSampleSize) + ")");
  for (double v : sample)
    if (!std::isfinite(v)) throw error("non-finite sample value");
}

inline double variance_population(const std::vector<double>& v, double m) {
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

// Moment estimate of the Weibull shape from the coefficient of variation.
inline double weibull_shape_from_moments(double mean_, double sd) {
  double cv2 = (sd / mean_) * (sd / mean_);
  double lo = 0.02, hi = 100;
  auto f = [&](double k) {
    double g1 = std::lgamma(1 + 1 / k), g2 = std::lgamma(1 + 2 / k);
    return std::exp(g2 - 2 * g1) - 1 - cv2;
  };
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline FittedDistribution fit_gaussian(const std::vector<double>& sample) {
  detail::require_sample(sample);
  double m = mean(sample);
  double var = detail::variance_population(sample, m);
  if (var <= 0) throw error("degenerate sample: zero variance");
  FittedDistribution d;
  d.family = Family::gaussian;
  d.mu = m;
  d.sigma = std::sqrt(var);
  d.n = sample.size();
  double n = static_cast<double>(sample.size());
  d.log_likelihood = -0.5 * n * (1 + std::log(2 * wseq::detail::kPi * var));
  return d;
}

// Weibull by maximum likelihood: Newton on the profile shape equation
//   sum x^k ln x / sum x^k - 1/k - mean(ln x) = 0
// tolerance 1e-8, at most 100 iterations; moment fallback on failure.
inline FittedDistribution fit_weibull(const std::vector<double>& sample,
                                      std::vector<Diagnostic>* diags = nullptr) {
  detail::require_sample(sample);
  double xmax = 0;
  for (double v : sample) {
    if (v < 0) throw error("weibull requires non-negative values");
    xmax = std::max(xmax, v);
  }
  if (xmax <= 0) throw error("degenerate sample: all zero");
  std::vector<double> x = sample;
  for (double& v : x) v = std::max(v, 1e-6 * xmax);  // keep ln x finite

  double m = mean(x);
  double sd = std::sqrt(detail::variance_population(x, m));
  if (sd <= 0) throw error("degenerate sample: zero variance");

  double mean_lnx = 0;
  for (double v : x) mean_lnx += std::log(v);
  mean_lnx /= static_cast<double>(x.size());

  double sd_lnx = 0;
  for (double v : x) sd_lnx += (std::log(v) - mean_lnx) * (std::log(v) - mean_lnx);
  sd_lnx = std::sqrt(sd_lnx / static_cast<double>(x.size()));
  double k = sd_lnx > 0 ? 1.28255 / sd_lnx : 1.0;  // pi/sqrt(6) / sd(ln x)

  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    double s0 = 0, s1 = 0, s2 = 0;
    for (double v : x) {
      double vk = std::pow(v, k), lv = std::log(v);
      s0 += vk;
      s1 += vk * lv;
      s2 += vk * lv * lv;
    }
    double g = s1 / s0 - 1.0 / k - mean_lnx;
    double gp = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (k * k);
    double step = g / gp;
    double kn = k - step;
    if (!(kn > 1e-4 && kn < 1e4) || !std::isfinite(kn)) break;
    double delta = std::abs(kn - k);
    k = kn;
    if (delta < 1e-8) {
      converged = true;
      break;
    }
  }

  FittedDistribution d;
  d.family = Family::weibull;
  d.n = sample.size();
  if (!converged) {
    d.used_fallback = true;
    if (diags)
      diags->push_back({Diagnostic::Severity::warning, "fit_weibull",
                        "shape iteration did not converge, using moment estimate"});
    k = detail::weibull_shape_from_moments(m, sd);
  }
  double s0 = 0;
  for (double v : x) s0 += std::pow(v, k);
  double lambda = std::pow(s0 / static_cast<double>(x.size()), 1.0 / k);
  d.shape_k = k;
  d.scale_lambda = lambda;
  double ll = 0;
  for (double v : x)
    ll += std::log(k) - k * std::log(lambda) + (k - 1) * std::log(v) - std::pow(v / lambda, k);
  d.log_likelihood = ll;
  return d;
}

// Bounded beta on [lo,hi]: moments first, then a few Newton steps on the
// log-likelihood (digamma/trigamma); falls back to moments if polishing
// leaves the admissible region.
inline FittedDistribution fit_bounded_beta(const std::vector<double>& sample, double lo, double hi,
                                           std::vector<Diagnostic>* diags = nullptr) {
  detail::require_sample(sample);
  if (!(lo < hi)) throw error("bounded-beta: lo must be < hi");
  std::vector<double> y;
  y.reserve(sample.size());
  for (double v : sample) {
    if (v < lo || v > hi) throw error("bounded-beta: value outside declared support");
    y.push_back(std::clamp((v - lo) / (hi - lo), 1e-9, 1 - 1e-9));
  }
  double m = mean(y);
  double var = detail::variance_population(y, m);
  if (var <= 1e-14) throw error("degenerate sample: zero variance");

  double common = m * (1 - m) / var - 1;
  if (common <= 0) common = 1e-3;
  double a = std::max(1e-3, m * common);
  double b = std::max(1e-3, (1 - m) * common);

  double mean_lny = 0, mean_ln1my = 0;
  for (double v : y) {
    mean_lny += std::log(v);
    mean_ln1my += std::log(1 - v);
  }
  double n = static_cast<double>(y.size());
  mean_lny /= n;
  mean_ln1my /= n;

  double pa = a, pb = b;
  bool ok = true;
  for (int it = 0; it < 50; ++it) {
    double ga = special::digamma(pa + pb) - special::digamma(pa) + mean_lny;
    double gb = special::digamma(pa + pb) - special::digamma(pb) + mean_ln1my;
    double tab = special::trigamma(pa + pb);
    double haa = tab - special::trigamma(pa);
    double hbb = tab - special::trigamma(pb);
    double det = haa * hbb - tab * tab;
    if (std::abs(det) < 1e-30) {
      ok = false;
      break;
    }
    double da = (ga * hbb - gb * tab) / det;
    double db = (gb * haa - ga * tab) / det;
    double na = pa - da, nb = pb - db;
    if (!(na > 1e-6 && nb > 1e-6 && na < 1e6 && nb < 1e6)) {
      ok = false;
      break;
    }
    double delta = std::abs(na - pa) + std::abs(nb - pb);
    pa = na;
    pb = nb;
    if (delta < 1e-10) break;
  }

  FittedDistribution d;
  d.family = Family::bounded_beta;
  d.lo = lo;
  d.hi = hi;
  d.n = sample.size();
  if (ok) {
    d.alpha = pa;
    d.beta = pb;
  } else {
    d.alpha = a;
    d.beta = b;
    d.used_fallback = true;
    if (diags)
      diags->push_back({Diagnostic::Severity::warning, "fit_bounded_beta",
                        "likelihood polish rejected, keeping moment estimate"});
  }
  double lnB = std::lgamma(d.alpha) + std::lgamma(d.beta) - std::lgamma(d.alpha + d.beta);
  double ll = 0;
  for (double v : y) ll += (d.alpha - 1) * std::log(v) + (d.beta - 1) * std::log(1 - v);
  ll -= n * lnB + n * std::log(hi - lo);
  d.log_likelihood = ll;
  return d;
}

inline FittedDistribution fit_distribution(Family family, const std::vector<double>& sample,
                                           double support_lo = 0, double support_hi = 1,
                                           std::vector<Diagnostic>* diags = nullptr) {
  switch (family) {
    case Family::gaussian: return fit_gaussian(sample);
    case Family::weibull: return fit_weibull(sample, diags);
    case Family::bounded_beta: return fit_bounded_beta(sample, support_lo, support_hi, diags);
  }
  throw error("unknown family");
}

// ---------------------------------------------------------------------------
// goodness of fit

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 0;
  bool pass = false;  // at alpha = 0.05
  int bins_used = 0;
};

// Pearson chi-square over equal-probability bins of the fitted model. Bin
// count is reduced until every expected count is at least 5.
inline ChiSquareResult chi_square_test(const std::vector<double>& sample,
                                       const FittedDistribution& dist, int n_bins) {
  detail::require_sample(sample);
  if (n_bins < 2) throw error("chi_square_test: need at least 2 bins");
  int n = static_cast<int>(sample.size());
  int m = std::min(n_bins, n / 5);
  int min_bins = dist.parameter_count() + 2;  // keep dof >= 1
  if (m < min_bins) throw error("chi_square_test: too few data for the expected-count rule");

  std::vector<double> edges;
  for (int i = 1; i < m; ++i) edges.push_back(dist.quantile(static_cast<double>(i) / m));

  std::vector<int> counts(static_cast<size_t>(m), 0);
  for (double v : sample) {
    size_t b = static_cast<size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
    ++counts[b];
  }
  double expected = static_cast<double>(n) / m;
  double stat = 0;
  for (int c : counts) stat += (c - expected) * (c - expected) / expected;

  ChiSquareResult r;
  r.statistic = stat;
  r.bins_used = m;
  r.dof = m - 1 - dist.parameter_count();
  r.p_value = special::chi2_sf(stat, r.dof);
  r.pass = r.p_value > kAlpha;
  return r;
}

struct KsResult {
  double d_statistic = 0;
  double p_value = 0;
  bool pass = false;
};

// One-sample Kolmogorov-Smirnov against the fitted CDF; asymptotic p-value
// via the Kolmogorov distribution with the Stephens small-sample factor.
inline KsResult ks_test(const std::vector<double>& sample, const FittedDistribution& dist) {
  detail::require_sample(sample);
  std::vector<double> s = sample;
  std::sort(s.begin(), s.end());
  double n = static_cast<double>(s.size());
  double d = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    double f = dist.cdf(s[i]);
    double di = static_cast<double>(i);
    d = std::max(d, std::max((di + 1) / n - f, f - di / n));
  }
  KsResult r;
  r.d_statistic = d;
  double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  r.p_value = special::kolmogorov_q(lambda);
  r.pass = r.p_value > kAlpha;
  return r;
}

// ---------------------------------------------------------------------------
// series statistics

// Biased autocorrelation r(l) = sum (x_t - m)(x_{t+l} - m) / sum (x_t - m)^2.
inline std::vector<double> autocorrelation(const std::vector<double>& series, int max_lag) {
  if (static_cast<int>(series.size()) <= max_lag + 1)
    throw error("autocorrelation: series too short for max_lag");
  double m = mean(series);
  double denom = 0;
  for (double v : series) denom += (v - m) * (v - m);
  if (denom <= 0) throw error("autocorrelation: zero-variance series");
  std::vector<double> r(static_cast<size_t>(max_lag) + 1, 0.0);
  for (int lag = 0; lag <= max_lag; ++lag) {
    double s = 0;
    for (size_t t = 0; t + static_cast<size_t>(lag) < series.size(); ++t)
      s += (series[t] - m) * (series[t + static_cast<size_t>(lag)] - m);
    r[static_cast<size_t>(lag)] = s / denom;
  }
  return r;
}

struct RegressionFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double residual_std = 0;
  size_t n = 0;

  double predict(double x) const { return intercept + slope * x; }
};

inline RegressionFit linear_regression(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw error("linear_regression: length mismatch");
  if (x.size() < 3) throw error("linear_regression: need at least 3 points");
  double mx = mean(x), my = mean(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) throw error("linear_regression: constant x");
  RegressionFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - f.predict(x[i]);
    ss_res += e * e;
  }
  f.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  f.residual_std = std::sqrt(ss_res / static_cast<double>(x.size() - 2));
  return f;
}

// ---------------------------------------------------------------------------
// PCA of daily profiles

struct PcaResult {
  std::array<double, 24> mean_profile{};
  std::vector<double> eigenvalues;                  // descending
  std::vector<std::array<double, 24>> eigenvectors;  // zeros at excluded hours
  std::vector<double> explained;                    // fraction of retained variance
  std::vector<std::vector<double>> scores;          // n_days x components
  std::vector<int> excluded_hours;                  // constant columns
  std::vector<Diagnostic> diagnostics;
};

// Eigen-decomposition of the 24x24 correlation matrix across days. Constant
// hour columns are excluded with a diagnostic.
inline PcaResult pca_daily_profiles(const std::vector<std::array<double, 24>>& days) {
  if (days.size() < 2) throw error("pca: need at least 2 days");
  const size_t n = days.size();
  PcaResult res;
  if (n < 24)
    res.diagnostics.push_back({Diagnostic::Severity::warning, "pca",
                               "fewer days than hour dimensions; components are unstable"});

  std::array<double, 24> sd{};
  for (int h = 0; h < 24; ++h) {
    double m = 0;
    for (const auto& d : days) m += d[static_cast<size_t>(h)];
    m /= static_cast<double>(n);
    res.mean_profile[static_cast<size_t>(h)] = m;
    double var = 0;
    for (const auto& d : days) {
      double e = d[static_cast<size_t>(h)] - m;
      var += e * e;
    }
    sd[static_cast<size_t>(h)] = std::sqrt(var / static_cast<double>(n));
  }

  std::vector<int> retained;
  for (int h = 0; h < 24; ++h) {
    if (sd[static_cast<size_t>(h)] > 1e-12) {
      retained.push_back(h);
    } else {
      res.excluded_hours.push_back(h);
      res.diagnostics.push_back({Diagnostic::Severity::warning, "pca",
                                 "hour " + std::to_string(h) + " constant, excluded"});
    }
  }
  if (retained.empty()) return res;  // fully degenerate input; mean profile only

  const size_t m = retained.size();
  // standardized data and correlation matrix
  std::vector<std::vector<double>> z(n, std::vector<double>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      int h = retained[j];
      z[i][j] = (days[i][static_cast<size_t>(h)] - res.mean_profile[static_cast<size_t>(h)]) /
                sd[static_cast<size_t>(h)];
    }
  linalg::Matrix corr(m, m);
  for (size_t a = 0; a < m; ++a)
    for (size_t b = a; b < m; ++b) {
      double s = 0;
      for (size_t i = 0; i < n; ++i) s += z[i][a] * z[i][b];
      corr(a, b) = corr(b, a) = s / static_cast<double>(n);
    }

  auto eig = linalg::symmetric_eigen(corr);
  double trace = static_cast<double>(m);
  for (size_t k = 0; k < m; ++k) {
    double val = std::max(0.0, eig.values[k]);
    res.eigenvalues.push_back(val);
    res.explained.push_back(val / trace);
    std::array<double, 24> vec{};
    for (size_t j = 0; j < m; ++j) vec[static_cast<size_t>(retained[j])] = eig.vectors[k][j];
    res.eigenvectors.push_back(vec);
  }
  res.scores.assign(n, std::vector<double>(m, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < m; ++k) {
      double s = 0;
      for (size_t j = 0; j < m; ++j) s += z[i][j] * eig.vectors[k][j];
      res.scores[i][k] = s;
    }
  return res;
}

// ---------------------------------------------------------------------------
// spectral coherence

struct CoherenceResult {
  std::vector<double> frequency;  // cycles per sample (hourly input: cycles/hour)
  std::vector<double> coherence;  // squared coherence in [0,1]
  int segments = 0;
  double lowpass_cutoff = 0;
};

namespace detail {

inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2 * wseq::detail::kPi / static_cast<double>(len);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        auto u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Centered moving average; the window shrinks at the edges.
inline std::vector<double> moving_average(const std::vector<double>& x, int window) {
  if (window <= 1) return x;
  int half = window / 2;
  std::vector<double> out(x.size());
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    int a = std::max(0, i - half);
    int b = std::min(static_cast<int>(x.size()) - 1, i + half);
    double s = 0;
    for (int j = a; j <= b; ++j) s += x[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = s / (b - a + 1);
  }
  return out;
}

}  // namespace detail

// Welch-averaged squared coherence with Hann window and 50% overlap. If
// lowpass_cutoff > 0 (cycles/sample), both series are pre-filtered with a
// moving average of width round(1/cutoff).
inline CoherenceResult coherence(const std::vector<double>& x_in, const std::vector<double>& y_in,
                                 size_t segment_len, double lowpass_cutoff = 0) {
  if (x_in.size() != y_in.size()) throw error("coherence: length mismatch");
  if (segment_len < 8 || (segment_len & (segment_len - 1)) != 0)
    throw error("coherence: segment_len must be a power of two (>= 8)");
  if (x_in.size() < 4 * segment_len) throw error("coherence: series shorter than 4 segments");

  std::vector<double> x = x_in, y = y_in;
  if (lowpass_cutoff > 0) {
    int window = std::max(1, static_cast<int>(std::lround(1.0 / lowpass_cutoff)));
    x = detail::moving_average(x, window);
    y = detail::moving_average(y, window);
  }

  const size_t half = segment_len / 2;
  std::vector<double> hann(segment_len);
  for (size_t i = 0; i < segment_len; ++i)
    hann[i] = 0.5 * (1 - std::cos(2 * wseq::detail::kPi * static_cast<double>(i) /
                                  static_cast<double>(segment_len - 1)));

  std::vector<double> pxx(half, 0.0), pyy(half, 0.0);
  std::vector<std::complex<double>> pxy(half, {0.0, 0.0});
  int segments = 0;
  for (size_t start = 0; start + segment_len <= x.size(); start += half) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < segment_len; ++i) {
      mx += x[start + i];
      my += y[start + i];
    }
    mx /= static_cast<double>(segment_len);
    my /= static_cast<double>(segment_len);
    double vx = 0, vy = 0;
    std::vector<std::complex<double>> fx(segment_len), fy(segment_len);
    for (size_t i = 0; i < segment_len; ++i) {
      double dx = x[start + i] - mx, dy = y[start + i] - my;
      vx += dx * dx;
      vy += dy * dy;
      fx[i] = dx * hann[i];
      fy[i] = dy * hann[i];
    }
    if (vx <= 0 || vy <= 0) throw error("coherence: zero-variance segment");
    detail::fft_inplace(fx);
    detail::fft_inplace(fy);
    for (size_t k = 1; k <= half; ++k) {
      size_t idx = k - 1;
      pxx[idx] += std::norm(fx[k]);
      pyy[idx] += std::norm(fy[k]);
      pxy[idx] += fx[k] * std::conj(fy[k]);
    }
    ++segments;
  }

  CoherenceResult res;
  res.segments = segments;
  res.lowpass_cutoff = lowpass_cutoff;
  for (size_t k = 1; k <= half; ++k) {
    size_t idx = k - 1;
    res.frequency.push_back(static_cast<double>(k) / static_cast<double>(segment_len));
    double denom = pxx[idx] * pyy[idx];
    double c = denom > 0 ? std::norm(pxy[idx]) / denom : 0.0;
    res.coherence.push_back(std::clamp(c, 0.0, 1.0));
  }
  return res;
}

}  // namespace wseq::stats
