#pragma once

// Per-class stochastic weather models and synthesis of hourly sequences.
//
// Model structure per class: daily clearness index from a bounded-beta law,
// radiation hourly shapes from PCA of sum-normalized profiles, daily mean
// temperature as a Gaussian coupled to clearness through a normal copula,
// hourly temperature anomalies AR(1), wind as a Weibull marginal driven by an
// AR(1) process in normal-transformed space with a fixed diurnal modulation,
// humidity daily mean conditioned on a post-rain flag with hourly values tied
// anti-phase to the temperature anomaly, and wind direction from a circular
// histogram. Cross-variable regressions supply diffuse fraction, sunshine
// fraction and nebulosity from clearness.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weatherseq/classify.hpp"
#include "weatherseq/config.hpp"
#include "weatherseq/core.hpp"
#include "weatherseq/ingest.hpp"
#include "weatherseq/rng.hpp"
#include "weatherseq/solar.hpp"
#include "weatherseq/stats.hpp"

namespace wseq::weathergen {

constexpr int kMinClassDays = 8;
constexpr double kDefaultPostRainShiftPct = 8.0;  // RH shift when subsets are too small
constexpr int kWindDirSectors = 16;

// Rain-day proxy on indicators (no precipitation variable is measured):
// heavily overcast and very low clearness.
inline bool rain_proxy(const DailyIndicators& d) {
  return d.clearness_index < 0.25 && d.nebulosity_mean >= 6.5;
}

struct RadiationShape {
  std::array<double, 24> frac{};  // non-negative, sums to 1
  double weight = 1.0;
};

struct SubFit {
  std::string name;
  double ks_d = 0;
  double ks_p = 0;
  bool ks_pass = false;
  bool chi2_valid = false;  // enough data for the expected-count rule
  double chi2_stat = 0;
  double chi2_p = 0;
  bool chi2_pass = false;
};

struct ClassModel {
  std::string class_name;
  Season season = Season::humid;
  StationMeta station;
  int anchor_month = 1;  // modal month of the training days
  int n_days = 0;

  stats::FittedDistribution clearness;  // bounded-beta on daily clearness index
  std::vector<RadiationShape> shapes;

  double temp_mu = 0, temp_sigma = 1;
  double temp_kt_rho = 0;  // normal-copula coupling daily mean <- clearness
  std::array<double, 24> temp_diurnal{};
  double temp_phi = 0, temp_innov_sigma = 0;

  stats::FittedDistribution wind;  // weibull on demodulated hourly speed
  double wind_phi = 0;
  std::array<double, 24> wind_modulation{};  // multiplicative, mean 1

  double hum_mu = 0, hum_sigma = 1;
  double hum_postrain_shift = kDefaultPostRainShiftPct;
  double hum_temp_gain = 0;  // RH anomaly = -gain * temperature anomaly

  stats::RegressionFit diffuse_vs_kt;     // hourly diffuse fraction vs hourly clearness
  stats::RegressionFit insolation_vs_kt;  // hourly sunshine fraction vs hourly clearness

  std::array<double, kWindDirSectors> wind_dir_hist{};  // weights, sum 1

  std::vector<SubFit> fits;

  void check() const {
    if (std::abs(temp_phi) >= 1 || std::abs(wind_phi) >= 1)
      throw error("class model: AR coefficients must be inside (-1,1)");
    double wsum = 0;
    for (const auto& s : shapes) wsum += s.weight;
    if (shapes.empty() || std::abs(wsum - 1.0) > 1e-9)
      throw error("class model: shape weights must sum to 1");
  }
};

struct HistoryState {
  std::optional<double> mean_humidity_pct;  // mean RH of the preceding days
  bool post_rain = false;
  double temp_anomaly_c = 0;  // last hourly temperature anomaly
  double wind_z = 0;          // last transformed wind value
};

struct GenerationRequest {
  std::string class_name;
  Season season = Season::humid;
  int days = 5;
  uint64_t seed = 0;
  std::optional<Date> start_date;  // defaults to day 10 of the anchor month
  std::optional<HistoryState> history;
};

// ---------------------------------------------------------------------------
// wind transform

// Inverse of the wind normalization of Weibull data: map a standard-normal
// value to a wind speed, w = lambda * (-ln(1 - Phi(z)))^(1/k). Monotone in z.
inline double normal_to_weibull(double z, double k, double lambda) {
  if (!(k > 0) || !(lambda > 0)) throw error("normal_to_weibull: k and lambda must be positive");
  double p = std::clamp(special::norm_cdf(z), 1e-12, 1.0 - 1e-12);
  return lambda * std::pow(-std::log1p(-p), 1.0 / k);
}

inline double weibull_to_normal(double w, double k, double lambda) {
  if (!(k > 0) || !(lambda > 0)) throw error("weibull_to_normal: k and lambda must be positive");
  double p = w <= 0 ? 0.0 : 1.0 - std::exp(-std::pow(w / lambda, k));
  return special::norm_quantile(std::clamp(p, 1e-12, 1.0 - 1e-12));
}

// ---------------------------------------------------------------------------
// fitting

namespace detail {

// Pooled autocorrelation at a given lag over several contiguous runs: pairs
// never straddle a run boundary.
inline double pooled_autocorr(const std::vector<std::vector<double>>& runs, size_t lag) {
  double num = 0, den = 0, m = 0;
  size_t n = 0;
  for (const auto& r : runs)
    for (double v : r) {
      m += v;
      ++n;
    }
  if (n == 0) return 0;
  m /= static_cast<double>(n);
  for (const auto& r : runs) {
    for (size_t t = 0; t < r.size(); ++t) {
      den += (r[t] - m) * (r[t] - m);
      if (t + lag < r.size()) num += (r[t] - m) * (r[t + lag] - m);
    }
  }
  return den > 0 ? num / den : 0.0;
}

// Variance of the within-day mean of the hourly AR(1) anomaly stream; the
// generated daily mean carries this on top of the daily-level sigma.
inline double anomaly_daily_mean_variance(double phi, double innov_sigma) {
  double sa2 = innov_sigma * innov_sigma / std::max(1e-12, 1.0 - phi * phi);
  double s = 24.0;
  for (int k = 1; k < 24; ++k) s += 2.0 * (24 - k) * std::pow(phi, k);
  return sa2 * s / (24.0 * 24.0);
}

// AR(1) coefficient from sample autocorrelations. Anomalies are centered
// per day, which depresses every autocovariance by a common offset; the
// ratio (r1 - r2)/(1 - r1) cancels that offset and equals phi for a clean
// AR(1) stream.
inline double ar1_from_runs(const std::vector<std::vector<double>>& runs) {
  double r1 = pooled_autocorr(runs, 1);
  double r2 = pooled_autocorr(runs, 2);
  double den = 1.0 - r1;
  if (std::abs(den) < 1e-9) return 0.98;
  return (r1 - r2) / den;
}

inline stats::RegressionFit regression_or_flat(const std::vector<double>& x,
                                               const std::vector<double>& y) {
  try {
    return stats::linear_regression(x, y);
  } catch (const error&) {
    stats::RegressionFit f;
    f.slope = 0;
    f.intercept = mean(y);
    f.r_squared = 0;
    f.n = y.size();
    return f;
  }
}

inline double clamp_phi(double phi) { return std::clamp(phi, -0.98, 0.98); }

inline SubFit make_subfit(const std::string& name, const std::vector<double>& sample,
                          const stats::FittedDistribution& dist) {
  SubFit f;
  f.name = name;
  auto ks = stats::ks_test(sample, dist);
  f.ks_d = ks.d_statistic;
  f.ks_p = ks.p_value;
  f.ks_pass = ks.pass;
  try {
    auto chi2 = stats::chi_square_test(sample, dist, 10);
    f.chi2_valid = true;
    f.chi2_stat = chi2.statistic;
    f.chi2_p = chi2.p_value;
    f.chi2_pass = chi2.pass;
  } catch (const error&) {
    f.chi2_valid = false;  // too few data for the expected-count rule
  }
  return f;
}

}  // namespace detail

// Fit a full class model from catalogued sequences plus the hourly data of
// their days. day_lookup should cover all valid days of the dataset so the
// post-rain flags can look at the day before a sequence starts.
inline ClassModel build_class_model(const std::string& class_name, Season season,
                                    const std::vector<classify::WeatherSequence>& sequences,
                                    const std::map<Date, DayProfile>& day_lookup,
                                    const StationMeta& station,
                                    std::vector<Diagnostic>* diags = nullptr) {
  ClassModel model;
  model.class_name = class_name;
  model.season = season;
  model.station = station;

  struct TrainingDay {
    Date date;
    const DayProfile* profile;
    DailyIndicators ind;
    bool post_rain;
  };
  std::vector<std::vector<TrainingDay>> runs;  // per sequence, contiguous
  std::map<Date, DailyIndicators> ind_cache;
  auto indicators_of = [&](const Date& d) -> const DailyIndicators* {
    auto it = ind_cache.find(d);
    if (it != ind_cache.end()) return &it->second;
    auto dit = day_lookup.find(d);
    if (dit == day_lookup.end() || !dit->second.valid) return nullptr;
    ind_cache[d] = ingest::compute_daily_indicators(dit->second, station);
    return &ind_cache.at(d);
  };

  int n_days = 0;
  std::map<int, int> month_votes;
  for (const auto& seq : sequences) {
    std::vector<TrainingDay> run;
    for (const auto& date : seq.dates) {
      auto dit = day_lookup.find(date);
      if (dit == day_lookup.end() || !dit->second.valid)
        throw error("class day " + format_date(date) + " missing from hourly data");
      TrainingDay td;
      td.date = date;
      td.profile = &dit->second;
      td.ind = *indicators_of(date);
      const DailyIndicators* prev = indicators_of(add_days(date, -1));
      td.post_rain = prev != nullptr && rain_proxy(*prev);
      run.push_back(td);
      ++month_votes[date.month];
      ++n_days;
    }
    if (!run.empty()) runs.push_back(std::move(run));
  }
  if (n_days < kMinClassDays)
    throw error("insufficient data for class '" + class_name + "': " + std::to_string(n_days) +
                " days, need " + std::to_string(kMinClassDays));
  model.n_days = n_days;
  model.anchor_month = month_votes.begin()->first;
  for (const auto& [month, votes] : month_votes)
    if (votes > month_votes.at(model.anchor_month)) model.anchor_month = month;

  // --- daily clearness: bounded beta
  std::vector<double> kts;
  for (const auto& run : runs)
    for (const auto& td : run) kts.push_back(td.ind.clearness_index);
  double kt_min = *std::min_element(kts.begin(), kts.end());
  double kt_max = *std::max_element(kts.begin(), kts.end());
  double pad = std::max(0.02, 0.15 * (kt_max - kt_min));
  double lo = std::max(0.0, kt_min - pad), hi = std::min(1.21, kt_max + pad);
  model.clearness = stats::fit_bounded_beta(kts, lo, hi, diags);
  model.fits.push_back(detail::make_subfit("clearness daily", kts, model.clearness));

  // --- radiation shapes from PCA of sum-normalized profiles
  std::vector<std::array<double, 24>> fracs;
  for (const auto& run : runs)
    for (const auto& td : run) {
      double sum = td.ind.global_sum;
      if (sum <= 0) continue;
      std::array<double, 24> f{};
      for (int h = 0; h < 24; ++h)
        f[static_cast<size_t>(h)] = td.profile->hours[static_cast<size_t>(h)].global_whm2 / sum;
      fracs.push_back(f);
    }
  if (fracs.size() < 2) throw error("class '" + class_name + "': no radiation profiles");
  auto pca = stats::pca_daily_profiles(fracs);
  auto normalize_shape = [](std::array<double, 24> f) {
    double s = 0;
    for (double& v : f) {
      v = std::max(0.0, v);
      s += v;
    }
    if (s <= 0) throw error("radiation shape degenerated to zero");
    for (double& v : f) v /= s;
    return f;
  };
  if (pca.eigenvalues.empty() || pca.eigenvalues[0] <= 1e-12) {
    model.shapes.push_back({normalize_shape(pca.mean_profile), 1.0});
  } else {
    // column standard deviations reconstruct the component in profile space
    std::array<double, 24> sd{};
    for (int h = 0; h < 24; ++h) {
      double m = 0;
      for (const auto& f : fracs) m += f[static_cast<size_t>(h)];
      m /= static_cast<double>(fracs.size());
      double var = 0;
      for (const auto& f : fracs) var += (f[static_cast<size_t>(h)] - m) * (f[static_cast<size_t>(h)] - m);
      sd[static_cast<size_t>(h)] = std::sqrt(var / static_cast<double>(fracs.size()));
    }
    double spread = std::sqrt(pca.eigenvalues[0]);
    std::array<double, 24> plus{}, minus{};
    for (int h = 0; h < 24; ++h) {
      double delta = spread * pca.eigenvectors[0][static_cast<size_t>(h)] * sd[static_cast<size_t>(h)];
      plus[static_cast<size_t>(h)] = pca.mean_profile[static_cast<size_t>(h)] + delta;
      minus[static_cast<size_t>(h)] = pca.mean_profile[static_cast<size_t>(h)] - delta;
    }
    double cut = 0.43 * spread;  // tercile split of the leading score
    int n_plus = 0, n_minus = 0, n_mid = 0;
    for (const auto& score : pca.scores) {
      if (score[0] > cut)
        ++n_plus;
      else if (score[0] < -cut)
        ++n_minus;
      else
        ++n_mid;
    }
    double total = static_cast<double>(n_plus + n_minus + n_mid);
    if (n_mid > 0) model.shapes.push_back({normalize_shape(pca.mean_profile), n_mid / total});
    if (n_plus > 0) model.shapes.push_back({normalize_shape(plus), n_plus / total});
    if (n_minus > 0) model.shapes.push_back({normalize_shape(minus), n_minus / total});
  }

  // --- temperature
  std::vector<double> daily_means;
  for (const auto& run : runs)
    for (const auto& td : run) daily_means.push_back(td.ind.temp_mean);
  auto temp_fit = stats::fit_gaussian(daily_means);  // throws on degenerate variance
  model.temp_mu = temp_fit.mu;
  model.temp_sigma = temp_fit.sigma;
  model.fits.push_back(detail::make_subfit("temperature daily mean", daily_means, temp_fit));
  {
    // copula coupling: correlation between normal scores of clearness and temperature
    double num = 0, dkt = 0, dtm = 0;
    std::vector<double> zkt, ztm;
    for (size_t i = 0; i < kts.size(); ++i) {
      double p = std::clamp(model.clearness.cdf(kts[i]), 1e-9, 1 - 1e-9);
      zkt.push_back(special::norm_quantile(p));
      ztm.push_back((daily_means[i] - model.temp_mu) / model.temp_sigma);
    }
    double mkt = mean(zkt), mtm = mean(ztm);
    for (size_t i = 0; i < zkt.size(); ++i) {
      num += (zkt[i] - mkt) * (ztm[i] - mtm);
      dkt += (zkt[i] - mkt) * (zkt[i] - mkt);
      dtm += (ztm[i] - mtm) * (ztm[i] - mtm);
    }
    model.temp_kt_rho = (dkt > 0 && dtm > 0) ? std::clamp(num / std::sqrt(dkt * dtm), -0.95, 0.95) : 0.0;
  }
  {
    // mean diurnal cycle, then AR(1) on the residual anomalies
    std::array<double, 24> diurnal{};
    for (const auto& run : runs)
      for (const auto& td : run)
        for (int h = 0; h < 24; ++h)
          diurnal[static_cast<size_t>(h)] +=
              td.profile->hours[static_cast<size_t>(h)].temp_c - td.ind.temp_mean;
    double dmean = 0;
    for (double& v : diurnal) v /= static_cast<double>(n_days);
    for (double v : diurnal) dmean += v / 24.0;
    for (double& v : diurnal) v -= dmean;
    model.temp_diurnal = diurnal;

    std::vector<std::vector<double>> anomaly_runs;
    double var_sum = 0;
    size_t var_n = 0;
    for (const auto& run : runs) {
      std::vector<double> a;
      for (const auto& td : run)
        for (int h = 0; h < 24; ++h) {
          double v = td.profile->hours[static_cast<size_t>(h)].temp_c - td.ind.temp_mean -
                     diurnal[static_cast<size_t>(h)];
          a.push_back(v);
          var_sum += v * v;
          ++var_n;
        }
      anomaly_runs.push_back(std::move(a));
    }
    double var = var_n > 0 ? var_sum / static_cast<double>(var_n) : 0.0;
    model.temp_phi = detail::clamp_phi(detail::ar1_from_runs(anomaly_runs));
    model.temp_innov_sigma = std::sqrt(std::max(0.0, var * (1 - model.temp_phi * model.temp_phi)));
  }

  // --- wind: diurnal modulation, weibull marginal, AR(1) in normal space
  {
    std::array<double, 24> hour_mean{};
    double overall = 0;
    for (const auto& run : runs)
      for (const auto& td : run)
        for (int h = 0; h < 24; ++h) {
          hour_mean[static_cast<size_t>(h)] += td.profile->hours[static_cast<size_t>(h)].wind_ms;
          overall += td.profile->hours[static_cast<size_t>(h)].wind_ms;
        }
    overall /= static_cast<double>(n_days * 24);
    if (overall <= 0) throw error("class '" + class_name + "': wind is identically zero");
    for (double& v : hour_mean) v = std::max(0.2, v / static_cast<double>(n_days) / overall);
    model.wind_modulation = hour_mean;

    std::vector<double> demod;
    std::vector<std::vector<double>> z_runs;
    for (const auto& run : runs)
      for (const auto& td : run)
        for (int h = 0; h < 24; ++h)
          demod.push_back(td.profile->hours[static_cast<size_t>(h)].wind_ms /
                          model.wind_modulation[static_cast<size_t>(h)]);
    model.wind = stats::fit_weibull(demod, diags);
    for (const auto& run : runs) {
      std::vector<double> z;
      for (const auto& td : run)
        for (int h = 0; h < 24; ++h)
          z.push_back(weibull_to_normal(td.profile->hours[static_cast<size_t>(h)].wind_ms /
                                            model.wind_modulation[static_cast<size_t>(h)],
                                        model.wind.shape_k, model.wind.scale_lambda));
      z_runs.push_back(std::move(z));
    }
    model.wind_phi = detail::clamp_phi(detail::ar1_from_runs(z_runs));
    model.fits.push_back(detail::make_subfit("wind hourly (demodulated)", demod, model.wind));
  }

  // --- humidity: daily mean gaussian conditioned on the post-rain flag
  {
    std::vector<double> base, post, all;
    for (const auto& run : runs)
      for (const auto& td : run) {
        all.push_back(td.ind.humidity_mean);
        (td.post_rain ? post : base).push_back(td.ind.humidity_mean);
      }
    if (base.size() >= kMinClassDays && post.size() >= kMinClassDays) {
      auto fb = stats::fit_gaussian(base);
      model.hum_mu = fb.mu;
      model.hum_sigma = fb.sigma;
      model.hum_postrain_shift = mean(post) - fb.mu;
    } else {
      auto fa = stats::fit_gaussian(all);
      model.hum_mu = fa.mu;
      model.hum_sigma = fa.sigma;
      model.hum_postrain_shift = kDefaultPostRainShiftPct;
      if (diags)
        diags->push_back({Diagnostic::Severity::warning, "build_class_model",
                          "too few post-rain days, using the default humidity shift"});
    }
    stats::FittedDistribution hum_dist;
    hum_dist.family = stats::Family::gaussian;
    hum_dist.mu = model.hum_mu;
    hum_dist.sigma = model.hum_sigma;
    hum_dist.n = all.size();
    model.fits.push_back(detail::make_subfit("humidity daily mean", all, hum_dist));

    // anti-phase hourly tie to the temperature deviation
    std::vector<double> tdev, hdev;
    for (const auto& run : runs)
      for (const auto& td : run)
        for (int h = 0; h < 24; ++h) {
          tdev.push_back(td.profile->hours[static_cast<size_t>(h)].temp_c - td.ind.temp_mean);
          hdev.push_back(td.profile->hours[static_cast<size_t>(h)].rh_pct - td.ind.humidity_mean);
        }
    auto fit = detail::regression_or_flat(tdev, hdev);
    model.hum_temp_gain = std::max(0.0, -fit.slope);
  }

  // --- hourly cross regressions on daylight hours
  {
    std::vector<double> kt_h, df_h, ins_h;
    for (const auto& run : runs)
      for (const auto& td : run)
        for (int h = 0; h < 24; ++h) {
          const auto& rec = td.profile->hours[static_cast<size_t>(h)];
          double i0 = solar::extraterrestrial_hourly_whm2(station, td.date, h);
          if (i0 < 20 || rec.global_whm2 < 5) continue;
          kt_h.push_back(std::clamp(rec.global_whm2 / i0, 0.0, 1.2));
          df_h.push_back(rec.diffuse_whm2 / rec.global_whm2);
          ins_h.push_back(rec.insolation_h);
        }
    model.diffuse_vs_kt = detail::regression_or_flat(kt_h, df_h);
    model.insolation_vs_kt = detail::regression_or_flat(kt_h, ins_h);
  }

  // --- wind direction circular histogram of daily means
  {
    double total = 0;
    for (const auto& run : runs)
      for (const auto& td : run) {
        int sector = static_cast<int>(wrap_deg(td.ind.wind_dir_daily_mean) / (360.0 / kWindDirSectors));
        sector = std::min(sector, kWindDirSectors - 1);
        model.wind_dir_hist[static_cast<size_t>(sector)] += 1;
        total += 1;
      }
    for (double& v : model.wind_dir_hist) v /= total;
  }

  model.check();
  return model;
}

// ---------------------------------------------------------------------------
// generation

namespace detail {

inline int pick_weighted(double u, const std::vector<double>& weights) {
  double acc = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

inline int okta_from_diffuse_fraction(double df) {
  return static_cast<int>(std::lround(8.0 * std::clamp((df - 0.15) / 0.80, 0.0, 1.0)));
}

}  // namespace detail

// Deterministic synthesis: the whole random stream is owned by the request
// seed, and draws happen in a fixed order per day.
inline std::vector<DayProfile> generate_sequence(const ClassModel& model,
                                                 const GenerationRequest& request) {
  if (request.class_name != model.class_name && request.class_name != slugify(model.class_name))
    throw error("unknown class '" + request.class_name + "' for this model");
  if (request.days < 1) throw error("request.days must be >= 1");
  model.check();

  HistoryState hist = request.history.value_or(HistoryState{});
  if (hist.mean_humidity_pct && (*hist.mean_humidity_pct < 0 || *hist.mean_humidity_pct > 100))
    throw error("invalid history state: mean humidity outside [0,100]");

  Date start = request.start_date.value_or(Date{2001, model.anchor_month, 10});
  Rng rng(request.seed);

  std::vector<double> shape_weights;
  for (const auto& s : model.shapes) shape_weights.push_back(s.weight);

  // without an explicit history the AR chains enter at stationary draws, so
  // the first day is statistically identical to the rest
  double a_prev, z_prev;
  if (request.history) {
    a_prev = hist.temp_anomaly_c;
    z_prev = hist.wind_z;
  } else {
    double stationary_sd =
        model.temp_innov_sigma / std::sqrt(std::max(1e-12, 1.0 - model.temp_phi * model.temp_phi));
    a_prev = stationary_sd * rng.normal();
    z_prev = rng.normal();
  }
  bool post_rain = hist.post_rain;

  std::vector<DayProfile> out;
  for (int di = 0; di < request.days; ++di) {
    Date date = add_days(start, di);
    // fixed draw order: clearness, temperature, humidity, shape, direction
    double z_kt = rng.normal();
    double z_tm = rng.normal();
    double z_hm = rng.normal();
    double u_shape = rng.uniform();
    double u_sector = rng.uniform();
    double u_dir = rng.uniform();

    double kt = model.clearness.quantile(special::norm_cdf(z_kt));
    double rho = model.temp_kt_rho;
    double t_mean = model.temp_mu +
                    model.temp_sigma * (rho * z_kt + std::sqrt(1 - rho * rho) * z_tm);
    double hum_mu = model.hum_mu + (post_rain ? model.hum_postrain_shift : 0.0);
    if (di == 0 && hist.mean_humidity_pct)
      hum_mu = 0.5 * (hum_mu + *hist.mean_humidity_pct);  // persistence blend on entry
    double h_mean = std::clamp(hum_mu + model.hum_sigma * z_hm, 5.0, 99.0);

    const RadiationShape& shape =
        model.shapes[static_cast<size_t>(detail::pick_weighted(u_shape, shape_weights))];
    int sector = detail::pick_weighted(
        u_sector, std::vector<double>(model.wind_dir_hist.begin(), model.wind_dir_hist.end()));
    double wind_dir = wrap_deg((sector + u_dir) * (360.0 / kWindDirSectors));

    double h0 = solar::extraterrestrial_daily_whm2(model.station.latitude_deg, date);
    double g_day = kt * h0;
    double df_day = std::clamp(model.diffuse_vs_kt.predict(kt), 0.03, 1.0);

    DayProfile day;
    day.date = date;
    day.valid = true;
    for (int h = 0; h < 24; ++h) {
      double eps_t = rng.normal();
      double eps_w = rng.normal();

      double i0 = solar::extraterrestrial_hourly_whm2(model.station, date, h);
      double g = shape.frac[static_cast<size_t>(h)] * g_day;
      if (i0 <= 0)
        g = 0;
      else
        g = std::min(g, 1.15 * i0);
      double kt_h = i0 > 0 ? std::clamp(g / i0, 0.0, 1.2) : 0.0;
      double df_h = g > 0 ? std::clamp(model.diffuse_vs_kt.predict(kt_h), 0.03, 1.0) : 0.0;

      a_prev = model.temp_phi * a_prev + model.temp_innov_sigma * eps_t;
      z_prev = model.wind_phi * z_prev + std::sqrt(1 - model.wind_phi * model.wind_phi) * eps_w;

      HourlyRecord r;
      r.timestamp = {date, h};
      double dev = model.temp_diurnal[static_cast<size_t>(h)] + a_prev;
      r.temp_c = t_mean + dev;
      r.rh_pct = std::clamp(h_mean - model.hum_temp_gain * dev, 5.0, 100.0);
      r.wind_ms = model.wind_modulation[static_cast<size_t>(h)] *
                  normal_to_weibull(z_prev, model.wind.shape_k, model.wind.scale_lambda);
      r.wind_dir_deg = wind_dir;
      r.global_whm2 = g;
      r.diffuse_whm2 = std::min(df_h * g, g);
      r.insolation_h = g > 0 ? std::clamp(model.insolation_vs_kt.predict(kt_h), 0.0, 1.0) : 0.0;
      r.nebulosity_okta = detail::okta_from_diffuse_fraction(g > 0 ? df_h : df_day);
      day.hours[static_cast<size_t>(h)] = r;
    }
    // thread the rain history across generated days
    DailyIndicators ind = ingest::compute_daily_indicators(day, model.station);
    post_rain = rain_proxy(ind);
    out.push_back(std::move(day));
  }
  return out;
}

// ---------------------------------------------------------------------------
// validation

struct ValidationCheck {
  std::string name;
  double value = 0;      // p-value for KS checks, |delta| for the AR check
  double threshold = 0;  // pass condition: value > threshold (KS) or value <= threshold (AR)
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Compare generated days against their model targets: marginal KS tests for
// daily temperature, daily clearness, humidity (probability integral
// transform over the conditional mean) and decimated hourly wind, plus the
// lag-1 autocorrelation of hourly temperature anomalies against phi.
inline ValidationReport validate_generated(const std::vector<DayProfile>& days,
                                           const ClassModel& model) {
  if (days.size() < 30) throw error("validate_generated: need at least 30 days");
  ValidationReport report;

  std::vector<DailyIndicators> inds;
  for (const auto& d : days) inds.push_back(ingest::compute_daily_indicators(d, model.station));

  double day_mean_var =
      detail::anomaly_daily_mean_variance(model.temp_phi, model.temp_innov_sigma);
  {  // temperature daily mean: daily sigma plus the anomaly day-mean term
    std::vector<double> tm;
    for (const auto& i : inds) tm.push_back(i.temp_mean);
    stats::FittedDistribution target;
    target.family = stats::Family::gaussian;
    target.mu = model.temp_mu;
    target.sigma = std::sqrt(model.temp_sigma * model.temp_sigma + day_mean_var);
    auto ks = stats::ks_test(tm, target);
    report.checks.push_back({"temperature daily mean KS", ks.p_value, stats::kAlpha, ks.pass});
  }
  {  // daily clearness
    std::vector<double> kt;
    for (const auto& i : inds)
      kt.push_back(std::clamp(i.clearness_index, model.clearness.lo, model.clearness.hi));
    auto ks = stats::ks_test(kt, model.clearness);
    report.checks.push_back({"clearness daily KS", ks.p_value, stats::kAlpha, ks.pass});
  }
  {  // humidity daily mean, standardized by its conditional distribution; the
     // hourly anti-phase tie adds gain^2 times the anomaly day-mean variance
    double sigma_eff = std::sqrt(model.hum_sigma * model.hum_sigma +
                                 model.hum_temp_gain * model.hum_temp_gain * day_mean_var);
    std::vector<double> z;
    for (size_t i = 1; i < inds.size(); ++i) {  // day 0 depends on unknown entry history
      bool post = rain_proxy(inds[i - 1]) &&
                  day_number(inds[i].date) == day_number(inds[i - 1].date) + 1;
      double mu = model.hum_mu + (post ? model.hum_postrain_shift : 0.0);
      z.push_back((inds[i].humidity_mean - mu) / sigma_eff);
    }
    stats::FittedDistribution std_normal;
    std_normal.family = stats::Family::gaussian;
    std_normal.mu = 0;
    std_normal.sigma = 1;
    auto ks = stats::ks_test(z, std_normal);
    report.checks.push_back({"humidity daily mean KS", ks.p_value, stats::kAlpha, ks.pass});
  }
  {  // hourly wind, demodulated and decimated to stride 12 for near-independence
    std::vector<double> w;
    for (const auto& d : days)
      for (int h = 3; h < 24; h += 12)
        w.push_back(d.hours[static_cast<size_t>(h)].wind_ms /
                    model.wind_modulation[static_cast<size_t>(h)]);
    auto ks = stats::ks_test(w, model.wind);
    report.checks.push_back({"wind marginal KS", ks.p_value, stats::kAlpha, ks.pass});
  }
  {  // lag-1 autocorrelation of hourly temperature anomalies
    std::vector<std::vector<double>> runs;
    std::vector<double> current;
    for (size_t i = 0; i < days.size(); ++i) {
      if (i > 0 && day_number(days[i].date) != day_number(days[i - 1].date) + 1) {
        runs.push_back(current);
        current.clear();
      }
      double day_mean = inds[i].temp_mean;
      for (int h = 0; h < 24; ++h)
        current.push_back(days[i].hours[static_cast<size_t>(h)].temp_c - day_mean -
                          model.temp_diurnal[static_cast<size_t>(h)]);
    }
    runs.push_back(current);
    double ar1 = detail::ar1_from_runs(runs);
    double delta = std::abs(ar1 - model.temp_phi);
    report.checks.push_back({"temperature anomaly lag-1 autocorrelation", delta, 0.1, delta <= 0.1});
  }
  return report;
}

// ---------------------------------------------------------------------------
// model files

namespace detail {

inline config::Node num_node(const std::string& name, double v) {
  return {name, {fmt_num(v, 17)}, {}, false};
}

inline config::Node array_node(const std::string& name, const double* v, size_t n) {
  config::Node node{name, {}, {}, false};
  for (size_t i = 0; i < n; ++i) node.args.push_back(fmt_num(v[i], 17));
  return node;
}

inline void read_array(const config::Node& n, double* out, size_t count) {
  if (n.args.size() != count)
    throw error("model file: '" + n.name + "' expects " + std::to_string(count) + " values");
  for (size_t i = 0; i < count; ++i) out[i] = n.arg_num(i);
}

inline config::Node dist_node(const std::string& name, const stats::FittedDistribution& d) {
  config::Node n{name, {}, {}, true};
  n.children.push_back({"family", {stats::family_name(d.family)}, {}, false});
  n.children.push_back(num_node("mu", d.mu));
  n.children.push_back(num_node("sigma", d.sigma));
  n.children.push_back(num_node("shape_k", d.shape_k));
  n.children.push_back(num_node("scale_lambda", d.scale_lambda));
  n.children.push_back(num_node("alpha", d.alpha));
  n.children.push_back(num_node("beta", d.beta));
  n.children.push_back(num_node("lo", d.lo));
  n.children.push_back(num_node("hi", d.hi));
  n.children.push_back(num_node("n", static_cast<double>(d.n)));
  return n;
}

inline stats::FittedDistribution dist_from(const config::Node& n) {
  stats::FittedDistribution d;
  auto fam = stats::family_from_name(n.child_str("family"));
  if (!fam) throw error("model file: unknown family");
  d.family = *fam;
  d.mu = n.child_num("mu");
  d.sigma = n.child_num("sigma");
  d.shape_k = n.child_num("shape_k");
  d.scale_lambda = n.child_num("scale_lambda");
  d.alpha = n.child_num("alpha");
  d.beta = n.child_num("beta");
  d.lo = n.child_num("lo");
  d.hi = n.child_num("hi");
  d.n = static_cast<size_t>(n.child_num("n"));
  return d;
}

inline config::Node regression_node(const std::string& name, const stats::RegressionFit& f) {
  config::Node n{name, {}, {}, true};
  n.children.push_back(num_node("slope", f.slope));
  n.children.push_back(num_node("intercept", f.intercept));
  n.children.push_back(num_node("r_squared", f.r_squared));
  n.children.push_back(num_node("residual_std", f.residual_std));
  return n;
}

inline stats::RegressionFit regression_from(const config::Node& n) {
  stats::RegressionFit f;
  f.slope = n.child_num("slope");
  f.intercept = n.child_num("intercept");
  f.r_squared = n.child_num("r_squared");
  f.residual_std = n.child_num("residual_std");
  return f;
}

}  // namespace detail

inline std::vector<config::Node> model_to_config(const ClassModel& m) {
  using detail::array_node;
  using detail::num_node;
  config::Node root{"model", {m.class_name}, {}, true};
  root.children.push_back({"season", {season_name(m.season)}, {}, false});
  config::Node st{"station", {}, {}, true};
  st.children.push_back(num_node("latitude", m.station.latitude_deg));
  st.children.push_back(num_node("longitude", m.station.longitude_deg));
  st.children.push_back(num_node("elevation", m.station.elevation_m));
  root.children.push_back(std::move(st));
  root.children.push_back(num_node("anchor_month", m.anchor_month));
  root.children.push_back(num_node("n_days", m.n_days));
  root.children.push_back(detail::dist_node("clearness", m.clearness));
  for (const auto& s : m.shapes) {
    config::Node sn{"shape", {}, {}, true};
    sn.children.push_back(num_node("weight", s.weight));
    sn.children.push_back(array_node("frac", s.frac.data(), 24));
    root.children.push_back(std::move(sn));
  }
  config::Node t{"temperature", {}, {}, true};
  t.children.push_back(num_node("mu", m.temp_mu));
  t.children.push_back(num_node("sigma", m.temp_sigma));
  t.children.push_back(num_node("kt_rho", m.temp_kt_rho));
  t.children.push_back(num_node("phi", m.temp_phi));
  t.children.push_back(num_node("innov_sigma", m.temp_innov_sigma));
  t.children.push_back(array_node("diurnal", m.temp_diurnal.data(), 24));
  root.children.push_back(std::move(t));
  config::Node w{"wind", {}, {}, true};
  w.children.push_back(detail::dist_node("marginal", m.wind));
  w.children.push_back(num_node("phi", m.wind_phi));
  w.children.push_back(array_node("modulation", m.wind_modulation.data(), 24));
  root.children.push_back(std::move(w));
  config::Node hm{"humidity", {}, {}, true};
  hm.children.push_back(num_node("mu", m.hum_mu));
  hm.children.push_back(num_node("sigma", m.hum_sigma));
  hm.children.push_back(num_node("postrain_shift", m.hum_postrain_shift));
  hm.children.push_back(num_node("temp_gain", m.hum_temp_gain));
  root.children.push_back(std::move(hm));
  root.children.push_back(detail::regression_node("diffuse_vs_kt", m.diffuse_vs_kt));
  root.children.push_back(detail::regression_node("insolation_vs_kt", m.insolation_vs_kt));
  root.children.push_back(array_node("wind_dir_hist", m.wind_dir_hist.data(), kWindDirSectors));
  for (const auto& f : m.fits) {
    config::Node fn{"fit", {f.name}, {}, true};
    fn.children.push_back(num_node("ks_d", f.ks_d));
    fn.children.push_back(num_node("ks_p", f.ks_p));
    fn.children.push_back(num_node("ks_pass", f.ks_pass ? 1 : 0));
    fn.children.push_back(num_node("chi2_valid", f.chi2_valid ? 1 : 0));
    fn.children.push_back(num_node("chi2_stat", f.chi2_stat));
    fn.children.push_back(num_node("chi2_p", f.chi2_p));
    fn.children.push_back(num_node("chi2_pass", f.chi2_pass ? 1 : 0));
    root.children.push_back(std::move(fn));
  }
  return {root};
}

inline ClassModel model_from_config(const std::vector<config::Node>& nodes) {
  const config::Node* root = nullptr;
  for (const auto& n : nodes)
    if (n.name == "model") root = &n;
  if (!root) throw error("model file: missing 'model' block");

  ClassModel m;
  m.class_name = root->arg_str(0);
  auto season = season_from_name(root->child_str("season"));
  if (!season) throw error("model file: unknown season");
  m.season = *season;
  const config::Node* st = root->find("station");
  if (!st) throw error("model file: missing station block");
  m.station.latitude_deg = st->child_num("latitude");
  m.station.longitude_deg = st->child_num("longitude");
  m.station.elevation_m = st->child_num("elevation");
  m.anchor_month = static_cast<int>(root->child_num("anchor_month"));
  m.n_days = static_cast<int>(root->child_num("n_days"));
  m.clearness = detail::dist_from(*root->find("clearness"));
  for (const auto* sn : root->find_all("shape")) {
    RadiationShape s;
    s.weight = sn->child_num("weight");
    detail::read_array(*sn->find("frac"), s.frac.data(), 24);
    m.shapes.push_back(s);
  }
  const config::Node* t = root->find("temperature");
  if (!t) throw error("model file: missing temperature block");
  m.temp_mu = t->child_num("mu");
  m.temp_sigma = t->child_num("sigma");
  m.temp_kt_rho = t->child_num("kt_rho");
  m.temp_phi = t->child_num("phi");
  m.temp_innov_sigma = t->child_num("innov_sigma");
  detail::read_array(*t->find("diurnal"), m.temp_diurnal.data(), 24);
  const config::Node* w = root->find("wind");
  if (!w) throw error("model file: missing wind block");
  m.wind = detail::dist_from(*w->find("marginal"));
  m.wind_phi = w->child_num("phi");
  detail::read_array(*w->find("modulation"), m.wind_modulation.data(), 24);
  const config::Node* hm = root->find("humidity");
  if (!hm) throw error("model file: missing humidity block");
  m.hum_mu = hm->child_num("mu");
  m.hum_sigma = hm->child_num("sigma");
  m.hum_postrain_shift = hm->child_num("postrain_shift");
  m.hum_temp_gain = hm->child_num("temp_gain");
  m.diffuse_vs_kt = detail::regression_from(*root->find("diffuse_vs_kt"));
  m.insolation_vs_kt = detail::regression_from(*root->find("insolation_vs_kt"));
  detail::read_array(*root->find("wind_dir_hist"), m.wind_dir_hist.data(), kWindDirSectors);
  for (const auto* fn : root->find_all("fit")) {
    SubFit f;
    f.name = fn->arg_str(0);
    f.ks_d = fn->child_num("ks_d");
    f.ks_p = fn->child_num("ks_p");
    f.ks_pass = fn->child_num("ks_pass") != 0;
    f.chi2_valid = fn->child_num_or("chi2_valid", 0) != 0;
    f.chi2_stat = fn->child_num_or("chi2_stat", 0);
    f.chi2_p = fn->child_num_or("chi2_p", 0);
    f.chi2_pass = fn->child_num_or("chi2_pass", 0) != 0;
    m.fits.push_back(f);
  }
  m.check();
  return m;
}

}  // namespace wseq::weathergen
