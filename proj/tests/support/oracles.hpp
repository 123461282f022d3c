#pragma once

// Independent reference implementations used as test oracles. These must not
// reuse the library's code paths for the quantities they check.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "weatherseq/core.hpp"

namespace oracle {

// Brute-force day classification: for every day and every criteria, evaluate
// each predicate by a linear scan over the bins, applying the half-open
// convention explicitly.
struct BfBin {
  double lo, hi;
  std::string label;
};
struct BfPredicate {
  std::string indicator;
  std::set<std::string> allowed;
};
struct BfCriteria {
  std::string name;
  std::vector<BfPredicate> predicates;
};

inline std::string bf_label(const std::vector<BfBin>& bins, double v) {
  for (size_t i = 0; i < bins.size(); ++i) {
    if (i + 1 == bins.size()) {
      if (v >= bins[i].lo && v <= bins[i].hi) return bins[i].label;
    } else {
      if (v >= bins[i].lo && v < bins[i].hi) return bins[i].label;
    }
  }
  return "";
}

inline std::map<std::string, std::vector<wseq::Date>> bf_classify(
    const std::vector<std::pair<wseq::Date, std::map<std::string, double>>>& days,
    const std::map<std::string, std::vector<BfBin>>& bins_by_indicator,
    const std::vector<BfCriteria>& criteria) {
  std::map<std::string, std::vector<wseq::Date>> out;
  for (const auto& c : criteria) out[c.name] = {};
  for (const auto& [date, values] : days) {
    for (const auto& c : criteria) {
      bool all = true;
      for (const auto& p : c.predicates) {
        std::string label = bf_label(bins_by_indicator.at(p.indicator), values.at(p.indicator));
        if (label.empty() || !p.allowed.count(label)) {
          all = false;
          break;
        }
      }
      if (all) out[c.name].push_back(date);
    }
  }
  return out;
}

// Exhaustive run detection: every (start,end) window of consecutive dates is
// tested for maximality and minimum length.
inline std::vector<std::pair<wseq::Date, wseq::Date>> bf_runs(const std::vector<wseq::Date>& dates,
                                                              int min_len) {
  std::set<long> have;
  for (const auto& d : dates) have.insert(wseq::day_number(d));
  std::vector<std::pair<wseq::Date, wseq::Date>> out;
  for (long s : have) {
    if (have.count(s - 1)) continue;  // not a run start
    long e = s;
    while (have.count(e + 1)) ++e;
    if (e - s + 1 >= min_len) out.push_back({wseq::civil_from_days(s), wseq::civil_from_days(e)});
  }
  return out;
}

// Fine-step quadrature of extraterrestrial horizontal irradiance over a day,
// using the same declination/eccentricity series as the implementation but an
// independent integration path.
inline double quadrature_extraterrestrial_daily(double latitude_deg, const wseq::Date& date,
                                                double step_minutes = 0.5) {
  double sum_w = 0;
  int steps = static_cast<int>(std::lround(24 * 60 / step_minutes));
  for (int i = 0; i < steps; ++i) {
    double hour = (i + 0.5) * step_minutes / 60.0;
    int doy = wseq::day_of_year(date);
    double g = 2 * wseq::detail::kPi * (doy - 1) / 365.0;
    double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                  0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                  0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
    double e0 = 1.000110 + 0.034221 * std::cos(g) + 0.001280 * std::sin(g) +
                0.000719 * std::cos(2 * g) + 0.000077 * std::sin(2 * g);
    // solar time == local time for this oracle: integrate over the true solar day
    double ha = wseq::deg2rad(15.0 * (hour - 12.0));
    double lat = wseq::deg2rad(latitude_deg);
    double sin_alt = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(ha);
    if (sin_alt > 0) sum_w += 1367.0 * e0 * sin_alt * (step_minutes / 60.0);
  }
  return sum_w;
}

// Seeded samplers with known parameters (independent of the library RNG).
inline std::vector<double> weibull_sample(double k, double lambda, size_t n, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::weibull_distribution<double> dist(k, lambda);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(gen);
  return out;
}

inline std::vector<double> gaussian_sample(double mu, double sigma, size_t n, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(mu, sigma);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(gen);
  return out;
}

inline std::vector<double> uniform_sample(double lo, double hi, size_t n, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(gen);
  return out;
}

inline std::vector<double> ar1_sample(double phi, double noise_sd, size_t n, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, noise_sd);
  std::vector<double> out(n);
  double x = 0;
  for (auto& v : out) {
    x = phi * x + dist(gen);
    v = x;
  }
  return out;
}

}  // namespace oracle
