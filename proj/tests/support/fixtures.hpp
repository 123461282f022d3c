#pragma once

// Synthetic weather construction for tests: parameterized tropical days with
// controllable radiation class, wind regime, temperature and humidity.

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "weatherseq/classify.hpp"
#include "weatherseq/core.hpp"
#include "weatherseq/ingest.hpp"
#include "weatherseq/solar.hpp"

namespace fixture {

inline wseq::StationMeta station() { return {-20.89, 55.53, 8.0}; }  // coastal tropical site

struct DaySpec {
  double temp_mean = 26.0;
  double temp_amplitude = 3.0;  // half peak-to-trough, peak at 14:00
  double rh_mean = 75.0;
  double rh_amplitude = 8.0;  // anti-phase with temperature
  double wind_day = 2.0;      // constant over hours 6..17 -> exact diurnal mean
  double wind_night = 1.0;
  double wind_dir = 90.0;
  double target_global_whm2 = 6000.0;  // daily sum, distributed with the clear-sky shape
  double diffuse_fraction = 0.30;
  int okta = 3;
  double insolation = 0.7;
};

inline wseq::DayProfile synth_day(const wseq::Date& date, const wseq::StationMeta& st,
                                  const DaySpec& spec) {
  wseq::DayProfile day;
  day.date = date;
  day.valid = true;

  double i0_sum = 0;
  std::array<double, 24> i0{};
  for (int h = 0; h < 24; ++h) {
    i0[static_cast<size_t>(h)] = wseq::solar::extraterrestrial_hourly_whm2(st, date, h);
    i0_sum += i0[static_cast<size_t>(h)];
  }
  double kt = i0_sum > 0 ? spec.target_global_whm2 / i0_sum : 0.0;

  for (int h = 0; h < 24; ++h) {
    wseq::HourlyRecord r;
    r.timestamp = {date, h};
    double phase = std::cos(2 * wseq::detail::kPi * (h - 14) / 24.0);
    r.temp_c = spec.temp_mean + spec.temp_amplitude * phase;
    r.rh_pct = std::clamp(spec.rh_mean - spec.rh_amplitude * phase, 2.0, 100.0);
    r.wind_ms = (h >= 6 && h < 18) ? spec.wind_day : spec.wind_night;
    r.wind_dir_deg = spec.wind_dir;
    r.nebulosity_okta = spec.okta;
    r.global_whm2 = kt * i0[static_cast<size_t>(h)];
    r.diffuse_whm2 = spec.diffuse_fraction * r.global_whm2;
    r.insolation_h = r.global_whm2 > 0 ? spec.insolation : 0.0;
    day.hours[static_cast<size_t>(h)] = r;
  }
  return day;
}

inline std::vector<wseq::HourlyRecord> flatten(const std::vector<wseq::DayProfile>& days) {
  std::vector<wseq::HourlyRecord> out;
  for (const auto& d : days)
    for (const auto& h : d.hours) out.push_back(h);
  return out;
}

inline std::string temp_path(const std::string& name) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() / "wseq_tests";
  std::filesystem::create_directories(dir);
  return (dir / (std::to_string(counter++) + "_" + name)).string();
}

inline std::string write_file(const std::string& name, const std::string& content) {
  std::string path = temp_path(name);
  std::ofstream out(path);
  out << content;
  return path;
}

inline std::string write_hourly(const std::string& name, const std::vector<wseq::DayProfile>& days) {
  std::string path = temp_path(name);
  wseq::ingest::write_hourly_csv(path, flatten(days));
  return path;
}

// A randomized weather regime: day-to-day variation plus autocorrelated
// hourly noise, built on an independent generator (std::mt19937_64).
struct ClassSpec {
  double global_mean = 6500, global_sd = 300;
  double wind_day_mean = 2.0, wind_day_sd = 0.30;
  double wind_night_frac = 0.55;
  double temp_mean = 27.0, temp_sd = 0.8, temp_amp = 3.0;
  double rh_mean = 75.0, rh_sd = 3.0, rh_amp = 8.0;
  double df_mean = 0.30, df_sd = 0.04;
  double wind_dir_mean = 90.0, wind_dir_sd = 25.0;  // one draw per day
  double hourly_temp_noise = 0.35;  // innovation of an AR(0.75) anomaly
  double hourly_wind_noise = 0.20;  // relative, AR(0.8)
  int okta = 3;
};

inline std::vector<wseq::DayProfile> make_class_days(const wseq::Date& start, int n,
                                                     const wseq::StationMeta& st,
                                                     const ClassSpec& spec, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<wseq::DayProfile> out;
  double temp_ar = 0, wind_ar = 0;
  for (int i = 0; i < n; ++i) {
    DaySpec d;
    d.temp_mean = spec.temp_mean + spec.temp_sd * unit(gen);
    d.temp_amplitude = spec.temp_amp;
    d.rh_mean = spec.rh_mean + spec.rh_sd * unit(gen);
    d.rh_amplitude = spec.rh_amp;
    d.wind_day = std::max(0.2, spec.wind_day_mean + spec.wind_day_sd * unit(gen));
    d.wind_night = d.wind_day * spec.wind_night_frac;
    d.wind_dir = wseq::wrap_deg(spec.wind_dir_mean + spec.wind_dir_sd * unit(gen));
    d.target_global_whm2 = std::max(700.0, spec.global_mean + spec.global_sd * unit(gen));
    d.diffuse_fraction = std::clamp(spec.df_mean + spec.df_sd * unit(gen), 0.05, 0.95);
    d.okta = spec.okta;
    auto day = synth_day(wseq::add_days(start, i), st, d);
    for (int h = 0; h < 24; ++h) {
      auto& r = day.hours[static_cast<size_t>(h)];
      temp_ar = 0.75 * temp_ar + spec.hourly_temp_noise * unit(gen);
      wind_ar = 0.80 * wind_ar + 0.6 * unit(gen);
      r.temp_c += temp_ar;
      r.rh_pct = std::clamp(r.rh_pct - 1.0 * temp_ar, 2.0, 100.0);
      r.wind_ms = std::max(0.0, r.wind_ms * std::max(0.05, 1.0 + spec.hourly_wind_noise * wind_ar));
    }
    out.push_back(std::move(day));
  }
  return out;
}

// Wrap consecutive day profiles into catalogue-style sequences of run_len.
inline std::vector<wseq::classify::WeatherSequence> as_sequences(
    const std::vector<wseq::DayProfile>& days, const wseq::StationMeta& st,
    const std::string& criteria_name, int run_len = 1000000) {
  std::vector<wseq::classify::WeatherSequence> out;
  wseq::classify::WeatherSequence cur;
  cur.criteria_name = criteria_name;
  for (const auto& d : days) {
    cur.dates.push_back(d.date);
    cur.days.push_back(wseq::ingest::compute_daily_indicators(d, st));
    if (static_cast<int>(cur.dates.size()) >= run_len) {
      out.push_back(cur);
      cur.dates.clear();
      cur.days.clear();
    }
  }
  if (!cur.dates.empty()) out.push_back(cur);
  return out;
}

inline std::map<wseq::Date, wseq::DayProfile> day_lookup(const std::vector<wseq::DayProfile>& days) {
  std::map<wseq::Date, wseq::DayProfile> out;
  for (const auto& d : days) out[d.date] = d;
  return out;
}

}  // namespace fixture
