#pragma once

// Hourly station data ingestion: CSV parsing with per-row validation,
// gap-filled day assembly, and daily indicator computation.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weatherseq/core.hpp"
#include "weatherseq/csv.hpp"
#include "weatherseq/solar.hpp"

namespace wseq::ingest {

// Days with clearness above this are treated as sensor over-read and dropped.
constexpr double kClearnessInvalidLimit = 1.2;
constexpr int kMaxGapHours = 3;

inline const std::vector<std::string>& hourly_csv_header() {
  static const std::vector<std::string> h = {
      "timestamp",      "temp_c",       "rh_pct",       "wind_ms",    "wind_dir_deg",
      "nebulosity_okta", "insolation_h", "global_whm2", "diffuse_whm2"};
  return h;
}

struct ParseResult {
  std::vector<HourlyRecord> records;  // sorted, de-duplicated
  std::vector<Diagnostic> diagnostics;
};

inline ParseResult parse_hourly_csv(const std::string& path, const StationMeta& /*station*/) {
  csv::Table t = csv::read_file(path);
  if (t.header != hourly_csv_header()) {
    std::string got;
    for (size_t i = 0; i < t.header.size(); ++i) got += (i ? "," : "") + t.header[i];
    throw error("malformed header in " + path + ": got '" + got + "'");
  }

  ParseResult out;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    std::string where = "row " + std::to_string(i + 2);
    if (row.size() != hourly_csv_header().size()) {
      out.diagnostics.push_back({Diagnostic::Severity::rejected, where, "wrong field count"});
      continue;
    }
    auto ts = parse_timestamp(row[0]);
    if (!ts) {
      out.diagnostics.push_back({Diagnostic::Severity::rejected, where, "bad timestamp '" + row[0] + "'"});
      continue;
    }
    HourlyRecord r;
    r.timestamp = *ts;
    try {
      r.temp_c = csv::to_num(row[1], "temp_c");
      r.rh_pct = csv::to_num(row[2], "rh_pct");
      r.wind_ms = csv::to_num(row[3], "wind_ms");
      r.wind_dir_deg = csv::to_num(row[4], "wind_dir_deg");
      double okta = csv::to_num(row[5], "nebulosity_okta");
      if (okta != std::floor(okta)) throw error("nebulosity_okta not an integer");
      r.nebulosity_okta = static_cast<int>(okta);
      r.insolation_h = csv::to_num(row[6], "insolation_h");
      r.global_whm2 = csv::to_num(row[7], "global_whm2");
      r.diffuse_whm2 = csv::to_num(row[8], "diffuse_whm2");
    } catch (const error& e) {
      out.diagnostics.push_back({Diagnostic::Severity::rejected, where, e.what()});
      continue;
    }
    if (auto reason = check_record(r)) {
      out.diagnostics.push_back({Diagnostic::Severity::rejected, where, *reason});
      continue;
    }
    out.records.push_back(r);
  }

  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const HourlyRecord& a, const HourlyRecord& b) { return a.timestamp < b.timestamp; });
  // drop later duplicates of the same timestamp
  std::vector<HourlyRecord> dedup;
  for (const auto& r : out.records) {
    if (!dedup.empty() && dedup.back().timestamp == r.timestamp) {
      out.diagnostics.push_back({Diagnostic::Severity::warning, format_timestamp(r.timestamp),
                                 "duplicate timestamp, later row dropped"});
      continue;
    }
    dedup.push_back(r);
  }
  out.records = std::move(dedup);
  return out;
}

namespace detail {

// Interpolate along the shortest arc between two directions.
inline double lerp_direction(double a_deg, double b_deg, double t) {
  double d = std::fmod(b_deg - a_deg + 540.0, 360.0) - 180.0;
  return wrap_deg(a_deg + t * d);
}

inline HourlyRecord lerp_record(const HourlyRecord& a, const HourlyRecord& b, double t,
                                const DateTime& ts) {
  auto mix = [t](double x, double y) { return x + t * (y - x); };
  HourlyRecord r;
  r.timestamp = ts;
  r.temp_c = mix(a.temp_c, b.temp_c);
  r.rh_pct = std::clamp(mix(a.rh_pct, b.rh_pct), 0.0, 100.0);
  r.wind_ms = std::max(0.0, mix(a.wind_ms, b.wind_ms));
  r.wind_dir_deg = lerp_direction(a.wind_dir_deg, b.wind_dir_deg, t);
  r.nebulosity_okta = std::clamp(static_cast<int>(std::lround(
                                     mix(a.nebulosity_okta, b.nebulosity_okta))), 0, 8);
  r.insolation_h = std::clamp(mix(a.insolation_h, b.insolation_h), 0.0, 1.0);
  r.global_whm2 = std::max(0.0, mix(a.global_whm2, b.global_whm2));
  r.diffuse_whm2 = std::clamp(mix(a.diffuse_whm2, b.diffuse_whm2), 0.0, r.global_whm2);
  return r;
}

}  // namespace detail

// Group sorted records into days. Gaps of up to kMaxGapHours consecutive
// missing hours are filled by linear interpolation between the bounding
// records (circular for wind direction); a day touched by a longer or
// unbounded gap is marked invalid. Invalid days never enter classification.
inline std::vector<DayProfile> assemble_days(const std::vector<HourlyRecord>& records) {
  std::vector<DayProfile> days;
  if (records.empty()) return days;

  long first = records.front().timestamp.hours_since_epoch();
  long last = records.back().timestamp.hours_since_epoch();

  std::map<long, HourlyRecord> by_hour;
  for (const auto& r : records) by_hour[r.timestamp.hours_since_epoch()] = r;

  std::map<long, HourlyRecord> filled = by_hour;
  std::map<long, bool> interpolated;
  long gap_start = 0;
  bool in_gap = false;
  for (long h = first; h <= last; ++h) {
    if (by_hour.count(h)) {
      if (in_gap) {
        long gap_len = h - gap_start;
        if (gap_len <= kMaxGapHours) {
          const HourlyRecord& a = by_hour.at(gap_start - 1);
          const HourlyRecord& b = by_hour.at(h);
          for (long g = gap_start; g < h; ++g) {
            double t = static_cast<double>(g - (gap_start - 1)) / static_cast<double>(gap_len + 1);
            filled[g] = detail::lerp_record(a, b, t, datetime_from_hours(g));
            interpolated[g] = true;
          }
        }
        in_gap = false;
      }
    } else if (!in_gap) {
      in_gap = true;
      gap_start = h;
    }
  }

  Date d0 = records.front().timestamp.date;
  Date d1 = records.back().timestamp.date;
  for (long dn = day_number(d0); dn <= day_number(d1); ++dn) {
    DayProfile day;
    day.date = civil_from_days(dn);
    bool complete = true;
    for (int h = 0; h < 24; ++h) {
      long key = dn * 24 + h;
      auto it = filled.find(key);
      if (it == filled.end()) {
        complete = false;
        break;
      }
      day.hours[static_cast<size_t>(h)] = it->second;
      if (interpolated.count(key)) ++day.fill_count;
    }
    day.valid = complete;
    if (!complete) day.fill_count = 0;
    days.push_back(day);
  }
  return days;
}

// Daily indicators. Diurnal window is hours 06..17, nocturnal 21..23 and
// 00..05 (wind drops in the night; both windows are fixed conventions).
inline DailyIndicators compute_daily_indicators(const DayProfile& day, const StationMeta& station) {
  if (!day.valid) throw error("indicators requested for an invalid day " + format_date(day.date));

  DailyIndicators ind;
  ind.date = day.date;

  std::vector<double> temps, rhs, winds_diurnal, winds_nocturnal, dirs_daily, dirs_nocturnal, oktas;
  for (int h = 0; h < 24; ++h) {
    const HourlyRecord& r = day.hours[static_cast<size_t>(h)];
    temps.push_back(r.temp_c);
    rhs.push_back(r.rh_pct);
    oktas.push_back(static_cast<double>(r.nebulosity_okta));
    dirs_daily.push_back(r.wind_dir_deg);
    bool diurnal = h >= 6 && h < 18;
    bool nocturnal = h >= 21 || h < 6;
    if (diurnal) winds_diurnal.push_back(r.wind_ms);
    if (nocturnal) {
      winds_nocturnal.push_back(r.wind_ms);
      dirs_nocturnal.push_back(r.wind_dir_deg);
    }
    ind.insolation_sum += r.insolation_h;
    ind.global_sum += r.global_whm2;
    ind.diffuse_sum += r.diffuse_whm2;
  }

  ind.temp_max = *std::max_element(temps.begin(), temps.end());
  ind.temp_mean = mean(temps);
  ind.humidity_mean = mean(rhs);
  ind.humidity_min = *std::min_element(rhs.begin(), rhs.end());
  ind.wind_diurnal_mean = mean(winds_diurnal);
  ind.wind_nocturnal_mean = mean(winds_nocturnal);
  ind.wind_dir_daily_mean = circular_mean_deg(dirs_daily);
  ind.wind_dir_nocturnal_mean = circular_mean_deg(dirs_nocturnal);
  ind.nebulosity_mean = mean(oktas);

  double h0 = solar::extraterrestrial_daily_whm2(station.latitude_deg, day.date);
  ind.clearness_index = h0 > 0 ? ind.global_sum / h0 : 0.0;
  ind.diffuse_fraction = ind.global_sum > 0 ? ind.diffuse_sum / ind.global_sum : 0.0;
  return ind;
}

struct IngestResult {
  std::vector<DayProfile> days;                 // valid and invalid
  std::vector<DailyIndicators> indicators;      // valid days only
  std::vector<Diagnostic> diagnostics;
};

// Full path from records to indicators. Days whose clearness index exceeds
// kClearnessInvalidLimit are invalidated with a diagnostic.
inline IngestResult build_indicators(const std::vector<HourlyRecord>& records,
                                     const StationMeta& station) {
  IngestResult out;
  out.days = assemble_days(records);
  for (auto& day : out.days) {
    if (!day.valid) continue;
    DailyIndicators ind = compute_daily_indicators(day, station);
    if (ind.clearness_index > kClearnessInvalidLimit) {
      day.valid = false;
      out.diagnostics.push_back({Diagnostic::Severity::rejected, format_date(day.date),
                                 "clearness index " + fmt_num(ind.clearness_index, 4) +
                                     " above " + fmt_num(kClearnessInvalidLimit, 3) +
                                     ", day invalidated"});
      continue;
    }
    out.indicators.push_back(ind);
  }
  return out;
}

inline void write_hourly_csv(const std::string& path, const std::vector<HourlyRecord>& records) {
  csv::Writer w(path);
  w.header(hourly_csv_header());
  for (const auto& r : records) {
    w.line({format_timestamp(r.timestamp), fmt_num(r.temp_c), fmt_num(r.rh_pct), fmt_num(r.wind_ms),
            fmt_num(r.wind_dir_deg), std::to_string(r.nebulosity_okta), fmt_num(r.insolation_h),
            fmt_num(r.global_whm2), fmt_num(r.diffuse_whm2)});
  }
}

inline void write_indicators_csv(const std::string& path, const std::vector<DailyIndicators>& ind) {
  csv::Writer w(path);
  std::vector<std::string> header = {"date"};
  for (const auto& [id, name] : indicator_names()) header.push_back(name);
  header.push_back("season");
  w.header(header);
  for (const auto& d : ind) {
    std::vector<std::string> row = {format_date(d.date)};
    for (const auto& [id, name] : indicator_names()) row.push_back(fmt_num(indicator_value(d, id)));
    row.push_back(season_name(season_of(d.date)));
    w.line(row);
  }
}

}  // namespace wseq::ingest
