#pragma once

// HVAC cooling models and capacity accounting. Model 1 holds setpoints with
// an ideal control loop, model 2 cycles a fixed-capacity unit through a
// hysteresis thermostat at one-minute sub-steps, model 3 additionally scales
// the rated capacity with indoor/outdoor conditions through a bilinear
// performance map. Daily and per-sequence sensible/latent/total capacities
// mirror the published report layout.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weatherseq/core.hpp"
#include "weatherseq/csv.hpp"
#include "weatherseq/psychro.hpp"

namespace wseq::hvac {

constexpr const char* kWholeDwelling = "(all)";

enum class ModelKind { ideal, cycling, cycling_with_performance };

inline const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::ideal: return "ideal";
    case ModelKind::cycling: return "cycling";
    case ModelKind::cycling_with_performance: return "cycling-perf";
  }
  return "?";
}

inline std::optional<ModelKind> model_kind_from_name(const std::string& s) {
  if (s == "ideal") return ModelKind::ideal;
  if (s == "cycling") return ModelKind::cycling;
  if (s == "cycling-perf" || s == "cycling-with-performance") return ModelKind::cycling_with_performance;
  return std::nullopt;
}

// Bilinear correction around the rating point 27 C indoor / 50% RH indoor /
// 35 C outdoor, expressed in indoor wet bulb (Stull) and outdoor dry bulb.
struct PerformanceMap {
  double rated_indoor_t_c = 27.0;
  double rated_indoor_rh_pct = 50.0;
  double rated_outdoor_t_c = 35.0;
  double capacity_per_wb_k = 0.025;    // more humid/warm coil air -> more capacity
  double capacity_per_out_k = -0.012;  // hotter condenser air -> less capacity
  double capacity_cross = 0.0;
  double power_per_wb_k = 0.004;
  double power_per_out_k = 0.012;
  double power_cross = 0.0;

  double rated_wb_c() const {
    return psychro::wet_bulb_stull_c(rated_indoor_t_c, rated_indoor_rh_pct);
  }
};

struct Multipliers {
  double capacity = 1.0;
  double power_input = 1.0;
  bool clamped = false;
};

// Multipliers are clamped to [0.3, 1.5] with a diagnostic.
inline Multipliers performance_correction(double indoor_t_c, double indoor_rh_pct,
                                          double outdoor_t_c, const PerformanceMap& map,
                                          std::vector<Diagnostic>* diags = nullptr) {
  double x = psychro::wet_bulb_stull_c(indoor_t_c, indoor_rh_pct) - map.rated_wb_c();
  double y = outdoor_t_c - map.rated_outdoor_t_c;
  Multipliers m;
  m.capacity = 1.0 + map.capacity_per_wb_k * x + map.capacity_per_out_k * y + map.capacity_cross * x * y;
  m.power_input = 1.0 + map.power_per_wb_k * x + map.power_per_out_k * y + map.power_cross * x * y;
  auto clamp_one = [&](double v) {
    if (v < 0.3 || v > 1.5) {
      m.clamped = true;
      if (diags)
        diags->push_back({Diagnostic::Severity::warning, "performance_correction",
                          "multiplier " + fmt_num(v, 4) + " clamped to [0.3,1.5]"});
      return std::clamp(v, 0.3, 1.5);
    }
    return v;
  };
  m.capacity = clamp_one(m.capacity);
  m.power_input = clamp_one(m.power_input);
  return m;
}

struct HvacSpec {
  ModelKind kind = ModelKind::ideal;
  double cooling_setpoint_c = 25.0;
  double rh_setpoint_pct = 60.0;  // humidity-ratio setpoint taken at the cooling setpoint
  double rated_sensible_w = 3500.0;
  double rated_moisture_kgps = 4e-4;
  double deadband_k = 1.0;
  double min_on_s = 120.0;
  double min_off_s = 120.0;
  int schedule_start_h = 0;  // active hours [start, end), 0..24 = always on
  int schedule_end_h = 24;
  PerformanceMap map;

  void check() const {
    if (cooling_setpoint_c < 18 || cooling_setpoint_c > 30)
      throw error("hvac: cooling setpoint outside [18,30] C");
    if (schedule_start_h < 0 || schedule_end_h > 24 || schedule_start_h >= schedule_end_h)
      throw error("hvac: schedule must satisfy 0 <= start < end <= 24");
    if (kind != ModelKind::ideal) {
      if (!(rated_sensible_w > 0)) throw error("hvac: rated capacity must be positive");
      if (!(deadband_k > 0)) throw error("hvac: deadband must be positive");
      if (min_on_s < 0 || min_off_s < 0) throw error("hvac: negative minimum on/off time");
    }
  }
  bool active_at(int hour) const {
    return hour >= schedule_start_h && hour < schedule_end_h;
  }
  double humidity_ratio_setpoint() const {
    return psychro::humidity_ratio(cooling_setpoint_c, rh_setpoint_pct);
  }
};

// Hysteresis thermostat (cooling): on above setpoint + deadband/2, off below
// setpoint - deadband/2, honoring minimum on/off times. The caller samples
// the decision at the start of a sub-step and advances the clock afterwards.
struct ThermostatState {
  bool on = false;
  double since_switch_s = 1e12;

  bool decide(double zone_t, double setpoint, double deadband, double min_on_s, double min_off_s) {
    if (on) {
      if (zone_t < setpoint - deadband / 2 && since_switch_s >= min_on_s) {
        on = false;
        since_switch_s = 0;
      }
    } else {
      if (zone_t > setpoint + deadband / 2 && since_switch_s >= min_off_s) {
        on = true;
        since_switch_s = 0;
      }
    }
    return on;
  }
  void advance(double dt_s) { since_switch_s += dt_s; }
};

// ---------------------------------------------------------------------------
// load accounting

struct HourlyLoadRow {
  DateTime timestamp;
  std::string zone;
  double temp_c = 0;
  double humidity_ratio = 0;
  double sensible_w = 0;  // mean cooling power over the hour
  double latent_w = 0;
};

inline void write_loads_csv(const std::string& path, const std::vector<HourlyLoadRow>& rows) {
  csv::Writer w(path);
  w.header({"timestamp", "zone", "temp_c", "humidity_ratio", "sensible_load_w", "latent_load_w"});
  for (const auto& r : rows)
    w.line({format_timestamp(r.timestamp), r.zone, fmt_num(r.temp_c), fmt_num(r.humidity_ratio),
            fmt_num(r.sensible_w), fmt_num(r.latent_w)});
}

inline std::vector<HourlyLoadRow> read_loads_csv(const std::string& path) {
  csv::Table t = csv::read_file(path);
  int c_ts = t.column("timestamp"), c_zone = t.column("zone"), c_t = t.column("temp_c");
  int c_w = t.column("humidity_ratio"), c_s = t.column("sensible_load_w"),
      c_l = t.column("latent_load_w");
  if (c_ts < 0 || c_zone < 0 || c_t < 0 || c_w < 0 || c_s < 0 || c_l < 0)
    throw error("loads csv: missing columns in " + path);
  std::vector<HourlyLoadRow> rows;
  for (const auto& row : t.rows) {
    HourlyLoadRow r;
    auto ts = parse_timestamp(row[static_cast<size_t>(c_ts)]);
    if (!ts) throw error("loads csv: bad timestamp " + row[static_cast<size_t>(c_ts)]);
    r.timestamp = *ts;
    r.zone = row[static_cast<size_t>(c_zone)];
    r.temp_c = csv::to_num(row[static_cast<size_t>(c_t)], "temp_c");
    r.humidity_ratio = csv::to_num(row[static_cast<size_t>(c_w)], "humidity_ratio");
    r.sensible_w = csv::to_num(row[static_cast<size_t>(c_s)], "sensible_load_w");
    r.latent_w = csv::to_num(row[static_cast<size_t>(c_l)], "latent_load_w");
    rows.push_back(r);
  }
  return rows;
}

struct DailyCapacity {
  Date date;
  std::string zone;  // zone name or "(all)"
  double sensible_kwh = 0;
  double latent_kwh = 0;
  double total_kwh = 0;
};

struct SequenceCapacity {
  std::string sequence;
  std::string zone;
  int days = 0;
  double mean_sensible_kwh = 0, mean_latent_kwh = 0, mean_total_kwh = 0;
  double max_sensible_kwh = 0, max_latent_kwh = 0, max_total_kwh = 0;
};

struct HvacResult {
  std::vector<DailyCapacity> daily;
  std::vector<SequenceCapacity> per_sequence;
};

struct SequenceSpan {
  std::string name;
  Date start;
  Date end;  // inclusive
};

// Daily sums per zone plus a whole-dwelling aggregate, then MEAN/MAX over
// each sequence's days. Every (zone, day) must cover all 24 hours.
inline HvacResult accumulate_capacities(const std::vector<HourlyLoadRow>& rows,
                                        const std::vector<SequenceSpan>& partition) {
  HvacResult out;
  std::map<std::pair<long, std::string>, std::pair<DailyCapacity, int>> daily;
  for (const auto& r : rows) {
    auto key = std::make_pair(day_number(r.timestamp.date), r.zone);
    auto& [cap, hours] = daily[key];
    cap.date = r.timestamp.date;
    cap.zone = r.zone;
    cap.sensible_kwh += r.sensible_w / 1000.0;  // 1 h per row
    cap.latent_kwh += r.latent_w / 1000.0;
    ++hours;
  }
  std::map<long, DailyCapacity> whole;
  for (auto& [key, entry] : daily) {
    auto& [cap, hours] = entry;
    if (hours != 24)
      throw error("partial day " + format_date(cap.date) + " for zone '" + cap.zone + "' (" +
                  std::to_string(hours) + " hours)");
    cap.total_kwh = cap.sensible_kwh + cap.latent_kwh;
    auto& w = whole[key.first];
    w.date = cap.date;
    w.zone = kWholeDwelling;
    w.sensible_kwh += cap.sensible_kwh;
    w.latent_kwh += cap.latent_kwh;
    w.total_kwh += cap.total_kwh;
    out.daily.push_back(cap);
  }
  for (const auto& [dn, cap] : whole) out.daily.push_back(cap);

  std::set<std::string> zones;
  for (const auto& d : out.daily) zones.insert(d.zone);
  for (const auto& span : partition) {
    for (const auto& zone : zones) {
      SequenceCapacity sc;
      sc.sequence = span.name;
      sc.zone = zone;
      for (const auto& d : out.daily) {
        if (d.zone != zone) continue;
        if (d.date < span.start || span.end < d.date) continue;
        ++sc.days;
        sc.mean_sensible_kwh += d.sensible_kwh;
        sc.mean_latent_kwh += d.latent_kwh;
        sc.mean_total_kwh += d.total_kwh;
        sc.max_sensible_kwh = std::max(sc.max_sensible_kwh, d.sensible_kwh);
        sc.max_latent_kwh = std::max(sc.max_latent_kwh, d.latent_kwh);
        sc.max_total_kwh = std::max(sc.max_total_kwh, d.total_kwh);
      }
      if (sc.days == 0) continue;
      sc.mean_sensible_kwh /= sc.days;
      sc.mean_latent_kwh /= sc.days;
      sc.mean_total_kwh /= sc.days;
      out.per_sequence.push_back(sc);
    }
  }
  return out;
}

}  // namespace wseq::hvac
