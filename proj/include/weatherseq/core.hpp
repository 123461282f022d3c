#pragma once

// Core domain types shared by the whole toolkit: calendar/timestamp handling,
// hourly weather records, daily profiles and daily indicators, station
// metadata, diagnostics, and small string/number helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wseq {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct Diagnostic {
  enum class Severity { warning, rejected };
  Severity severity = Severity::warning;
  std::string where;    // e.g. "row 17" or "1994-01-03T05:00"
  std::string message;
};

// ---------------------------------------------------------------------------
// calendar

struct Date {
  int year = 0;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend bool operator==(const Date& a, const Date& b) {
    return a.year == b.year && a.month == b.month && a.day == b.day;
  }
  friend bool operator!=(const Date& a, const Date& b) { return !(a == b); }
  friend bool operator<(const Date& a, const Date& b) {
    if (a.year != b.year) return a.year < b.year;
    if (a.month != b.month) return a.month < b.month;
    return a.day < b.day;
  }
};

// Days since 1970-01-01 (proleptic Gregorian), Howard Hinnant's algorithm.
inline long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

inline Date civil_from_days(long z) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long y = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

inline long day_number(const Date& d) { return days_from_civil(d.year, d.month, d.day); }
inline Date add_days(const Date& d, long n) { return civil_from_days(day_number(d) + n); }

inline int day_of_year(const Date& d) {
  return static_cast<int>(day_number(d) - days_from_civil(d.year, 1, 1)) + 1;
}

// Hour-resolution local timestamp.
struct DateTime {
  Date date;
  int hour = 0;  // 0..23

  long hours_since_epoch() const { return day_number(date) * 24 + hour; }

  friend bool operator==(const DateTime& a, const DateTime& b) {
    return a.date == b.date && a.hour == b.hour;
  }
  friend bool operator<(const DateTime& a, const DateTime& b) {
    return a.hours_since_epoch() < b.hours_since_epoch();
  }
};

inline DateTime datetime_from_hours(long h) {
  long d = h >= 0 ? h / 24 : (h - 23) / 24;
  return DateTime{civil_from_days(d), static_cast<int>(h - d * 24)};
}

// "YYYY-MM-DDTHH:00" (local standard time; minutes must be 00).
inline std::optional<DateTime> parse_timestamp(const std::string& s) {
  int y, mo, d, h, mi;
  char t;
  if (std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d", &y, &mo, &d, &t, &h, &mi) != 6) return std::nullopt;
  if (t != 'T' && t != ' ') return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi != 0) return std::nullopt;
  Date date{y, mo, d};
  if (civil_from_days(day_number(date)) != date) return std::nullopt;  // e.g. Feb 30
  return DateTime{date, h};
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

inline std::string format_timestamp(const DateTime& t) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00", t.date.year, t.date.month, t.date.day,
                t.hour);
  return buf;
}

// Tropical two-season split: humid November..April, fresh May..October.
enum class Season { humid, fresh };

inline Season season_of(const Date& d) {
  return (d.month >= 11 || d.month <= 4) ? Season::humid : Season::fresh;
}

inline const char* season_name(Season s) { return s == Season::humid ? "humid" : "fresh"; }

inline std::optional<Season> season_from_name(const std::string& s) {
  if (s == "humid") return Season::humid;
  if (s == "fresh") return Season::fresh;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// station data

struct StationMeta {
  double latitude_deg = 0;   // south negative
  double longitude_deg = 0;  // east positive
  double elevation_m = 0;
};

struct HourlyRecord {
  DateTime timestamp;
  double temp_c = 0;
  double rh_pct = 0;           // [0,100]
  double wind_ms = 0;          // >= 0
  double wind_dir_deg = 0;     // [0,360), from North
  int nebulosity_okta = 0;     // 0..8
  double insolation_h = 0;     // sunshine fraction of the hour, [0,1]
  double global_whm2 = 0;      // hourly global horizontal energy
  double diffuse_whm2 = 0;     // hourly diffuse horizontal energy, <= global
};

// Returns a rejection reason if any field violates the record invariants.
inline std::optional<std::string> check_record(const HourlyRecord& r) {
  auto bad = [](const char* what) { return std::optional<std::string>(what); };
  for (double v : {r.temp_c, r.rh_pct, r.wind_ms, r.wind_dir_deg, r.insolation_h, r.global_whm2,
                   r.diffuse_whm2})
    if (!std::isfinite(v)) return bad("non-finite field");
  if (r.rh_pct < 0 || r.rh_pct > 100) return bad("relative_humidity outside [0,100]");
  if (r.wind_ms < 0) return bad("negative wind_speed");
  if (r.wind_dir_deg < 0 || r.wind_dir_deg >= 360) return bad("wind_direction outside [0,360)");
  if (r.nebulosity_okta < 0 || r.nebulosity_okta > 8) return bad("nebulosity outside 0..8");
  if (r.insolation_h < 0 || r.insolation_h > 1) return bad("insolation outside [0,1]");
  if (r.global_whm2 < 0) return bad("negative global radiation");
  if (r.diffuse_whm2 < 0) return bad("negative diffuse radiation");
  if (r.diffuse_whm2 > r.global_whm2) return bad("diffuse exceeds global");
  return std::nullopt;
}

struct DayProfile {
  Date date;
  std::array<HourlyRecord, 24> hours{};
  bool valid = false;
  int fill_count = 0;  // interpolated hours
};

struct DailyIndicators {
  Date date;
  double temp_max = 0;
  double temp_mean = 0;
  double humidity_mean = 0;
  double humidity_min = 0;
  double wind_diurnal_mean = 0;    // 06:00-18:00
  double wind_nocturnal_mean = 0;  // 21:00-06:00
  double wind_dir_daily_mean = 0;
  double wind_dir_nocturnal_mean = 0;
  double nebulosity_mean = 0;
  double insolation_sum = 0;  // h
  double global_sum = 0;      // Wh/m2
  double diffuse_sum = 0;     // Wh/m2
  double clearness_index = 0;
  double diffuse_fraction = 0;
};

enum class Indicator {
  temp_max,
  temp_mean,
  humidity_mean,
  humidity_min,
  wind_diurnal_mean,
  wind_nocturnal_mean,
  wind_dir_daily_mean,
  wind_dir_nocturnal_mean,
  nebulosity_mean,
  insolation_sum,
  global_sum,
  diffuse_sum,
  clearness_index,
  diffuse_fraction,
};

inline const std::vector<std::pair<Indicator, const char*>>& indicator_names() {
  static const std::vector<std::pair<Indicator, const char*>> names = {
      {Indicator::temp_max, "temp_max"},
      {Indicator::temp_mean, "temp_mean"},
      {Indicator::humidity_mean, "humidity_mean"},
      {Indicator::humidity_min, "humidity_min"},
      {Indicator::wind_diurnal_mean, "wind_diurnal_mean"},
      {Indicator::wind_nocturnal_mean, "wind_nocturnal_mean"},
      {Indicator::wind_dir_daily_mean, "wind_dir_daily_mean"},
      {Indicator::wind_dir_nocturnal_mean, "wind_dir_nocturnal_mean"},
      {Indicator::nebulosity_mean, "nebulosity_mean"},
      {Indicator::insolation_sum, "insolation_sum"},
      {Indicator::global_sum, "global_sum"},
      {Indicator::diffuse_sum, "diffuse_sum"},
      {Indicator::clearness_index, "clearness_index"},
      {Indicator::diffuse_fraction, "diffuse_fraction"},
  };
  return names;
}

inline const char* indicator_name(Indicator id) {
  for (const auto& [k, v] : indicator_names())
    if (k == id) return v;
  return "?";
}

inline std::optional<Indicator> indicator_from_name(const std::string& s) {
  for (const auto& [k, v] : indicator_names())
    if (s == v) return k;
  return std::nullopt;
}

inline double indicator_value(const DailyIndicators& d, Indicator id) {
  switch (id) {
    case Indicator::temp_max: return d.temp_max;
    case Indicator::temp_mean: return d.temp_mean;
    case Indicator::humidity_mean: return d.humidity_mean;
    case Indicator::humidity_min: return d.humidity_min;
    case Indicator::wind_diurnal_mean: return d.wind_diurnal_mean;
    case Indicator::wind_nocturnal_mean: return d.wind_nocturnal_mean;
    case Indicator::wind_dir_daily_mean: return d.wind_dir_daily_mean;
    case Indicator::wind_dir_nocturnal_mean: return d.wind_dir_nocturnal_mean;
    case Indicator::nebulosity_mean: return d.nebulosity_mean;
    case Indicator::insolation_sum: return d.insolation_sum;
    case Indicator::global_sum: return d.global_sum;
    case Indicator::diffuse_sum: return d.diffuse_sum;
    case Indicator::clearness_index: return d.clearness_index;
    case Indicator::diffuse_fraction: return d.diffuse_fraction;
  }
  return 0;
}

inline bool indicator_is_circular(Indicator id) {
  return id == Indicator::wind_dir_daily_mean || id == Indicator::wind_dir_nocturnal_mean;
}

// ---------------------------------------------------------------------------
// small helpers

namespace detail {
constexpr double kPi = 3.14159265358979323846;
}

inline double deg2rad(double d) { return d * detail::kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / detail::kPi; }

inline double wrap_deg(double d) {
  d = std::fmod(d, 360.0);
  if (d < 0) d += 360.0;
  return d == 360.0 ? 0.0 : d;
}

// Unit-vector (circular) mean of angles in degrees, in [0,360).
// Returns 0 for an empty set or a vanishing resultant.
inline double circular_mean_deg(const std::vector<double>& deg) {
  double s = 0, c = 0;
  for (double d : deg) {
    s += std::sin(deg2rad(d));
    c += std::cos(deg2rad(d));
  }
  if (std::hypot(s, c) < 1e-12) return 0.0;
  return wrap_deg(rad2deg(std::atan2(s, c)));
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Shortest-precision decimal form, deterministic across runs of one build.
inline std::string fmt_num(double v, int precision = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// "High radiation, breeze" -> "high-radiation-breeze"
inline std::string slugify(const std::string& s) {
  std::string out;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out.push_back(static_cast<char>(std::tolower(u)));
    } else if (!out.empty() && out.back() != '-') {
      out.push_back('-');
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

// Key/value sidecar: lines "latitude <deg>", "longitude <deg>", "elevation <m>".
inline StationMeta load_station_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open station meta file: " + path);
  StationMeta meta;
  bool lat = false, lon = false;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    double value;
    char eq = 0;
    ls >> key;
    if (!(ls >> value)) {
      // allow "key = value"
      ls.clear();
      ls >> eq >> value;
      if (!ls) throw error("bad station meta line: " + line);
    }
    if (key == "latitude" || key == "latitude_deg") {
      meta.latitude_deg = value;
      lat = true;
    } else if (key == "longitude" || key == "longitude_deg") {
      meta.longitude_deg = value;
      lon = true;
    } else if (key == "elevation" || key == "elevation_m") {
      meta.elevation_m = value;
    } else {
      throw error("unknown station meta key: " + key);
    }
  }
  if (!lat || !lon) throw error("station meta must provide latitude and longitude: " + path);
  if (std::abs(meta.latitude_deg) > 90) throw error("latitude outside [-90,90]");
  return meta;
}

}  // namespace wseq
