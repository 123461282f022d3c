#pragma once

// Daily weather classification: named bins per indicator, multi-criteria day
// classes, consecutive-day sequence extraction, and seasonal frequency tables.

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weatherseq/config.hpp"
#include "weatherseq/core.hpp"
#include "weatherseq/csv.hpp"

namespace wseq::classify {

constexpr int kDefaultMinSequenceLength = 5;
constexpr int kDefaultHistoryLength = 3;

// ---------------------------------------------------------------------------
// bins

struct Bin {
  double lo = 0;
  double hi = 0;  // may be +inf on the last bin
  std::string label;
};

// Ordered, contiguous intervals. Every bin is half-open [lo, hi) except the
// last, which is closed so the top bound stays representable.
struct IndicatorBins {
  Indicator id{};
  std::vector<Bin> bins;

  void check() const {
    if (bins.empty()) throw error("indicator bins empty");
    std::set<std::string> labels;
    for (size_t i = 0; i < bins.size(); ++i) {
      if (!(bins[i].lo < bins[i].hi)) throw error("bin bounds not increasing");
      if (i && bins[i].lo != bins[i - 1].hi) throw error("bins not contiguous");
      if (!labels.insert(bins[i].label).second) throw error("duplicate bin label " + bins[i].label);
    }
  }

  // Designation, or nullopt when the value falls outside the binned range.
  std::optional<std::string> label_of(double value) const {
    for (size_t i = 0; i < bins.size(); ++i) {
      bool last = i + 1 == bins.size();
      if (value >= bins[i].lo && (value < bins[i].hi || (last && value <= bins[i].hi)))
        return bins[i].label;
    }
    return std::nullopt;
  }
};

struct ClassificationScheme {
  std::string id;
  std::vector<IndicatorBins> indicators;

  const IndicatorBins* find(Indicator id_) const {
    for (const auto& b : indicators)
      if (b.id == id_) return &b;
    return nullptr;
  }
  const IndicatorBins& require(Indicator id_) const {
    const IndicatorBins* b = find(id_);
    if (!b) throw error(std::string("scheme has no bins for indicator ") + indicator_name(id_));
    return *b;
  }
};

inline std::string bin_indicator(const IndicatorBins& bins, double value) {
  auto l = bins.label_of(value);
  if (!l)
    throw error(std::string("value ") + fmt_num(value, 6) + " outside the binned range of " +
                indicator_name(bins.id));
  return *l;
}

// Default scheme for a tropical island station. Radiation and wind bounds
// follow the published class tables; temperature and humidity bins are
// toolkit conventions documented in the README.
inline ClassificationScheme default_scheme() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  ClassificationScheme s;
  s.id = "default-tropical";
  s.indicators.push_back(
      {Indicator::global_sum,
       {{600, 2300, "very low radiation"},
        {2300, 4000, "low radiation"},
        {4000, 5700, "average radiation"},
        {5700, 7400, "high radiation"},
        {7400, 8500, "very high radiation"}}});
  s.indicators.push_back({Indicator::wind_diurnal_mean,
                          {{0, 3, "breeze"}, {3, 6, "medium"}, {6, 9, "strong"}, {9, inf, "very strong"}}});
  s.indicators.push_back({Indicator::humidity_mean,
                          {{-inf, 60, "dry"}, {60, 75, "moderate"}, {75, 85, "very high"}}});
  s.indicators.push_back({Indicator::temp_max,
                          {{-inf, 24, "cool"}, {24, 28, "mild"}, {28, 31, "warm"}, {31, inf, "hot"}}});
  for (const auto& b : s.indicators) b.check();
  return s;
}

// ---------------------------------------------------------------------------
// criteria

struct Predicate {
  Indicator id{};
  std::set<std::string> allowed;  // designations
};

struct DayClassCriteria {
  std::string name;
  std::vector<Predicate> predicates;  // conjunction

  void check(const ClassificationScheme& scheme) const {
    if (predicates.empty()) throw error("criteria '" + name + "' has no predicates");
    for (const auto& p : predicates) {
      const IndicatorBins& bins = scheme.require(p.id);
      for (const auto& label : p.allowed) {
        bool known = false;
        for (const auto& b : bins.bins) known = known || b.label == label;
        if (!known)
          throw error("criteria '" + name + "' references unknown designation '" + label + "'");
      }
    }
  }
};

// Radiation x wind cross, named after the published class table
// ("breeze" stands alone, other wind classes get a " wind" suffix).
inline std::vector<DayClassCriteria> default_criteria(const ClassificationScheme& scheme) {
  std::vector<DayClassCriteria> out;
  const IndicatorBins& rad = scheme.require(Indicator::global_sum);
  const IndicatorBins& wind = scheme.require(Indicator::wind_diurnal_mean);
  for (const auto& rb : rad.bins) {
    for (const auto& wb : wind.bins) {
      DayClassCriteria c;
      std::string rname = rb.label;
      rname[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(rname[0])));
      c.name = rname + ", " + (wb.label == "breeze" ? wb.label : wb.label + " wind");
      c.predicates.push_back({Indicator::global_sum, {rb.label}});
      c.predicates.push_back({Indicator::wind_diurnal_mean, {wb.label}});
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline bool day_matches(const DailyIndicators& day, const DayClassCriteria& criteria,
                        const ClassificationScheme& scheme) {
  for (const auto& p : criteria.predicates) {
    const IndicatorBins& bins = scheme.require(p.id);
    auto label = bins.label_of(indicator_value(day, p.id));
    if (!label || !p.allowed.count(*label)) return false;
  }
  return true;
}

// Map criteria name -> sorted matching dates. A date appears under a name iff
// every predicate holds; out-of-range indicator values simply fail to match.
inline std::map<std::string, std::vector<Date>> classify_days(
    const std::vector<DailyIndicators>& indicators, const std::vector<DayClassCriteria>& criteria,
    const ClassificationScheme& scheme) {
  std::map<std::string, std::vector<Date>> out;
  for (const auto& c : criteria) {
    c.check(scheme);
    out[c.name] = {};
  }
  for (const auto& day : indicators) {
    for (const auto& c : criteria) {
      if (day_matches(day, c, scheme)) out[c.name].push_back(day.date);
    }
  }
  for (auto& [name, dates] : out) std::sort(dates.begin(), dates.end());
  return out;
}

// ---------------------------------------------------------------------------
// sequences

struct WeatherSequence {
  std::string criteria_name;
  std::vector<Date> dates;                 // strictly consecutive
  std::vector<DailyIndicators> days;       // one per date
  std::map<Indicator, double> history;     // indicator means of preceding days
  int history_days = 0;                    // actual days found (< requested at data start)

  Date start() const { return dates.front(); }
  Date end() const { return dates.back(); }
  int length() const { return static_cast<int>(dates.size()); }
};

inline std::map<Indicator, double> summarize_indicators(const std::vector<DailyIndicators>& days) {
  std::map<Indicator, double> out;
  if (days.empty()) return out;
  for (const auto& [id, name] : indicator_names()) {
    std::vector<double> vals;
    for (const auto& d : days) vals.push_back(indicator_value(d, id));
    out[id] = indicator_is_circular(id) ? circular_mean_deg(vals) : mean(vals);
  }
  return out;
}

// Maximal runs of consecutive matching dates with length >= min_len. The
// history summary covers the history_len calendar days before each run,
// restricted to days that produced indicators (invalid days are absent).
inline std::vector<WeatherSequence> extract_sequences(
    const std::string& criteria_name, const std::vector<Date>& matching_dates,
    const std::map<Date, DailyIndicators>& all_days, int min_len, int history_len) {
  if (min_len < 1) throw error("min_len must be >= 1");
  if (history_len < 0) throw error("history_len must be >= 0");

  std::vector<WeatherSequence> out;
  size_t i = 0;
  while (i < matching_dates.size()) {
    size_t j = i;
    while (j + 1 < matching_dates.size() &&
           day_number(matching_dates[j + 1]) == day_number(matching_dates[j]) + 1)
      ++j;
    int run_len = static_cast<int>(j - i + 1);
    if (run_len >= min_len) {
      WeatherSequence seq;
      seq.criteria_name = criteria_name;
      for (size_t k = i; k <= j; ++k) {
        seq.dates.push_back(matching_dates[k]);
        auto it = all_days.find(matching_dates[k]);
        if (it == all_days.end())
          throw error("sequence day " + format_date(matching_dates[k]) + " missing indicators");
        seq.days.push_back(it->second);
      }
      std::vector<DailyIndicators> hist;
      for (int back = 1; back <= history_len; ++back) {
        auto it = all_days.find(add_days(seq.dates.front(), -back));
        if (it != all_days.end()) hist.push_back(it->second);
      }
      seq.history = summarize_indicators(hist);
      seq.history_days = static_cast<int>(hist.size());
      out.push_back(std::move(seq));
    }
    i = j + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// frequencies

struct ClassFrequencies {
  // season -> indicator -> designation -> day count
  std::map<Season, std::map<Indicator, std::map<std::string, int>>> counts;
  // season -> radiation designation -> wind designation -> day count
  std::map<Season, std::map<std::string, std::map<std::string, int>>> wind_by_radiation;
  std::map<Season, int> days_per_season;
};

using SeasonPartition = std::function<Season(const Date&)>;

inline ClassFrequencies class_frequencies(const std::vector<DailyIndicators>& indicators,
                                          const ClassificationScheme& scheme,
                                          const SeasonPartition& partition = season_of) {
  ClassFrequencies f;
  const IndicatorBins* rad = scheme.find(Indicator::global_sum);
  const IndicatorBins* wind = scheme.find(Indicator::wind_diurnal_mean);
  for (const auto& day : indicators) {
    Season season = partition(day.date);
    ++f.days_per_season[season];
    for (const auto& bins : scheme.indicators) {
      auto label = bins.label_of(indicator_value(day, bins.id));
      if (label) ++f.counts[season][bins.id][*label];
    }
    if (rad && wind) {
      auto rl = rad->label_of(day.global_sum);
      auto wl = wind->label_of(day.wind_diurnal_mean);
      if (rl && wl) ++f.wind_by_radiation[season][*rl][*wl];
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// catalogue

struct SequenceCatalogue {
  std::string scheme_id;
  std::vector<WeatherSequence> sequences;   // ordered by criteria name then start date
  std::map<std::string, int> day_counts;    // matching valid days per criteria
  ClassFrequencies frequencies;
};

inline SequenceCatalogue build_catalogue(const std::vector<DailyIndicators>& indicators,
                                         const ClassificationScheme& scheme,
                                         const std::vector<DayClassCriteria>& criteria,
                                         int min_len = kDefaultMinSequenceLength,
                                         int history_len = kDefaultHistoryLength) {
  SequenceCatalogue cat;
  cat.scheme_id = scheme.id;
  std::map<Date, DailyIndicators> by_date;
  for (const auto& d : indicators) by_date[d.date] = d;

  auto classified = classify_days(indicators, criteria, scheme);
  for (const auto& c : criteria) {
    const auto& dates = classified.at(c.name);
    cat.day_counts[c.name] = static_cast<int>(dates.size());
    auto seqs = extract_sequences(c.name, dates, by_date, min_len, history_len);
    for (auto& s : seqs) cat.sequences.push_back(std::move(s));
  }
  std::sort(cat.sequences.begin(), cat.sequences.end(),
            [](const WeatherSequence& a, const WeatherSequence& b) {
              if (a.criteria_name != b.criteria_name) return a.criteria_name < b.criteria_name;
              return a.start() < b.start();
            });
  cat.frequencies = class_frequencies(indicators, scheme);
  return cat;
}

// ---------------------------------------------------------------------------
// config round trip

inline ClassificationScheme scheme_from_config(const std::vector<config::Node>& nodes) {
  ClassificationScheme s;
  for (const auto& n : nodes) {
    if (n.name == "scheme") {
      s.id = n.arg_str(0);
    } else if (n.name == "indicator") {
      IndicatorBins bins;
      auto id = indicator_from_name(n.arg_str(0));
      if (!id) throw error("unknown indicator '" + n.arg_str(0) + "'");
      bins.id = *id;
      for (const auto& c : n.children) {
        if (c.name != "bin") throw error("indicator block expects 'bin' entries");
        bins.bins.push_back({c.arg_num(0), c.arg_num(1), c.arg_str(2)});
      }
      bins.check();
      s.indicators.push_back(std::move(bins));
    }
  }
  if (s.indicators.empty()) throw error("scheme has no indicator blocks");
  if (s.id.empty()) s.id = "unnamed";
  return s;
}

inline std::vector<DayClassCriteria> criteria_from_config(const std::vector<config::Node>& nodes,
                                                          const ClassificationScheme& scheme) {
  std::vector<DayClassCriteria> out;
  for (const auto& n : nodes) {
    if (n.name != "criteria") continue;
    DayClassCriteria c;
    c.name = n.arg_str(0);
    for (const auto& r : n.children) {
      if (r.name != "require") throw error("criteria block expects 'require' entries");
      auto id = indicator_from_name(r.arg_str(0));
      if (!id) throw error("unknown indicator '" + r.arg_str(0) + "'");
      Predicate p;
      p.id = *id;
      for (size_t i = 1; i < r.args.size(); ++i) p.allowed.insert(r.args[i]);
      if (p.allowed.empty()) throw error("criteria '" + c.name + "': require needs designations");
      c.predicates.push_back(std::move(p));
    }
    c.check(scheme);
    out.push_back(std::move(c));
  }
  if (out.empty()) throw error("no criteria blocks found");
  return out;
}

inline std::vector<config::Node> scheme_to_config(const ClassificationScheme& s) {
  std::vector<config::Node> nodes;
  nodes.push_back({"scheme", {s.id}, {}, false});
  for (const auto& bins : s.indicators) {
    config::Node n{"indicator", {indicator_name(bins.id)}, {}, true};
    for (const auto& b : bins.bins)
      n.children.push_back({"bin", {fmt_num(b.lo, 17), fmt_num(b.hi, 17), b.label}, {}, false});
    nodes.push_back(std::move(n));
  }
  return nodes;
}

inline std::vector<config::Node> criteria_to_config(const std::vector<DayClassCriteria>& criteria) {
  std::vector<config::Node> nodes;
  for (const auto& c : criteria) {
    config::Node n{"criteria", {c.name}, {}, true};
    for (const auto& p : c.predicates) {
      config::Node r{"require", {indicator_name(p.id)}, {}, false};
      for (const auto& label : p.allowed) r.args.push_back(label);
      n.children.push_back(std::move(r));
    }
    nodes.push_back(std::move(n));
  }
  return nodes;
}

// ---------------------------------------------------------------------------
// CSV export

inline void write_catalogue_csv(const std::string& path, const SequenceCatalogue& cat) {
  csv::Writer w(path);
  std::vector<std::string> header = {"criteria", "slug", "start", "end", "length", "history_days"};
  for (const auto& [id, name] : indicator_names()) header.push_back(std::string("mean_") + name);
  for (const auto& [id, name] : indicator_names()) header.push_back(std::string("hist_") + name);
  w.header(header);
  for (const auto& s : cat.sequences) {
    std::vector<std::string> row = {s.criteria_name,        slugify(s.criteria_name),
                                    format_date(s.start()), format_date(s.end()),
                                    std::to_string(s.length()), std::to_string(s.history_days)};
    auto means = summarize_indicators(s.days);
    for (const auto& [id, name] : indicator_names()) row.push_back(fmt_num(means[id]));
    for (const auto& [id, name] : indicator_names()) {
      auto it = s.history.find(id);
      row.push_back(it == s.history.end() ? "" : fmt_num(it->second));
    }
    w.line(row);
  }
}

inline void write_frequencies_csv(const std::string& path, const ClassFrequencies& f) {
  csv::Writer w(path);
  w.header({"table", "season", "indicator_or_radiation", "designation", "count", "frequency"});
  for (const auto& [season, per_ind] : f.counts) {
    double total = f.days_per_season.at(season);
    for (const auto& [id, per_label] : per_ind) {
      for (const auto& [label, count] : per_label) {
        w.line({"indicator", season_name(season), indicator_name(id), label, std::to_string(count),
                fmt_num(total > 0 ? count / total : 0, 6)});
      }
    }
  }
  for (const auto& [season, per_rad] : f.wind_by_radiation) {
    for (const auto& [rad, per_wind] : per_rad) {
      int rad_total = 0;
      for (const auto& [wind, count] : per_wind) rad_total += count;
      for (const auto& [wind, count] : per_wind) {
        w.line({"wind_by_radiation", season_name(season), rad, wind, std::to_string(count),
                fmt_num(rad_total > 0 ? static_cast<double>(count) / rad_total : 0, 6)});
      }
    }
  }
}

}  // namespace wseq::classify
