#pragma once

// Comparative sequence reports: the capacity table in the published layout
// (one MEAN and one MAX row per sequence), a one-row-per-sequence summary
// with indicator means, and stacked-bar plot data.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "weatherseq/core.hpp"
#include "weatherseq/csv.hpp"
#include "weatherseq/hvac.hpp"

namespace wseq::report {

struct SequenceReport {
  std::string sequence;
  int days = 0;
  double mean_sensible_kwh = 0, mean_latent_kwh = 0, mean_total_kwh = 0;
  double max_sensible_kwh = 0, max_latent_kwh = 0, max_total_kwh = 0;
  std::map<Indicator, double> indicator_means;  // may be empty
};

// Whole-dwelling MEAN/MAX per sequence, ordered by MAX total descending.
inline std::vector<SequenceReport> build_report(const std::vector<hvac::HvacResult>& results,
                                                const std::vector<std::string>& names) {
  if (results.size() != names.size()) throw error("build_report: names/results size mismatch");
  if (results.empty()) throw error("build_report: need at least one simulated sequence");
  std::vector<SequenceReport> out;
  for (size_t i = 0; i < results.size(); ++i) {
    const hvac::SequenceCapacity* cap = nullptr;
    for (const auto& sc : results[i].per_sequence)
      if (sc.zone == hvac::kWholeDwelling) cap = &sc;
    if (!cap) throw error("build_report: no whole-dwelling aggregate for '" + names[i] + "'");
    SequenceReport r;
    r.sequence = names[i];
    r.days = cap->days;
    r.mean_sensible_kwh = cap->mean_sensible_kwh;
    r.mean_latent_kwh = cap->mean_latent_kwh;
    r.mean_total_kwh = cap->mean_total_kwh;
    r.max_sensible_kwh = cap->max_sensible_kwh;
    r.max_latent_kwh = cap->max_latent_kwh;
    r.max_total_kwh = cap->max_total_kwh;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const SequenceReport& a, const SequenceReport& b) {
    if (a.max_total_kwh != b.max_total_kwh) return a.max_total_kwh > b.max_total_kwh;
    return a.sequence < b.sequence;
  });
  return out;
}

inline void attach_indicators(std::vector<SequenceReport>& reports,
                              const std::map<std::string, std::map<Indicator, double>>& by_name) {
  for (auto& r : reports) {
    auto it = by_name.find(r.sequence);
    if (it != by_name.end()) r.indicator_means = it->second;
  }
}

// Published-table layout: sequence, MEAN row, MAX row.
inline void write_capacities_csv(const std::string& path,
                                 const std::vector<SequenceReport>& reports) {
  csv::Writer w(path);
  w.header({"sequence", "quantity", "sensible_kwh", "latent_kwh", "total_kwh"});
  for (const auto& r : reports) {
    w.line({r.sequence, "MEAN", fmt_num(r.mean_sensible_kwh, 10), fmt_num(r.mean_latent_kwh, 10),
            fmt_num(r.mean_total_kwh, 10)});
    w.line({r.sequence, "MAX", fmt_num(r.max_sensible_kwh, 10), fmt_num(r.max_latent_kwh, 10),
            fmt_num(r.max_total_kwh, 10)});
  }
}

inline void write_report_csv(const std::string& path, const std::vector<SequenceReport>& reports) {
  csv::Writer w(path);
  std::vector<std::string> header = {
      "sequence",         "days",           "mean_sensible_kwh", "mean_latent_kwh",
      "mean_total_kwh",   "max_sensible_kwh", "max_latent_kwh",  "max_total_kwh",
      "temp_mean",        "temp_max",       "humidity_mean",     "wind_diurnal_mean",
      "global_sum"};
  w.header(header);
  for (const auto& r : reports) {
    auto ind = [&](Indicator id) {
      auto it = r.indicator_means.find(id);
      return it == r.indicator_means.end() ? std::string("") : fmt_num(it->second, 6);
    };
    w.line({r.sequence, std::to_string(r.days), fmt_num(r.mean_sensible_kwh, 10),
            fmt_num(r.mean_latent_kwh, 10), fmt_num(r.mean_total_kwh, 10),
            fmt_num(r.max_sensible_kwh, 10), fmt_num(r.max_latent_kwh, 10),
            fmt_num(r.max_total_kwh, 10), ind(Indicator::temp_mean), ind(Indicator::temp_max),
            ind(Indicator::humidity_mean), ind(Indicator::wind_diurnal_mean),
            ind(Indicator::global_sum)});
  }
}

// Stacked-bar data: per sequence and quantity, the sensible and latent parts.
inline void write_plot_csv(const std::string& path, const std::vector<SequenceReport>& reports) {
  csv::Writer w(path);
  w.header({"sequence", "quantity", "sensible_kwh", "latent_kwh"});
  for (const auto& r : reports) {
    w.line({r.sequence, "MEAN", fmt_num(r.mean_sensible_kwh, 10), fmt_num(r.mean_latent_kwh, 10)});
    w.line({r.sequence, "MAX", fmt_num(r.max_sensible_kwh, 10), fmt_num(r.max_latent_kwh, 10)});
  }
}

}  // namespace wseq::report
