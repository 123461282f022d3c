#pragma once

// Command-line pipeline: ingest, classify, catalogue, fit, analyze, generate,
// simulate, report. Every command writes its artifacts plus a JSON run
// manifest (command, input digests, seeds, version, timestamp) into the
// output directory. Exit codes: 0 ok, 1 input/data error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weatherseq/building.hpp"
#include "weatherseq/classify.hpp"
#include "weatherseq/core.hpp"
#include "weatherseq/hvac.hpp"
#include "weatherseq/ingest.hpp"
#include "weatherseq/report.hpp"
#include "weatherseq/thermal.hpp"
#include "weatherseq/version.hpp"
#include "weatherseq/weathergen.hpp"

namespace wseq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// manifests

inline uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open input for digest: " + path);
  uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

// UTC timestamp; honors SOURCE_DATE_EPOCH for reproducible runs.
inline std::string manifest_timestamp() {
  std::time_t t;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  else
    t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  json extra = json::object();

  void write(const std::string& out_dir) const {
    json j;
    j["command"] = command;
    j["argv"] = argv;
    j["tool_version"] = kVersion;
    j["timestamp"] = manifest_timestamp();
    json ins = json::array();
    for (const auto& p : inputs) {
      char hex[24];
      std::snprintf(hex, sizeof hex, "%016llx",
                    static_cast<unsigned long long>(fnv1a64_file(p)));
      ins.push_back({{"path", p}, {"fnv1a64", hex}});
    }
    j["inputs"] = ins;
    json outs = json::array();  // basenames: outputs always land in out_dir
    for (const auto& p : outputs) outs.push_back(fs::path(p).filename().string());
    j["outputs"] = outs;
    j["extra"] = extra;
    std::ofstream f(fs::path(out_dir) / ("manifest_" + command + ".json"));
    if (!f) throw error("cannot write manifest in " + out_dir);
    f << j.dump(2) << "\n";
  }
};

inline void emit_diagnostics(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    json j;
    j["severity"] = d.severity == Diagnostic::Severity::rejected ? "rejected" : "warning";
    j["where"] = d.where;
    j["message"] = d.message;
    std::cerr << j.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// shared pieces

struct CommonOptions {
  std::string out_dir;
  std::string station_meta_path;
  std::string scheme_path;
  std::string criteria_path;
};

inline std::string default_out_dir() {
  if (const char* env = std::getenv("WEATHERSEQ_OUT_DIR")) return env;
  return ".";
}

inline StationMeta require_station(const CommonOptions& opt) {
  if (opt.station_meta_path.empty()) throw error("--station-meta is required");
  return load_station_meta(opt.station_meta_path);
}

inline classify::ClassificationScheme load_scheme(const CommonOptions& opt) {
  if (opt.scheme_path.empty()) return classify::default_scheme();
  return classify::scheme_from_config(config::parse_file(opt.scheme_path));
}

inline std::vector<classify::DayClassCriteria> load_criteria(
    const CommonOptions& opt, const classify::ClassificationScheme& scheme) {
  if (opt.criteria_path.empty()) return classify::default_criteria(scheme);
  return classify::criteria_from_config(config::parse_file(opt.criteria_path), scheme);
}

inline std::string out_path(const CommonOptions& opt, const std::string& name) {
  fs::create_directories(opt.out_dir);
  return (fs::path(opt.out_dir) / name).string();
}

inline double hourly_variable(const HourlyRecord& r, const std::string& name,
                              const StationMeta& st) {
  if (name == "temp") return r.temp_c;
  if (name == "rh") return r.rh_pct;
  if (name == "wind") return r.wind_ms;
  if (name == "global") return r.global_whm2;
  if (name == "diffuse") return r.diffuse_whm2;
  if (name == "clearness") {
    double i0 = solar::extraterrestrial_hourly_whm2(st, r.timestamp.date, r.timestamp.hour);
    return i0 > 20 ? std::clamp(r.global_whm2 / i0, 0.0, 1.2) : 0.0;
  }
  if (name == "diffuse_fraction")
    return r.global_whm2 > 0 ? r.diffuse_whm2 / r.global_whm2 : 0.0;
  if (name == "insolation") return r.insolation_h;
  throw error("unknown hourly variable '" + name + "'");
}

inline building::BuildingModel load_building_arg(const std::string& arg) {
  if (arg == "t3v") return building::t3v_building();
  return building::load_building(arg);
}

// ---------------------------------------------------------------------------
// subcommand bodies

inline void cmd_ingest(const CommonOptions& opt, const std::string& input, Manifest& mf) {
  StationMeta st = require_station(opt);
  auto parsed = ingest::parse_hourly_csv(input, st);
  auto result = ingest::build_indicators(parsed.records, st);
  emit_diagnostics(parsed.diagnostics);
  emit_diagnostics(result.diagnostics);

  std::vector<HourlyRecord> clean;
  for (const auto& d : result.days)
    if (d.valid)
      for (const auto& r : d.hours) clean.push_back(r);
  std::string hourly_path = out_path(opt, "hourly_clean.csv");
  std::string ind_path = out_path(opt, "indicators.csv");
  ingest::write_hourly_csv(hourly_path, clean);
  ingest::write_indicators_csv(ind_path, result.indicators);

  mf.inputs = {input, opt.station_meta_path};
  mf.outputs = {hourly_path, ind_path};
  mf.extra["rows_parsed"] = parsed.records.size();
  mf.extra["rows_rejected"] = parsed.diagnostics.size();
  mf.extra["valid_days"] = result.indicators.size();
}

inline void cmd_classify(const CommonOptions& opt, const std::string& input, int min_len,
                         int history_len, Manifest& mf) {
  StationMeta st = require_station(opt);
  auto parsed = ingest::parse_hourly_csv(input, st);
  auto result = ingest::build_indicators(parsed.records, st);
  auto scheme = load_scheme(opt);
  auto criteria = load_criteria(opt, scheme);
  auto cat = classify::build_catalogue(result.indicators, scheme, criteria, min_len, history_len);

  std::string cat_path = out_path(opt, "catalogue.csv");
  std::string freq_path = out_path(opt, "frequencies.csv");
  classify::write_catalogue_csv(cat_path, cat);
  classify::write_frequencies_csv(freq_path, cat.frequencies);

  mf.inputs = {input, opt.station_meta_path};
  if (!opt.scheme_path.empty()) mf.inputs.push_back(opt.scheme_path);
  if (!opt.criteria_path.empty()) mf.inputs.push_back(opt.criteria_path);
  mf.outputs = {cat_path, freq_path};
  mf.extra["scheme_id"] = scheme.id;
  mf.extra["sequences"] = cat.sequences.size();
  json counts = json::object();
  for (const auto& [name, count] : cat.day_counts) counts[name] = count;
  mf.extra["day_counts"] = counts;
}

inline void cmd_catalogue(const CommonOptions& opt, const std::string& input,
                          const std::string& select, int min_len, int history_len, Manifest& mf) {
  StationMeta st = require_station(opt);
  auto parsed = ingest::parse_hourly_csv(input, st);
  auto result = ingest::build_indicators(parsed.records, st);
  auto scheme = load_scheme(opt);
  auto criteria = load_criteria(opt, scheme);
  auto cat = classify::build_catalogue(result.indicators, scheme, criteria, min_len, history_len);

  std::map<Date, const DayProfile*> by_date;
  for (const auto& d : result.days)
    if (d.valid) by_date[d.date] = &d;

  mf.inputs = {input, opt.station_meta_path};
  int written = 0;
  for (const auto& seq : cat.sequences) {
    if (!select.empty() && seq.criteria_name != select && slugify(seq.criteria_name) != select)
      continue;
    std::vector<HourlyRecord> records;
    for (const auto& date : seq.dates)
      for (const auto& r : by_date.at(date)->hours) records.push_back(r);
    std::string name = "seq_" + slugify(seq.criteria_name) + "_" + format_date(seq.start()) + ".csv";
    std::string path = out_path(opt, name);
    ingest::write_hourly_csv(path, records);
    mf.outputs.push_back(path);
    ++written;
  }
  if (written == 0)
    throw error(select.empty() ? "catalogue produced no sequences"
                               : "no sequences match class '" + select + "'");
  mf.extra["sequences_written"] = written;
  mf.extra["selector"] = select;
}

inline void cmd_fit(const CommonOptions& opt, const std::string& input, const std::string& season,
                    Manifest& mf) {
  StationMeta st = require_station(opt);
  auto parsed = ingest::parse_hourly_csv(input, st);
  auto result = ingest::build_indicators(parsed.records, st);
  auto scheme = load_scheme(opt);
  auto criteria = load_criteria(opt, scheme);

  std::optional<Season> season_filter;
  if (season == "humid" || season == "fresh") season_filter = *season_from_name(season);
  else if (season != "all")
    throw error("--season must be humid, fresh or all");

  std::vector<DailyIndicators> days;
  for (const auto& d : result.indicators)
    if (!season_filter || season_of(d.date) == *season_filter) days.push_back(d);

  // runs of length >= 1 keep every matching day while preserving continuity
  auto cat = classify::build_catalogue(days, scheme, criteria, 1, 0);
  std::map<Date, DayProfile> lookup;
  for (const auto& d : result.days)
    if (d.valid) lookup[d.date] = d;

  std::map<std::string, std::vector<classify::WeatherSequence>> by_class;
  for (const auto& seq : cat.sequences) by_class[seq.criteria_name].push_back(seq);

  std::string fits_path = out_path(opt, "fits.csv");
  csv::Writer fits(fits_path);
  fits.header({"class", "season", "variable", "family", "params", "n", "ks_d", "ks_pass", "chi2",
               "chi2_pass"});

  mf.inputs = {input, opt.station_meta_path};
  int models_written = 0;
  std::vector<Diagnostic> diags;
  for (const auto& [class_name, seqs] : by_class) {
    int n_days = 0;
    std::map<Season, int> season_votes;
    for (const auto& s : seqs)
      for (const auto& d : s.dates) {
        ++n_days;
        ++season_votes[season_of(d)];
      }
    if (n_days < weathergen::kMinClassDays) continue;
    Season model_season = season_filter.value_or(
        season_votes[Season::humid] >= season_votes[Season::fresh] ? Season::humid : Season::fresh);
    weathergen::ClassModel model;
    try {
      model = weathergen::build_class_model(class_name, model_season, seqs, lookup, st, &diags);
    } catch (const error& e) {
      diags.push_back({Diagnostic::Severity::warning, class_name, e.what()});
      continue;
    }
    std::string model_path = out_path(opt, "model_" + slugify(class_name) + ".model");
    std::ofstream mf_out(model_path);
    mf_out << config::to_string(weathergen::model_to_config(model));
    mf.outputs.push_back(model_path);
    ++models_written;

    auto param_str = [&](const std::string& variable) -> std::pair<std::string, std::string> {
      if (variable == "clearness daily")
        return {"bounded-beta", "alpha=" + fmt_num(model.clearness.alpha, 6) +
                                    ";beta=" + fmt_num(model.clearness.beta, 6) +
                                    ";lo=" + fmt_num(model.clearness.lo, 6) +
                                    ";hi=" + fmt_num(model.clearness.hi, 6)};
      if (variable == "temperature daily mean")
        return {"gaussian",
                "mu=" + fmt_num(model.temp_mu, 6) + ";sigma=" + fmt_num(model.temp_sigma, 6)};
      if (variable == "wind hourly (demodulated)")
        return {"weibull", "k=" + fmt_num(model.wind.shape_k, 6) +
                               ";lambda=" + fmt_num(model.wind.scale_lambda, 6)};
      return {"gaussian",
              "mu=" + fmt_num(model.hum_mu, 6) + ";sigma=" + fmt_num(model.hum_sigma, 6)};
    };
    for (const auto& f : model.fits) {
      auto [family, params] = param_str(f.name);
      fits.line({class_name, season_name(model_season), f.name, family, params,
                 std::to_string(model.n_days), fmt_num(f.ks_d, 6), f.ks_pass ? "1" : "0",
                 f.chi2_valid ? fmt_num(f.chi2_stat, 6) : "", f.chi2_valid ? (f.chi2_pass ? "1" : "0") : ""});
    }
  }
  emit_diagnostics(diags);
  if (models_written == 0)
    throw error("no class had enough data to fit a model (need >= " +
                std::to_string(weathergen::kMinClassDays) + " days)");
  mf.outputs.push_back(fits_path);
  mf.extra["models_written"] = models_written;
  mf.extra["scheme_id"] = scheme.id;
}

inline void cmd_analyze_pca(const CommonOptions& opt, const std::string& input,
                            const std::string& variable, Manifest& mf) {
  StationMeta st = require_station(opt);
  auto parsed = ingest::parse_hourly_csv(input, st);
  auto result = ingest::build_indicators(parsed.records, st);
  std::vector<std::array<double, 24>> days;
  for (const auto& d : result.days) {
    if (!d.valid) continue;
    std::array<double, 24> row{};
    for (int h = 0; h < 24; ++h)
      row[static_cast<size_t>(h)] = hourly_variable(d.hours[static_cast<size_t>(h)], variable, st);
    days.push_back(row);
  }
  auto pca = stats::pca_daily_profiles(days);
  emit_diagnostics(pca.diagnostics);

  std::string path = out_path(opt, "pca_" + variable + ".csv");
  csv::Writer w(path);
  w.header({"row", "hour_or_component", "value"});
  for (int h = 0; h < 24; ++h)
    w.line({"mean_profile", std::to_string(h), fmt_num(pca.mean_profile[static_cast<size_t>(h)])});
  for (size_t k = 0; k < pca.eigenvalues.size(); ++k) {
    w.line({"eigenvalue", std::to_string(k), fmt_num(pca.eigenvalues[k])});
    w.line({"explained", std::to_string(k), fmt_num(pca.explained[k])});
  }
  for (size_t k = 0; k < std::min<size_t>(3, pca.eigenvectors.size()); ++k)
    for (int h = 0; h < 24; ++h)
      w.line({"component_" + std::to_string(k), std::to_string(h),
              fmt_num(pca.eigenvectors[k][static_cast<size_t>(h)])});
  mf.inputs = {input, opt.station_meta_path};
  mf.outputs = {path};
  mf.extra["days"] = days.size();
}

inline void cmd_analyze_coherence(const CommonOptions& opt, const std::string& input,
                                  const std::string& x, const std::string& y, size_t segment_len,
                                  double cutoff, Manifest& mf) {
  StationMeta st = require_station(opt);
  auto parsed = ingest::parse_hourly_csv(input, st);
  auto result = ingest::build_indicators(parsed.records, st);
  std::vector<double> xs, ys;
  for (const auto& d : result.days) {
    if (!d.valid) continue;
    for (const auto& r : d.hours) {
      xs.push_back(hourly_variable(r, x, st));
      ys.push_back(hourly_variable(r, y, st));
    }
  }
  auto res = stats::coherence(xs, ys, segment_len, cutoff);
  std::string path = out_path(opt, "coherence_" + x + "_" + y + ".csv");
  csv::Writer w(path);
  w.header({"frequency_cph", "squared_coherence"});
  for (size_t i = 0; i < res.frequency.size(); ++i)
    w.line({fmt_num(res.frequency[i]), fmt_num(res.coherence[i])});
  mf.inputs = {input, opt.station_meta_path};
  mf.outputs = {path};
  mf.extra["segments"] = res.segments;
  mf.extra["lowpass_cutoff"] = cutoff;
}

inline void cmd_analyze_regression(const CommonOptions& opt, const std::string& input,
                                   const std::string& x, const std::string& y, Manifest& mf) {
  StationMeta st = require_station(opt);
  auto parsed = ingest::parse_hourly_csv(input, st);
  auto result = ingest::build_indicators(parsed.records, st);
  std::vector<double> xs, ys;
  for (const auto& d : result.days) {
    if (!d.valid) continue;
    for (const auto& r : d.hours) {
      double i0 = solar::extraterrestrial_hourly_whm2(st, r.timestamp.date, r.timestamp.hour);
      if (i0 < 20 || r.global_whm2 < 5) continue;  // daylight hours only
      xs.push_back(hourly_variable(r, x, st));
      ys.push_back(hourly_variable(r, y, st));
    }
  }
  auto fit = stats::linear_regression(xs, ys);
  std::string path = out_path(opt, "regression_" + x + "_" + y + ".csv");
  csv::Writer w(path);
  w.header({"x", "y", "slope", "intercept", "r_squared", "residual_std", "n"});
  w.line({x, y, fmt_num(fit.slope), fmt_num(fit.intercept), fmt_num(fit.r_squared),
          fmt_num(fit.residual_std), std::to_string(fit.n)});
  mf.inputs = {input, opt.station_meta_path};
  mf.outputs = {path};
  mf.extra["slope"] = fit.slope;
  mf.extra["r_squared"] = fit.r_squared;
}

inline void cmd_generate(const CommonOptions& opt, std::string model_path,
                         const std::string& class_name, const std::string& models_dir, int days,
                         uint64_t seed, const std::string& start_date, bool history_rain,
                         double history_humidity, const std::string& out_file, Manifest& mf) {
  if (model_path.empty()) {
    if (class_name.empty()) throw error("generate needs --model or --class");
    fs::path dir = models_dir.empty() ? fs::path(opt.out_dir) : fs::path(models_dir);
    model_path = (dir / ("model_" + slugify(class_name) + ".model")).string();
  }
  auto model = weathergen::model_from_config(config::parse_file(model_path));

  weathergen::GenerationRequest req;
  req.class_name = class_name.empty() ? model.class_name : class_name;
  req.season = model.season;
  req.days = days;
  req.seed = seed;
  if (!start_date.empty()) {
    auto ts = parse_timestamp(start_date + "T00:00");
    if (!ts) throw error("bad --start-date '" + start_date + "' (expected YYYY-MM-DD)");
    req.start_date = ts->date;
  }
  if (history_rain || history_humidity > 0) {
    weathergen::HistoryState h;
    h.post_rain = history_rain;
    if (history_humidity > 0) h.mean_humidity_pct = history_humidity;
    req.history = h;
  }
  auto generated = weathergen::generate_sequence(model, req);

  std::string path = out_file.empty()
                         ? out_path(opt, "generated_" + slugify(model.class_name) + "_s" +
                                             std::to_string(seed) + ".csv")
                         : out_file;
  std::vector<HourlyRecord> records;
  for (const auto& d : generated)
    for (const auto& r : d.hours) records.push_back(r);
  ingest::write_hourly_csv(path, records);
  mf.inputs = {model_path};
  mf.outputs = {path};
  mf.extra["seed"] = seed;
  mf.extra["days"] = days;
  mf.extra["class"] = model.class_name;
}

struct SimulateFlags {
  std::string building = "t3v";
  std::string weather;
  std::string hvac_kind = "ideal";
  double setpoint = 25.0;
  double rh_setpoint = 60.0;
  double rated_w = 3500.0;
  double rated_moisture = 4e-4;
  double deadband = 1.0;
  double min_on = 120.0;
  double min_off = 120.0;
  int hvac_start = 0;
  int hvac_end = 24;
  int nodes_per_layer = 3;
  bool free_float = false;
};

inline void cmd_simulate(const CommonOptions& opt, const SimulateFlags& flags, Manifest& mf) {
  StationMeta st = require_station(opt);
  auto b = load_building_arg(flags.building);
  auto parsed = ingest::parse_hourly_csv(flags.weather, st);
  auto days = ingest::assemble_days(parsed.records);
  std::vector<DayProfile> valid;
  for (const auto& d : days) {
    if (!d.valid) throw error("weather file contains an incomplete day " + format_date(d.date));
    valid.push_back(d);
  }

  std::optional<hvac::HvacSpec> spec;
  if (!flags.free_float) {
    hvac::HvacSpec s;
    auto kind = hvac::model_kind_from_name(flags.hvac_kind);
    if (!kind) throw error("unknown hvac model '" + flags.hvac_kind + "'");
    s.kind = *kind;
    s.cooling_setpoint_c = flags.setpoint;
    s.rh_setpoint_pct = flags.rh_setpoint;
    s.rated_sensible_w = flags.rated_w;
    s.rated_moisture_kgps = flags.rated_moisture;
    s.deadband_k = flags.deadband;
    s.min_on_s = flags.min_on;
    s.min_off_s = flags.min_off;
    s.schedule_start_h = flags.hvac_start;
    s.schedule_end_h = flags.hvac_end;
    spec = s;
  }

  thermal::SimOptions sim_opt;
  sim_opt.nodes_per_layer = flags.nodes_per_layer;
  auto res = thermal::simulate_building(b, valid, spec, st, sim_opt);
  emit_diagnostics(res.diagnostics);

  std::string stem = fs::path(flags.weather).stem().string();
  std::string loads_path = out_path(opt, "loads_" + stem + ".csv");
  hvac::write_loads_csv(loads_path, res.rows);

  hvac::SequenceSpan span{stem, valid.front().date, valid.back().date};
  auto caps = hvac::accumulate_capacities(res.rows, {span});
  std::string daily_path = out_path(opt, "daily_" + stem + ".csv");
  csv::Writer daily(daily_path);
  daily.header({"date", "zone", "sensible_kwh", "latent_kwh", "total_kwh"});
  for (const auto& d : caps.daily)
    daily.line({format_date(d.date), d.zone, fmt_num(d.sensible_kwh, 6), fmt_num(d.latent_kwh, 6),
                fmt_num(d.total_kwh, 6)});

  mf.inputs = {flags.weather, opt.station_meta_path};
  if (flags.building != "t3v") mf.inputs.push_back(flags.building);
  mf.outputs = {loads_path, daily_path};
  mf.extra["building"] = b.name;
  mf.extra["hvac"] = flags.free_float ? "none" : flags.hvac_kind;
  mf.extra["days"] = valid.size();
  mf.extra["stored_delta_j"] = res.audit.stored_delta_j;
  mf.extra["net_input_j"] = res.audit.net_input_j;
  mf.extra["hvac_sensible_kwh"] = res.audit.hvac_sensible_j / 3.6e6;
  mf.extra["hvac_latent_kwh"] = res.audit.hvac_latent_j / 3.6e6;
}

inline void cmd_report(const CommonOptions& opt, const std::vector<std::string>& loads_files,
                       std::vector<std::string> names,
                       const std::vector<std::string>& weather_files, Manifest& mf) {
  if (loads_files.empty()) throw error("report needs at least one --loads file");
  if (!names.empty() && names.size() != loads_files.size())
    throw error("--names must match --loads count");
  if (!weather_files.empty() && weather_files.size() != loads_files.size())
    throw error("--weather must match --loads count");
  if (names.empty())
    for (const auto& f : loads_files) {
      std::string stem = fs::path(f).stem().string();
      if (stem.rfind("loads_", 0) == 0) stem = stem.substr(6);
      names.push_back(stem);
    }

  std::vector<hvac::HvacResult> results;
  for (size_t i = 0; i < loads_files.size(); ++i) {
    auto rows = hvac::read_loads_csv(loads_files[i]);
    if (rows.empty()) throw error("empty loads file " + loads_files[i]);
    Date start = rows.front().timestamp.date, end = rows.back().timestamp.date;
    results.push_back(hvac::accumulate_capacities(rows, {{names[i], start, end}}));
  }
  auto reports = report::build_report(results, names);

  if (!weather_files.empty()) {
    StationMeta st = require_station(opt);
    std::map<std::string, std::map<Indicator, double>> by_name;
    for (size_t i = 0; i < weather_files.size(); ++i) {
      auto parsed = ingest::parse_hourly_csv(weather_files[i], st);
      auto result = ingest::build_indicators(parsed.records, st);
      by_name[names[i]] = classify::summarize_indicators(result.indicators);
    }
    report::attach_indicators(reports, by_name);
  }

  std::string cap_path = out_path(opt, "capacities.csv");
  std::string rep_path = out_path(opt, "report.csv");
  std::string plot_path = out_path(opt, "plot_data.csv");
  report::write_capacities_csv(cap_path, reports);
  report::write_report_csv(rep_path, reports);
  report::write_plot_csv(plot_path, reports);

  mf.inputs = loads_files;
  for (const auto& w : weather_files) mf.inputs.push_back(w);
  mf.outputs = {cap_path, rep_path, plot_path};
  mf.extra["sequences"] = names;
}

// ---------------------------------------------------------------------------
// argv wiring

inline int run(const std::vector<std::string>& argv) {
  CLI::App app{"weather sequence analysis, synthesis and building cooling-load toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  common.out_dir = default_out_dir();

  auto add_common = [&](CLI::App* sub, bool with_scheme = false) {
    sub->add_option("--out-dir", common.out_dir, "output directory (env WEATHERSEQ_OUT_DIR)");
    sub->add_option("--station-meta", common.station_meta_path, "station metadata file");
    if (with_scheme) {
      sub->add_option("--scheme", common.scheme_path, "classification scheme file");
      sub->add_option("--criteria", common.criteria_path, "day-class criteria file");
    }
  };

  std::string input, select, season = "all", variable = "global", x_var = "temp", y_var = "global";
  int min_len = classify::kDefaultMinSequenceLength;
  int history_len = classify::kDefaultHistoryLength;
  size_t segment_len = 256;
  double cutoff = 0.0;
  std::string model_path, class_name, models_dir, start_date, out_file;
  int gen_days = 5;
  uint64_t seed = 0;
  bool history_rain = false;
  double history_humidity = 0;
  SimulateFlags sim;
  std::vector<std::string> loads_files, names, weather_files;

  CLI::App* c_ingest = app.add_subcommand("ingest", "parse and validate hourly station data");
  c_ingest->add_option("--input", input, "hourly CSV")->required();
  add_common(c_ingest);

  CLI::App* c_classify = app.add_subcommand("classify", "classify days and build the catalogue");
  c_classify->add_option("--input", input, "hourly CSV")->required();
  c_classify->add_option("--min-len", min_len, "minimum sequence length (days)");
  c_classify->add_option("--history", history_len, "history window (days)");
  add_common(c_classify, true);

  CLI::App* c_catalogue = app.add_subcommand("catalogue", "extract per-sequence weather files");
  c_catalogue->add_option("--input", input, "hourly CSV")->required();
  c_catalogue->add_option("--select", select, "criteria name or slug (default: all)");
  c_catalogue->add_option("--min-len", min_len, "minimum sequence length (days)");
  c_catalogue->add_option("--history", history_len, "history window (days)");
  add_common(c_catalogue, true);

  CLI::App* c_fit = app.add_subcommand("fit", "fit per-class stochastic models");
  c_fit->add_option("--input", input, "hourly CSV")->required();
  c_fit->add_option("--season", season, "humid, fresh or all");
  add_common(c_fit, true);

  CLI::App* c_analyze = app.add_subcommand("analyze", "statistical analyses");
  c_analyze->require_subcommand(1);
  CLI::App* c_pca = c_analyze->add_subcommand("pca", "daily-profile principal components");
  c_pca->add_option("--input", input, "hourly CSV")->required();
  c_pca->add_option("--variable", variable, "temp|rh|wind|global|clearness|diffuse_fraction");
  add_common(c_pca);
  CLI::App* c_coh = c_analyze->add_subcommand("coherence", "spectral coherence of two variables");
  c_coh->add_option("--input", input, "hourly CSV")->required();
  c_coh->add_option("--x", x_var, "first variable");
  c_coh->add_option("--y", y_var, "second variable");
  c_coh->add_option("--segment-len", segment_len, "Welch segment length (power of two)");
  c_coh->add_option("--cutoff", cutoff, "low-pass cutoff in cycles/hour (0 = none)");
  add_common(c_coh);
  CLI::App* c_reg = c_analyze->add_subcommand("regression", "hourly regression between variables");
  c_reg->add_option("--input", input, "hourly CSV")->required();
  c_reg->add_option("--x", x_var, "predictor variable");
  c_reg->add_option("--y", y_var, "response variable");
  add_common(c_reg);

  CLI::App* c_generate = app.add_subcommand("generate", "synthesize a weather sequence");
  c_generate->add_option("--model", model_path, "class model file");
  c_generate->add_option("--class", class_name, "class name or slug (with --models-dir)");
  c_generate->add_option("--models-dir", models_dir, "directory holding model files");
  c_generate->add_option("--days", gen_days, "number of days");
  c_generate->add_option("--seed", seed, "random seed");
  c_generate->add_option("--start-date", start_date, "YYYY-MM-DD (default: class anchor)");
  c_generate->add_flag("--history-rain", history_rain, "condition on preceding rainy days");
  c_generate->add_option("--history-humidity", history_humidity,
                         "mean RH of the preceding days (%)");
  c_generate->add_option("--out", out_file, "output CSV path");
  add_common(c_generate);

  CLI::App* c_simulate = app.add_subcommand("simulate", "run the building thermal model");
  c_simulate->add_option("--building", sim.building, "building file or 't3v'");
  c_simulate->add_option("--weather", sim.weather, "hourly weather CSV")->required();
  c_simulate->add_option("--hvac", sim.hvac_kind, "ideal|cycling|cycling-perf");
  c_simulate->add_flag("--free-float", sim.free_float, "no HVAC, free-floating temperatures");
  c_simulate->add_option("--setpoint", sim.setpoint, "cooling setpoint (C)");
  c_simulate->add_option("--rh-setpoint", sim.rh_setpoint, "relative-humidity setpoint (%)");
  c_simulate->add_option("--rated-w", sim.rated_w, "rated sensible capacity (W, cycling)");
  c_simulate->add_option("--rated-moisture", sim.rated_moisture,
                         "rated moisture extraction (kg/s, cycling)");
  c_simulate->add_option("--deadband", sim.deadband, "thermostat deadband (K)");
  c_simulate->add_option("--min-on", sim.min_on, "minimum on time (s)");
  c_simulate->add_option("--min-off", sim.min_off, "minimum off time (s)");
  c_simulate->add_option("--hvac-start", sim.hvac_start, "first operating hour (default 0)");
  c_simulate->add_option("--hvac-end", sim.hvac_end, "hour operation stops (default 24)");
  c_simulate->add_option("--nodes-per-layer", sim.nodes_per_layer, "wall discretization");
  add_common(c_simulate);

  CLI::App* c_report = app.add_subcommand("report", "comparative sequence report");
  c_report->add_option("--loads", loads_files, "hourly loads CSV (repeatable)");
  c_report->add_option("--names", names, "sequence names (match --loads order)");
  c_report->add_option("--weather", weather_files, "weather CSVs for indicator summaries");
  add_common(c_report);

  std::vector<std::string> args = argv;  // CLI11 wants reversed argv without the program name
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Manifest mf;
  mf.argv = argv;
  try {
    fs::create_directories(common.out_dir);
    if (app.got_subcommand(c_ingest)) {
      mf.command = "ingest";
      cmd_ingest(common, input, mf);
    } else if (app.got_subcommand(c_classify)) {
      mf.command = "classify";
      cmd_classify(common, input, min_len, history_len, mf);
    } else if (app.got_subcommand(c_catalogue)) {
      mf.command = "catalogue";
      cmd_catalogue(common, input, select, min_len, history_len, mf);
    } else if (app.got_subcommand(c_fit)) {
      mf.command = "fit";
      cmd_fit(common, input, season, mf);
    } else if (app.got_subcommand(c_analyze)) {
      if (c_analyze->got_subcommand(c_pca)) {
        mf.command = "analyze_pca";
        cmd_analyze_pca(common, input, variable, mf);
      } else if (c_analyze->got_subcommand(c_coh)) {
        mf.command = "analyze_coherence";
        cmd_analyze_coherence(common, input, x_var, y_var, segment_len, cutoff, mf);
      } else {
        mf.command = "analyze_regression";
        cmd_analyze_regression(common, input, x_var, y_var, mf);
      }
    } else if (app.got_subcommand(c_generate)) {
      mf.command = "generate";
      cmd_generate(common, model_path, class_name, models_dir, gen_days, seed, start_date,
                   history_rain, history_humidity, out_file, mf);
    } else if (app.got_subcommand(c_simulate)) {
      mf.command = "simulate";
      cmd_simulate(common, sim, mf);
    } else if (app.got_subcommand(c_report)) {
      mf.command = "report";
      cmd_report(common, loads_files, names, weather_files, mf);
    }
    mf.write(common.out_dir);
  } catch (const error& e) {
    json j;
    j["error"] = e.what();
    j["command"] = mf.command;
    std::cerr << j.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wseq::cli
