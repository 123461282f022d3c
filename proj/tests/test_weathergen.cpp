#include <doctest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "weatherseq/weathergen.hpp"

using namespace wseq;
using namespace wseq::weathergen;

namespace {

// A hand-specified model, used as the generating oracle for round trips.
ClassModel reference_model() {
  ClassModel m;
  m.class_name = "High radiation, breeze";
  m.season = Season::humid;
  m.station = fixture::station();
  m.anchor_month = 1;
  m.n_days = 0;

  m.clearness.family = stats::Family::bounded_beta;
  m.clearness.alpha = 5.0;
  m.clearness.beta = 3.0;
  m.clearness.lo = 0.35;
  m.clearness.hi = 0.80;

  RadiationShape shape;
  double sum = 0;
  for (int h = 0; h < 24; ++h) {
    double x = (h - 12.5) / 3.6;
    double v = (h >= 6 && h <= 19) ? std::exp(-x * x) : 0.0;
    shape.frac[static_cast<size_t>(h)] = v;
    sum += v;
  }
  for (double& v : shape.frac) v /= sum;
  m.shapes = {shape};

  m.temp_mu = 27.0;
  m.temp_sigma = 1.0;
  m.temp_kt_rho = 0.4;
  double dsum = 0;
  for (int h = 0; h < 24; ++h) {
    m.temp_diurnal[static_cast<size_t>(h)] = 3.0 * std::cos(2 * wseq::detail::kPi * (h - 14) / 24.0);
    dsum += m.temp_diurnal[static_cast<size_t>(h)];
  }
  for (double& v : m.temp_diurnal) v -= dsum / 24.0;
  m.temp_phi = 0.8;
  m.temp_innov_sigma = 0.3;

  m.wind.family = stats::Family::weibull;
  m.wind.shape_k = 2.2;
  m.wind.scale_lambda = 2.3;
  m.wind_phi = 0.7;
  double msum = 0;
  for (int h = 0; h < 24; ++h) {
    m.wind_modulation[static_cast<size_t>(h)] = (h >= 6 && h < 18) ? 1.3 : 0.7;
    msum += m.wind_modulation[static_cast<size_t>(h)];
  }
  for (double& v : m.wind_modulation) v *= 24.0 / msum;

  m.hum_mu = 74.0;
  m.hum_sigma = 3.0;
  m.hum_postrain_shift = 8.0;
  m.hum_temp_gain = 1.2;

  m.diffuse_vs_kt.slope = -1.1;
  m.diffuse_vs_kt.intercept = 1.02;
  m.insolation_vs_kt.slope = 1.4;
  m.insolation_vs_kt.intercept = -0.15;

  m.wind_dir_hist[4] = 0.7;  // east
  m.wind_dir_hist[5] = 0.3;
  return m;
}

ClassModel fitted_breeze_model(uint64_t seed = 400) {
  auto st = fixture::station();
  fixture::ClassSpec spec;  // high radiation, breeze defaults
  auto days = fixture::make_class_days({1994, 1, 3}, 40, st, spec, seed);
  auto seqs = fixture::as_sequences(days, st, "High radiation, breeze", 8);
  return build_class_model("High radiation, breeze", Season::humid, seqs, fixture::day_lookup(days),
                           st);
}

}  // namespace

TEST_CASE("normal_to_weibull analytic fixtures") {
  CHECK(normal_to_weibull(0.0, 1.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(normal_to_weibull(-8.0, 2.0, 5.0) < 1e-4);             // z -> -inf drives w -> 0
  CHECK(normal_to_weibull(1.0, 2.0, 5.0) >
        normal_to_weibull(0.9, 2.0, 5.0));                     // monotone
  CHECK_THROWS_AS(normal_to_weibull(0.0, -1.0, 1.0), error);
}

TEST_CASE("normal_to_weibull maps a standard normal stream onto the weibull law") {
  std::mt19937_64 gen(808);
  std::normal_distribution<double> unit(0, 1);
  std::vector<double> mapped;
  for (int i = 0; i < 100000; ++i) mapped.push_back(normal_to_weibull(unit(gen), 2.0, 5.0));
  stats::FittedDistribution target;
  target.family = stats::Family::weibull;
  target.shape_k = 2.0;
  target.scale_lambda = 5.0;
  auto ks = stats::ks_test(mapped, target);
  CHECK(ks.pass);
  CHECK(weibull_to_normal(normal_to_weibull(0.7, 2.0, 5.0), 2.0, 5.0) == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("generation is deterministic given the seed") {
  auto model = reference_model();
  GenerationRequest req;
  req.class_name = model.class_name;
  req.season = Season::humid;
  req.days = 5;
  req.seed = 7;
  auto a = generate_sequence(model, req);
  auto b = generate_sequence(model, req);
  REQUIRE(a.size() == b.size());
  for (size_t d = 0; d < a.size(); ++d)
    for (int h = 0; h < 24; ++h) {
      const auto& ra = a[d].hours[static_cast<size_t>(h)];
      const auto& rb = b[d].hours[static_cast<size_t>(h)];
      CHECK(ra.temp_c == rb.temp_c);
      CHECK(ra.wind_ms == rb.wind_ms);
      CHECK(ra.global_whm2 == rb.global_whm2);
      CHECK(ra.rh_pct == rb.rh_pct);
    }
  GenerationRequest req2 = req;
  req2.seed = 8;
  auto c = generate_sequence(model, req2);
  CHECK(c[0].hours[12].temp_c != a[0].hours[12].temp_c);
}

TEST_CASE("generated records always satisfy the hourly invariants") {
  auto model = reference_model();
  GenerationRequest req;
  req.class_name = "high-radiation-breeze";  // slug accepted
  req.days = 60;
  req.seed = 99;
  auto days = generate_sequence(model, req);
  REQUIRE(days.size() == 60);
  for (const auto& d : days)
    for (const auto& r : d.hours) CHECK_FALSE(check_record(r).has_value());
}

TEST_CASE("unknown class and bad history are rejected") {
  auto model = reference_model();
  GenerationRequest req;
  req.class_name = "no such class";
  req.days = 2;
  CHECK_THROWS_AS(generate_sequence(model, req), error);
  req.class_name = model.class_name;
  req.history = HistoryState{};
  req.history->mean_humidity_pct = 140.0;
  CHECK_THROWS_AS(generate_sequence(model, req), error);
  req.history.reset();
  req.days = 0;
  CHECK_THROWS_AS(generate_sequence(model, req), error);
}

TEST_CASE("round trip: refitting generated data recovers the generating model") {
  auto model = reference_model();
  GenerationRequest req;
  req.class_name = model.class_name;
  req.days = 200;
  req.seed = 2024;
  auto days = generate_sequence(model, req);
  auto seqs = fixture::as_sequences(days, model.station, model.class_name, 10);
  auto refit = build_class_model(model.class_name, Season::humid, seqs,
                                 fixture::day_lookup(days), model.station);
  CHECK(std::abs(refit.temp_phi - model.temp_phi) < 0.05);
  CHECK(std::abs(refit.wind.shape_k - model.wind.shape_k) / model.wind.shape_k < 0.10);
  CHECK(std::abs(refit.wind.scale_lambda - model.wind.scale_lambda) / model.wind.scale_lambda < 0.10);
  CHECK(std::abs(refit.temp_mu - model.temp_mu) < 0.3);
  CHECK(std::abs(refit.temp_sigma - model.temp_sigma) / model.temp_sigma < 0.2);
  CHECK(std::abs(refit.wind_phi - model.wind_phi) < 0.08);
  CHECK(std::abs(refit.hum_mu - model.hum_mu) < 1.0);
}

TEST_CASE("constant-temperature class data raises a degenerate-variance error") {
  auto st = fixture::station();
  fixture::ClassSpec spec;
  spec.temp_sd = 0;
  spec.temp_amp = 0;
  spec.hourly_temp_noise = 0;
  auto days = fixture::make_class_days({1994, 1, 3}, 12, st, spec, 5);
  auto seqs = fixture::as_sequences(days, st, "c");
  CHECK_THROWS_AS(build_class_model("c", Season::humid, seqs, fixture::day_lookup(days), st),
                  error);
}

TEST_CASE("insufficient class data is rejected") {
  auto st = fixture::station();
  auto days = fixture::make_class_days({1994, 1, 3}, 5, st, {}, 6);
  auto seqs = fixture::as_sequences(days, st, "c");
  CHECK_THROWS_AS(build_class_model("c", Season::humid, seqs, fixture::day_lookup(days), st),
                  error);
}

TEST_CASE("identical radiation days collapse to a single shape equal to that profile") {
  auto st = fixture::station();
  auto days = fixture::make_class_days({1994, 1, 3}, 10, st, {}, 7);
  // overwrite radiation with one fixed bell for all days
  std::array<double, 24> bell{};
  for (int h = 0; h < 24; ++h) {
    double x = (h - 12.0) / 3.0;
    bell[static_cast<size_t>(h)] = (h >= 7 && h <= 17) ? 700 * std::exp(-x * x) : 0.0;
  }
  for (auto& d : days)
    for (int h = 0; h < 24; ++h) {
      d.hours[static_cast<size_t>(h)].global_whm2 = bell[static_cast<size_t>(h)];
      d.hours[static_cast<size_t>(h)].diffuse_whm2 = 0.25 * bell[static_cast<size_t>(h)];
    }
  auto seqs = fixture::as_sequences(days, st, "c");
  auto model = build_class_model("c", Season::humid, seqs, fixture::day_lookup(days), st);
  REQUIRE(model.shapes.size() == 1);
  CHECK(model.shapes[0].weight == doctest::Approx(1.0));
  double bell_sum = 0;
  for (double v : bell) bell_sum += v;
  for (int h = 0; h < 24; ++h)
    CHECK(model.shapes[0].frac[static_cast<size_t>(h)] ==
          doctest::Approx(bell[static_cast<size_t>(h)] / bell_sum).epsilon(1e-9));
}

TEST_CASE("rain history raises the first generated day's humidity") {
  auto model = reference_model();
  GenerationRequest wet, dry;
  wet.class_name = dry.class_name = model.class_name;
  wet.days = dry.days = 1;
  wet.seed = dry.seed = 31;
  wet.history = HistoryState{};
  wet.history->post_rain = true;
  dry.history = HistoryState{};
  dry.history->post_rain = false;
  auto wet_days = generate_sequence(model, wet);
  auto dry_days = generate_sequence(model, dry);
  double wet_mean = 0, dry_mean = 0;
  for (int h = 0; h < 24; ++h) {
    wet_mean += wet_days[0].hours[static_cast<size_t>(h)].rh_pct / 24;
    dry_mean += dry_days[0].hours[static_cast<size_t>(h)].rh_pct / 24;
  }
  CHECK(wet_mean > dry_mean);
  CHECK(wet_mean - dry_mean == doctest::Approx(model.hum_postrain_shift).epsilon(0.2));
}

TEST_CASE("validate_generated passes on the model's own output") {
  auto model = fitted_breeze_model();
  std::vector<DayProfile> pool;
  for (int chunk = 0; chunk < 20; ++chunk) {
    GenerationRequest req;
    req.class_name = model.class_name;
    req.days = 10;
    req.seed = 5000 + static_cast<uint64_t>(chunk);
    req.start_date = Date{2001, 1, 5};
    auto days = generate_sequence(model, req);
    pool.insert(pool.end(), days.begin(), days.end());
  }
  auto report = validate_generated(pool, model);
  for (const auto& c : report.checks) {
    INFO(c.name, " value=", c.value, " threshold=", c.threshold);
    CHECK(c.pass);
  }
}

TEST_CASE("validation fails when structure is destroyed") {
  auto model = fitted_breeze_model(401);
  GenerationRequest req;
  req.class_name = model.class_name;
  req.days = 60;
  req.seed = 17;
  auto days = generate_sequence(model, req);

  SUBCASE("shuffled hourly temperatures break the autocorrelation check") {
    std::mt19937_64 gen(1);
    std::vector<double> temps;
    for (const auto& d : days)
      for (const auto& r : d.hours) temps.push_back(r.temp_c);
    std::shuffle(temps.begin(), temps.end(), gen);
    size_t i = 0;
    for (auto& d : days)
      for (auto& r : d.hours) r.temp_c = temps[i++];
    auto report = validate_generated(days, model);
    bool ar_pass = true;
    for (const auto& c : report.checks)
      if (c.name.find("autocorrelation") != std::string::npos) ar_pass = c.pass;
    CHECK_FALSE(ar_pass);
  }

  SUBCASE("constant wind fails the marginal KS check") {
    for (auto& d : days)
      for (auto& r : d.hours) r.wind_ms = 2.0;
    auto report = validate_generated(days, model);
    bool wind_pass = true;
    for (const auto& c : report.checks)
      if (c.name.find("wind") != std::string::npos) wind_pass = c.pass;
    CHECK_FALSE(wind_pass);
  }

  SUBCASE("too few days are rejected") {
    days.resize(10);
    CHECK_THROWS_AS(validate_generated(days, model), error);
  }
}

TEST_CASE("generated days mostly re-classify into the requested class") {
  auto model = fitted_breeze_model(402);
  auto scheme = classify::default_scheme();
  const auto& rad_bins = scheme.require(Indicator::global_sum);
  const auto& wind_bins = scheme.require(Indicator::wind_diurnal_mean);
  int in_class = 0, total = 0;
  for (int chunk = 0; chunk < 20; ++chunk) {
    GenerationRequest req;
    req.class_name = model.class_name;
    req.days = 5;
    req.seed = 9000 + static_cast<uint64_t>(chunk);
    auto days = generate_sequence(model, req);
    for (const auto& d : days) {
      auto ind = ingest::compute_daily_indicators(d, model.station);
      auto rl = rad_bins.label_of(ind.global_sum);
      auto wl = wind_bins.label_of(ind.wind_diurnal_mean);
      if (rl && *rl == "high radiation" && wl && *wl == "breeze") ++in_class;
      ++total;
    }
  }
  INFO("in-class fraction: ", static_cast<double>(in_class) / total);
  CHECK(static_cast<double>(in_class) / total >= 0.8);
}

TEST_CASE("model files round trip exactly") {
  auto model = fitted_breeze_model(403);
  auto text = config::to_string(model_to_config(model));
  auto loaded = model_from_config(config::parse(text));
  CHECK(loaded.class_name == model.class_name);
  CHECK(loaded.temp_mu == model.temp_mu);
  CHECK(loaded.temp_phi == model.temp_phi);
  CHECK(loaded.wind.shape_k == model.wind.shape_k);
  CHECK(loaded.clearness.alpha == model.clearness.alpha);
  CHECK(loaded.wind_modulation == model.wind_modulation);
  CHECK(loaded.shapes.size() == model.shapes.size());
  CHECK(loaded.fits.size() == model.fits.size());

  // identical generation from the reloaded model
  GenerationRequest req;
  req.class_name = model.class_name;
  req.days = 3;
  req.seed = 12;
  auto a = generate_sequence(model, req);
  auto b = generate_sequence(loaded, req);
  for (size_t d = 0; d < a.size(); ++d)
    for (int h = 0; h < 24; ++h)
      CHECK(a[d].hours[static_cast<size_t>(h)].temp_c == b[d].hours[static_cast<size_t>(h)].temp_c);
}
