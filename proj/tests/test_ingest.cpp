#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "weatherseq/ingest.hpp"

using namespace wseq;

namespace {

std::string csv_header() {
  return "timestamp,temp_c,rh_pct,wind_ms,wind_dir_deg,nebulosity_okta,insolation_h,global_whm2,diffuse_whm2\n";
}

std::string row(const std::string& ts, double temp = 25, double rh = 70, double wind = 2,
                double dir = 90, int okta = 3, double ins = 0.5, double g = 300, double d = 100) {
  std::ostringstream os;
  os << ts << ',' << temp << ',' << rh << ',' << wind << ',' << dir << ',' << okta << ',' << ins
     << ',' << g << ',' << d << '\n';
  return os.str();
}

}  // namespace

TEST_CASE("well-formed 48-row file parses completely and sorted") {
  std::string content = csv_header();
  // write the two days out of order to exercise sorting
  for (int h = 0; h < 24; ++h) content += row(std::string("1994-01-02T") + (h < 10 ? "0" : "") + std::to_string(h) + ":00");
  for (int h = 0; h < 24; ++h) content += row(std::string("1994-01-01T") + (h < 10 ? "0" : "") + std::to_string(h) + ":00");
  auto path = fixture::write_file("two_days.csv", content);
  auto res = ingest::parse_hourly_csv(path, fixture::station());
  CHECK(res.records.size() == 48);
  CHECK(res.diagnostics.empty());
  for (size_t i = 1; i < res.records.size(); ++i)
    CHECK(res.records[i - 1].timestamp < res.records[i].timestamp);
  CHECK(res.records.front().timestamp.date == Date{1994, 1, 1});
}

TEST_CASE("out-of-range humidity rejects the row, keeps the rest") {
  std::string content = csv_header();
  content += row("1994-01-01T00:00");
  content += row("1994-01-01T01:00", 25, 140);  // rh 140
  content += row("1994-01-01T02:00");
  auto path = fixture::write_file("bad_rh.csv", content);
  auto res = ingest::parse_hourly_csv(path, fixture::station());
  CHECK(res.records.size() == 2);
  REQUIRE(res.diagnostics.size() == 1);
  CHECK(res.diagnostics[0].severity == Diagnostic::Severity::rejected);
  CHECK(res.diagnostics[0].message.find("relative_humidity") != std::string::npos);
}

TEST_CASE("duplicate timestamp keeps the first row and warns") {
  std::string content = csv_header();
  content += row("1994-01-01T00:00", 25);
  content += row("1994-01-01T00:00", 99);
  auto path = fixture::write_file("dup.csv", content);
  auto res = ingest::parse_hourly_csv(path, fixture::station());
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].temp_c == 25);
  REQUIRE(res.diagnostics.size() == 1);
  CHECK(res.diagnostics[0].severity == Diagnostic::Severity::warning);
}

TEST_CASE("malformed header and missing file raise") {
  auto path = fixture::write_file("bad_header.csv", "time,temp\n1,2\n");
  CHECK_THROWS_AS(ingest::parse_hourly_csv(path, fixture::station()), error);
  CHECK_THROWS_AS(ingest::parse_hourly_csv("/nonexistent/file.csv", fixture::station()), error);
}

TEST_CASE("diffuse above global rejects the row") {
  std::string content = csv_header();
  content += row("1994-01-01T00:00", 25, 70, 2, 90, 3, 0.5, 100, 200);
  auto path = fixture::write_file("diffuse.csv", content);
  auto res = ingest::parse_hourly_csv(path, fixture::station());
  CHECK(res.records.empty());
  REQUIRE(res.diagnostics.size() == 1);
}

TEST_CASE("24 contiguous hours assemble into one valid day") {
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), {});
  auto days = ingest::assemble_days(fixture::flatten({day}));
  REQUIRE(days.size() == 1);
  CHECK(days[0].valid);
  CHECK(days[0].fill_count == 0);
}

TEST_CASE("three-hour gap interpolates linearly and stays valid") {
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), {});
  auto records = fixture::flatten({day});
  // remove hours 10..12
  std::vector<HourlyRecord> gappy;
  for (const auto& r : records)
    if (r.timestamp.hour < 10 || r.timestamp.hour > 12) gappy.push_back(r);
  auto days = ingest::assemble_days(gappy);
  REQUIRE(days.size() == 1);
  CHECK(days[0].valid);
  CHECK(days[0].fill_count == 3);
  double expect_mid = 0.5 * (records[9].temp_c + records[13].temp_c);
  CHECK(days[0].hours[11].temp_c == doctest::Approx(expect_mid).epsilon(1e-12));
}

TEST_CASE("gap longer than three hours invalidates the day") {
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), {});
  std::vector<HourlyRecord> gappy;
  for (const auto& r : day.hours)
    if (r.timestamp.hour < 8 || r.timestamp.hour > 13) gappy.push_back(r);
  auto days = ingest::assemble_days(gappy);
  REQUIRE(days.size() == 1);
  CHECK_FALSE(days[0].valid);
}

TEST_CASE("wind direction interpolates circularly across north") {
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), {});
  auto records = fixture::flatten({day});
  records[9].wind_dir_deg = 350;
  records[11].wind_dir_deg = 10;
  std::vector<HourlyRecord> gappy;
  for (const auto& r : records)
    if (r.timestamp.hour != 10) gappy.push_back(r);
  auto days = ingest::assemble_days(gappy);
  REQUIRE(days.size() == 1);
  REQUIRE(days[0].valid);
  CHECK(days[0].hours[10].wind_dir_deg == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("constant temperature day yields equal max and mean") {
  fixture::DaySpec spec;
  spec.temp_mean = 25.0;
  spec.temp_amplitude = 0.0;
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), spec);
  auto ind = ingest::compute_daily_indicators(day, fixture::station());
  CHECK(ind.temp_max == doctest::Approx(25.0));
  CHECK(ind.temp_mean == doctest::Approx(25.0));
}

TEST_CASE("global_sum is the exact sum of hourly energies") {
  // bell profile scaled to a published-looking daily sum
  auto day = fixture::synth_day({1994, 1, 20}, fixture::station(), {});
  std::array<double, 24> bell{};
  double raw = 0;
  for (int h = 0; h < 24; ++h) {
    double x = (h - 12.0) / 6.0;
    bell[static_cast<size_t>(h)] = (h >= 6 && h <= 18) ? std::exp(-x * x) : 0.0;
    raw += bell[static_cast<size_t>(h)];
  }
  double target = 8362.0;
  double assigned = 0;
  for (int h = 0; h < 24; ++h) {
    double g = bell[static_cast<size_t>(h)] / raw * target;
    day.hours[static_cast<size_t>(h)].global_whm2 = g;
    day.hours[static_cast<size_t>(h)].diffuse_whm2 = 0.2 * g;
    assigned += g;
  }
  // force exactness against accumulated rounding
  day.hours[12].global_whm2 += target - assigned;
  auto ind = ingest::compute_daily_indicators(day, fixture::station());
  CHECK(ind.global_sum == doctest::Approx(8362.0).epsilon(1e-12));
  CHECK(ind.diffuse_sum <= ind.global_sum);
}

TEST_CASE("diurnal and nocturnal wind windows") {
  fixture::DaySpec spec;
  spec.wind_day = 5.0;
  spec.wind_night = 1.0;
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), spec);
  auto ind = ingest::compute_daily_indicators(day, fixture::station());
  CHECK(ind.wind_diurnal_mean == doctest::Approx(5.0));    // hours 6..17
  CHECK(ind.wind_nocturnal_mean == doctest::Approx(1.0));  // hours 21..05
}

TEST_CASE("circular wind-direction mean with equal speeds") {
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), {});
  for (int h = 0; h < 24; ++h)
    day.hours[static_cast<size_t>(h)].wind_dir_deg = (h % 2 == 0) ? 350.0 : 10.0;
  auto ind = ingest::compute_daily_indicators(day, fixture::station());
  CHECK(ind.wind_dir_daily_mean == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("indicators are deterministic and idempotent") {
  auto day = fixture::synth_day({1994, 2, 10}, fixture::station(), {});
  auto a = ingest::compute_daily_indicators(day, fixture::station());
  auto b = ingest::compute_daily_indicators(day, fixture::station());
  CHECK(a.global_sum == b.global_sum);
  CHECK(a.clearness_index == b.clearness_index);
  CHECK(a.wind_dir_daily_mean == b.wind_dir_daily_mean);
  CHECK(a.clearness_index > 0);
  CHECK(a.clearness_index < 1.2);
  CHECK(a.diffuse_fraction == doctest::Approx(0.30).epsilon(1e-9));
}

TEST_CASE("invalid day is rejected by compute_daily_indicators") {
  DayProfile day;
  day.date = {1994, 1, 5};
  day.valid = false;
  CHECK_THROWS_AS(ingest::compute_daily_indicators(day, fixture::station()), error);
}

TEST_CASE("build_indicators invalidates clearness above 1.2") {
  fixture::DaySpec spec;
  spec.target_global_whm2 = 16000;  // impossible over-read
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), spec);
  auto res = ingest::build_indicators(fixture::flatten({day}), fixture::station());
  CHECK(res.indicators.empty());
  REQUIRE(res.days.size() == 1);
  CHECK_FALSE(res.days[0].valid);
  REQUIRE(res.diagnostics.size() == 1);
}

TEST_CASE("header-only and empty inputs") {
  auto path = fixture::write_file("header_only.csv", csv_header());
  auto res = ingest::parse_hourly_csv(path, fixture::station());
  CHECK(res.records.empty());
  CHECK(ingest::assemble_days({}).empty());
  auto built = ingest::build_indicators({}, fixture::station());
  CHECK(built.days.empty());
  CHECK(built.indicators.empty());
}

TEST_CASE("hourly csv round trips through writer and parser") {
  auto day = fixture::synth_day({1994, 1, 5}, fixture::station(), {});
  auto path = fixture::write_hourly("roundtrip.csv", {day});
  auto res = ingest::parse_hourly_csv(path, fixture::station());
  REQUIRE(res.records.size() == 24);
  for (int h = 0; h < 24; ++h) {
    CHECK(res.records[static_cast<size_t>(h)].temp_c ==
          doctest::Approx(day.hours[static_cast<size_t>(h)].temp_c).epsilon(1e-9));
    CHECK(res.records[static_cast<size_t>(h)].global_whm2 ==
          doctest::Approx(day.hours[static_cast<size_t>(h)].global_whm2).epsilon(1e-9));
  }
}
