#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support/fixtures.hpp"
#include "weatherseq/cli.hpp"

using namespace wseq;
namespace fs = std::filesystem;

namespace {

std::string fixtures_dir() { return WSEQ_FIXTURES_DIR; }
std::string station() { return fixtures_dir() + "/gillot_station.meta"; }
std::string sample() { return fixtures_dir() + "/sample_station.csv"; }

std::string fresh_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() / "wseq_cli" / tag;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::initializer_list<std::string> args) { return cli::run(std::vector<std::string>(args)); }

}  // namespace

TEST_CASE("usage errors exit with code 2, input errors with 1") {
  CHECK(run({"no-such-command"}) == 2);
  CHECK(run({"ingest"}) == 2);  // missing required --input
  auto dir = fresh_dir("errors");
  CHECK(run({"ingest", "--input", "/nonexistent.csv", "--station-meta", station(), "--out-dir",
             dir}) == 1);
  CHECK(run({"generate", "--days", "3", "--out-dir", dir}) == 1);  // no model given
}

TEST_CASE("ingest writes indicators, clean hourly data and a manifest") {
  auto dir = fresh_dir("ingest");
  CHECK(run({"ingest", "--input", sample(), "--station-meta", station(), "--out-dir", dir}) == 0);
  CHECK(fs::exists(dir + "/indicators.csv"));
  CHECK(fs::exists(dir + "/hourly_clean.csv"));
  CHECK(fs::exists(dir + "/manifest_ingest.json"));
  auto t = csv::read_file(dir + "/indicators.csv");
  CHECK(t.rows.size() == 128);  // every bundled day is valid
  CHECK(t.column("clearness_index") >= 0);

  auto manifest = nlohmann::json::parse(slurp(dir + "/manifest_ingest.json"));
  CHECK(manifest["command"] == "ingest");
  CHECK(manifest["tool_version"] == kVersion);
  CHECK(manifest["inputs"].size() == 2);
  CHECK(manifest["inputs"][0]["fnv1a64"].get<std::string>().size() == 16);
}

TEST_CASE("classify produces the catalogue and frequency tables") {
  auto dir = fresh_dir("classify");
  CHECK(run({"classify", "--input", sample(), "--station-meta", station(), "--out-dir", dir}) == 0);
  auto cat = csv::read_file(dir + "/catalogue.csv");
  CHECK(cat.rows.size() >= 8);  // the bundled station embeds multi-day regimes
  auto freq = csv::read_file(dir + "/frequencies.csv");
  CHECK(!freq.rows.empty());
  bool has_fresh = false, has_humid = false;
  int season_col = freq.column("season");
  for (const auto& r : freq.rows) {
    has_fresh = has_fresh || r[static_cast<size_t>(season_col)] == "fresh";
    has_humid = has_humid || r[static_cast<size_t>(season_col)] == "humid";
  }
  CHECK(has_fresh);
  CHECK(has_humid);

  // explicit scheme/criteria files give the same catalogue
  auto dir2 = fresh_dir("classify2");
  CHECK(run({"classify", "--input", sample(), "--station-meta", station(), "--scheme",
             fixtures_dir() + "/default.scheme", "--criteria", fixtures_dir() + "/default.criteria",
             "--out-dir", dir2}) == 0);
  CHECK(slurp(dir2 + "/catalogue.csv") == slurp(dir + "/catalogue.csv"));
}

TEST_CASE("catalogue extracts sequence weather files that re-ingest cleanly") {
  auto dir = fresh_dir("catalogue");
  CHECK(run({"catalogue", "--input", sample(), "--station-meta", station(), "--select",
             "high-radiation-breeze", "--out-dir", dir}) == 0);
  int found = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    auto name = e.path().filename().string();
    if (name.rfind("seq_high-radiation-breeze", 0) == 0) {
      ++found;
      auto parsed = ingest::parse_hourly_csv(e.path().string(), {});
      CHECK(parsed.diagnostics.empty());
      CHECK(parsed.records.size() % 24 == 0);
      CHECK(parsed.records.size() >= 24 * 5);
    }
  }
  CHECK(found >= 1);
  CHECK(run({"catalogue", "--input", sample(), "--station-meta", station(), "--select",
             "no-such-class", "--out-dir", fresh_dir("cat_none")}) == 1);
}

TEST_CASE("fit writes class models and the fits table") {
  auto dir = fresh_dir("fit");
  CHECK(run({"fit", "--input", sample(), "--station-meta", station(), "--season", "humid",
             "--out-dir", dir}) == 0);
  CHECK(fs::exists(dir + "/model_high-radiation-breeze.model"));
  auto fits = csv::read_file(dir + "/fits.csv");
  CHECK(!fits.rows.empty());
  int class_col = fits.column("class"), var_col = fits.column("variable");
  REQUIRE(class_col >= 0);
  bool has_wind_fit = false;
  for (const auto& r : fits.rows)
    if (r[static_cast<size_t>(class_col)] == "High radiation, breeze" &&
        r[static_cast<size_t>(var_col)] == "wind hourly (demodulated)")
      has_wind_fit = true;
  CHECK(has_wind_fit);
}

TEST_CASE("generate is byte-identical for a repeated seed") {
  auto models = fresh_dir("models");
  REQUIRE(run({"fit", "--input", sample(), "--station-meta", station(), "--season", "humid",
               "--out-dir", models}) == 0);
  auto dir1 = fresh_dir("gen1");
  auto dir2 = fresh_dir("gen2");
  auto gen = [&](const std::string& dir) {
    return run({"generate", "--class", "high-radiation-breeze", "--models-dir", models, "--days",
                "5", "--seed", "7", "--out-dir", dir});
  };
  REQUIRE(gen(dir1) == 0);
  REQUIRE(gen(dir2) == 0);
  std::string name = "generated_high-radiation-breeze_s7.csv";
  CHECK(slurp(dir1 + "/" + name) == slurp(dir2 + "/" + name));
  CHECK(!slurp(dir1 + "/" + name).empty());

  // a different seed produces different bytes
  auto dir3 = fresh_dir("gen3");
  REQUIRE(run({"generate", "--class", "high-radiation-breeze", "--models-dir", models, "--days",
               "5", "--seed", "8", "--out-dir", dir3}) == 0);
  CHECK(slurp(dir3 + "/generated_high-radiation-breeze_s8.csv") != slurp(dir1 + "/" + name));
}

TEST_CASE("simulate and report close the pipeline") {
  auto dir = fresh_dir("simreport");
  REQUIRE(run({"catalogue", "--input", sample(), "--station-meta", station(), "--select",
               "high-radiation-breeze", "--out-dir", dir}) == 0);
  std::string seq_csv;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename().string().rfind("seq_", 0) == 0) seq_csv = e.path().string();
  REQUIRE(!seq_csv.empty());

  REQUIRE(run({"simulate", "--building", "t3v", "--weather", seq_csv, "--station-meta", station(),
               "--hvac", "ideal", "--out-dir", dir}) == 0);
  std::string stem = fs::path(seq_csv).stem().string();
  std::string loads = dir + "/loads_" + stem + ".csv";
  CHECK(fs::exists(loads));
  CHECK(fs::exists(dir + "/daily_" + stem + ".csv"));

  // a second "sequence" from the same loads exercises multi-file reporting
  REQUIRE(run({"report", "--loads", loads, "--loads", loads, "--names", "A", "--names", "B",
               "--out-dir", dir}) == 0);
  auto caps = csv::read_file(dir + "/capacities.csv");
  REQUIRE(caps.rows.size() == 4);  // 2 sequences x MEAN/MAX
  int qty = caps.column("quantity"), sens = caps.column("sensible_kwh"),
      lat = caps.column("latent_kwh"), tot = caps.column("total_kwh");
  for (const auto& r : caps.rows) {
    double s = std::stod(r[static_cast<size_t>(sens)]);
    double l = std::stod(r[static_cast<size_t>(lat)]);
    double t = std::stod(r[static_cast<size_t>(tot)]);
    CHECK(t == doctest::Approx(s + l).epsilon(1e-6));
    CHECK(s >= 0);
    CHECK(l >= 0);
    (void)qty;
  }
  auto rep = csv::read_file(dir + "/report.csv");
  REQUIRE(rep.rows.size() == 2);
  int mt = rep.column("max_total_kwh");
  CHECK(std::stod(rep.rows[0][static_cast<size_t>(mt)]) >=
        std::stod(rep.rows[1][static_cast<size_t>(mt)]));
  int mean_tot = rep.column("mean_total_kwh");
  for (const auto& r : rep.rows)
    CHECK(std::stod(r[static_cast<size_t>(mt)]) >=
          std::stod(r[static_cast<size_t>(mean_tot)]) - 1e-9);

  // plot data sums back to the capacity table
  auto plot = csv::read_file(dir + "/plot_data.csv");
  REQUIRE(plot.rows.size() == caps.rows.size());
  for (size_t i = 0; i < plot.rows.size(); ++i) {
    double ps = std::stod(plot.rows[i][2]), pl = std::stod(plot.rows[i][3]);
    double cs = std::stod(caps.rows[i][static_cast<size_t>(sens)]);
    double cl = std::stod(caps.rows[i][static_cast<size_t>(lat)]);
    CHECK(ps == doctest::Approx(cs));
    CHECK(pl == doctest::Approx(cl));
  }
}

TEST_CASE("analyze subcommands produce their tables") {
  auto dir = fresh_dir("analyze");
  CHECK(run({"analyze", "pca", "--input", sample(), "--station-meta", station(), "--variable",
             "global", "--out-dir", dir}) == 0);
  CHECK(fs::exists(dir + "/pca_global.csv"));
  CHECK(run({"analyze", "coherence", "--input", sample(), "--station-meta", station(), "--x",
             "temp", "--y", "global", "--segment-len", "256", "--cutoff", "0.25", "--out-dir",
             dir}) == 0);
  auto coh = csv::read_file(dir + "/coherence_temp_global.csv");
  CHECK(coh.rows.size() == 128);
  for (const auto& r : coh.rows) {
    double c = std::stod(r[1]);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
  CHECK(run({"analyze", "regression", "--input", sample(), "--station-meta", station(), "--x",
             "clearness", "--y", "diffuse_fraction", "--out-dir", dir}) == 0);
  auto reg = csv::read_file(dir + "/regression_clearness_diffuse_fraction.csv");
  REQUIRE(reg.rows.size() == 1);
  CHECK(std::stod(reg.rows[0][2]) < 0);  // cloudier hours have a higher diffuse fraction
}

TEST_CASE("environment variable supplies the default output directory") {
  auto dir = fresh_dir("envdir");
  setenv("WEATHERSEQ_OUT_DIR", dir.c_str(), 1);
  CHECK(run({"ingest", "--input", sample(), "--station-meta", station()}) == 0);
  unsetenv("WEATHERSEQ_OUT_DIR");
  CHECK(fs::exists(dir + "/indicators.csv"));
}
