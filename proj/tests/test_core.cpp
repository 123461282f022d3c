#include <doctest.h>

#include "weatherseq/config.hpp"
#include "weatherseq/core.hpp"

using namespace wseq;

TEST_CASE("date arithmetic round trips") {
  Date d{1994, 2, 27};
  CHECK(civil_from_days(day_number(d)) == d);
  CHECK(add_days(d, 1) == Date{1994, 2, 28});
  CHECK(add_days(d, 2) == Date{1994, 3, 1});
  CHECK(add_days(Date{1996, 2, 28}, 1) == Date{1996, 2, 29});  // leap
  CHECK(day_of_year(Date{1994, 1, 1}) == 1);
  CHECK(day_of_year(Date{1994, 12, 31}) == 365);
}

TEST_CASE("timestamp parsing") {
  auto t = parse_timestamp("1994-01-03T05:00");
  REQUIRE(t.has_value());
  CHECK(t->date == Date{1994, 1, 3});
  CHECK(t->hour == 5);
  CHECK(format_timestamp(*t) == "1994-01-03T05:00");

  CHECK_FALSE(parse_timestamp("1994-01-03").has_value());
  CHECK_FALSE(parse_timestamp("1994-01-03T24:00").has_value());
  CHECK_FALSE(parse_timestamp("1994-01-03T05:30").has_value());
  CHECK_FALSE(parse_timestamp("1994-02-30T05:00").has_value());
  CHECK_FALSE(parse_timestamp("garbage").has_value());
}

TEST_CASE("circular mean straddles north") {
  CHECK(circular_mean_deg({350.0, 10.0}) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(circular_mean_deg({90.0, 90.0}) == doctest::Approx(90.0));
}

TEST_CASE("circular mean rotation equivariance") {
  std::vector<double> dirs = {12.0, 275.0, 301.0, 44.0, 190.5, 358.0};
  double base = circular_mean_deg(dirs);
  for (double delta : {37.0, 123.4, 359.0}) {
    std::vector<double> rotated;
    for (double d : dirs) rotated.push_back(wrap_deg(d + delta));
    double got = circular_mean_deg(rotated);
    double diff = std::fmod(got - base - delta + 720.0, 360.0);
    if (diff > 180) diff -= 360;
    CHECK(std::abs(diff) < 1e-9);
  }
}

TEST_CASE("seasons split november-april vs may-october") {
  CHECK(season_of(Date{1994, 11, 1}) == Season::humid);
  CHECK(season_of(Date{1994, 4, 30}) == Season::humid);
  CHECK(season_of(Date{1994, 5, 1}) == Season::fresh);
  CHECK(season_of(Date{1994, 10, 31}) == Season::fresh);
}

TEST_CASE("slugify") {
  CHECK(slugify("High radiation, breeze") == "high-radiation-breeze");
  CHECK(slugify("Average radiation, medium wind") == "average-radiation-medium-wind");
  CHECK(slugify("  Odd--name!! ") == "odd-name");
}

TEST_CASE("config parser handles blocks, quotes and comments") {
  auto nodes = config::parse(R"(
# a comment
scheme demo
indicator global_sum {
  bin 600 2300 "very low radiation"
  bin 2300 4000 low  # trailing comment
}
)");
  REQUIRE(nodes.size() == 2);
  CHECK(nodes[0].name == "scheme");
  CHECK(nodes[0].arg_str(0) == "demo");
  REQUIRE(nodes[1].children.size() == 2);
  CHECK(nodes[1].children[0].arg_str(2) == "very low radiation");
  CHECK(nodes[1].children[1].arg_num(1) == doctest::Approx(4000));

  // round trip
  auto text = config::to_string(nodes);
  auto again = config::parse(text);
  CHECK(config::to_string(again) == text);

  CHECK_THROWS_AS(config::parse("a { b"), error);
  CHECK_THROWS_AS(config::parse("a \"unterminated"), error);
}
