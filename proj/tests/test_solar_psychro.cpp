#include <doctest.h>

#include "support/oracles.hpp"
#include "weatherseq/psychro.hpp"
#include "weatherseq/solar.hpp"

using namespace wseq;

TEST_CASE("solar noon altitude at equinox is 90 - |latitude|") {
  // around the March equinox the declination crosses zero
  double best = 1e9;
  for (int day = 19; day <= 23; ++day) {
    auto p = solar::sun_position(-21.0, 55.5, Date{1994, 3, day}, 12.0 - 55.5 / 15.0 + 12.0);
    (void)p;
  }
  // search the true solar noon hour instead of guessing the clock offset
  double max_alt = -90;
  for (double h = 10; h <= 14; h += 0.01) {
    auto p = solar::sun_position(-21.0, 55.5, Date{1994, 3, 21}, h);
    max_alt = std::max(max_alt, p.altitude_deg);
  }
  best = std::abs(max_alt - 69.0);
  CHECK(best < 1.0);
}

TEST_CASE("sun below horizon gives zero extraterrestrial irradiance") {
  auto p = solar::sun_position(-21.0, 55.5, Date{1994, 1, 15}, 0.5);  // local midnight
  CHECK(p.altitude_deg < 0);
  CHECK(p.extraterrestrial_w == 0.0);
}

TEST_CASE("daily extraterrestrial irradiation matches fine quadrature") {
  for (const Date& d : {Date{1994, 1, 15}, Date{1994, 6, 21}, Date{1994, 9, 1}}) {
    double closed = solar::extraterrestrial_daily_whm2(-21.0, d);
    double quad = oracle::quadrature_extraterrestrial_daily(-21.0, d);
    CHECK(std::abs(closed - quad) / quad < 0.005);
  }
}

TEST_CASE("horizontal surface receives exactly the global irradiance") {
  auto sun = solar::sun_position(-21.0, 55.5, Date{1994, 1, 15}, 12.0);
  REQUIRE(sun.altitude_deg > 10);
  double inc = solar::irradiance_on_surface(800, 200, sun, 123.0, 0.0);
  CHECK(inc == doctest::Approx(800).epsilon(1e-12));
}

TEST_CASE("vertical surface facing away from the sun, no diffuse, gets nothing") {
  auto sun = solar::sun_position(-21.0, 55.5, Date{1994, 1, 15}, 9.0);  // morning, sun in the east
  REQUIRE(sun.altitude_deg > 5);
  double away = wrap_deg(sun.azimuth_deg + 180.0);
  double inc = solar::irradiance_on_surface(500, 0, sun, away, 90.0, 0.0);
  CHECK(inc == doctest::Approx(0.0));
}

TEST_CASE("east and west walls see mirrored daily profiles on a symmetric day") {
  // symmetric synthetic day: beam profile mirrored around solar noon
  StationMeta st{-21.0, 55.5 , 8};
  Date d{1994, 3, 21};
  // find the solar-noon clock hour
  double noon = 12, best_alt = -90;
  for (double h = 10; h <= 14; h += 0.001) {
    auto p = solar::sun_position(st.latitude_deg, st.longitude_deg, d, h);
    if (p.altitude_deg > best_alt) {
      best_alt = p.altitude_deg;
      noon = h;
    }
  }
  double east_total = 0, west_total = 0;
  for (double off = -5.0; off <= 5.0; off += 0.25) {
    auto sun = solar::sun_position(st.latitude_deg, st.longitude_deg, d, noon + off);
    if (sun.altitude_deg <= 2) continue;
    double g = 700 * std::cos(off / 5.0 * wseq::detail::kPi / 2);
    double diff = 0.2 * g;
    east_total += solar::irradiance_on_surface(g, diff, sun, 90.0, 90.0);
    west_total += solar::irradiance_on_surface(g, diff, sun, 270.0, 90.0);
  }
  CHECK(east_total == doctest::Approx(west_total).epsilon(0.02));
  CHECK(east_total > 0);
}

TEST_CASE("saturation pressure at the ice point") {
  CHECK(psychro::saturation_pressure_pa(0.0) == doctest::Approx(611).epsilon(0.002));
}

TEST_CASE("humidity ratio basics") {
  CHECK(psychro::humidity_ratio(25.0, 0.0) == 0.0);
  // frozen from the Magnus-form evaluation; independent psychrometric charts
  // put saturation w at 30 C near 0.0273 kg/kg
  CHECK(psychro::humidity_ratio(30.0, 100.0) == doctest::Approx(0.027139).epsilon(1e-3));
  CHECK(psychro::humidity_ratio(30.0, 100.0) == doctest::Approx(0.0273).epsilon(0.01));
  CHECK_THROWS_AS(psychro::humidity_ratio(30.0, 100.0, 3000.0), error);
  CHECK_THROWS_AS(psychro::saturation_pressure_pa(75.0), error);
}

TEST_CASE("relative humidity inverts humidity ratio") {
  for (double rh : {20.0, 55.0, 90.0}) {
    double w = psychro::humidity_ratio(27.0, rh);
    CHECK(psychro::relative_humidity_pct(27.0, w) == doctest::Approx(rh).epsilon(1e-9));
  }
}
