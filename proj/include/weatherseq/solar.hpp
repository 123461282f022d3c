#pragma once

// Solar geometry: declination/hour-angle sun position, extraterrestrial
// horizontal irradiance, daily extraterrestrial irradiation, and incident
// irradiance on tilted surfaces under an isotropic sky.
//
// Day-angle series (declination, eccentricity, equation of time) follow
// Spencer (1971) as tabulated in Iqbal, "An Introduction to Solar Radiation".

#include <cmath>

#include "weatherseq/core.hpp"

namespace wseq::solar {

constexpr double kSolarConstant = 1367.0;  // W/m2

struct SunPosition {
  double altitude_deg = 0;         // above horizon, negative when set
  double azimuth_deg = 0;          // from North, clockwise, [0,360)
  double extraterrestrial_w = 0;   // horizontal, floored at 0
};

inline double day_angle(int doy) { return 2.0 * detail::kPi * (doy - 1) / 365.0; }

inline double declination_rad(int doy) {
  double g = day_angle(doy);
  return 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
         0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
         0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
}

inline double eccentricity_factor(int doy) {
  double g = day_angle(doy);
  return 1.000110 + 0.034221 * std::cos(g) + 0.001280 * std::sin(g) +
         0.000719 * std::cos(2 * g) + 0.000077 * std::sin(2 * g);
}

// Equation of time in minutes.
inline double equation_of_time_min(int doy) {
  double g = day_angle(doy);
  return 229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                   0.014615 * std::cos(2 * g) - 0.04089 * std::sin(2 * g));
}

// Timestamps are local standard time; the standard meridian is taken as the
// nearest 15-degree multiple of the station longitude.
inline double standard_meridian_deg(double longitude_deg) {
  return 15.0 * std::round(longitude_deg / 15.0);
}

// Sun position at fractional local-standard hour (e.g. 12.5 = 12:30).
inline SunPosition sun_position(double latitude_deg, double longitude_deg, const Date& date,
                                double local_hour) {
  if (std::abs(latitude_deg) > 90) throw error("latitude outside [-90,90]");
  int doy = day_of_year(date);
  double decl = declination_rad(doy);
  double solar_hour = local_hour + (longitude_deg - standard_meridian_deg(longitude_deg)) / 15.0 +
                      equation_of_time_min(doy) / 60.0;
  double hour_angle = deg2rad(15.0 * (solar_hour - 12.0));
  double lat = deg2rad(latitude_deg);

  double sin_alt = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  sin_alt = std::clamp(sin_alt, -1.0, 1.0);
  double alt = std::asin(sin_alt);

  // azimuth from North, clockwise
  double cos_alt = std::cos(alt);
  double az;
  if (cos_alt < 1e-9) {
    az = 0.0;  // sun at zenith, azimuth undefined
  } else {
    double sin_az = std::cos(decl) * std::sin(hour_angle) / cos_alt;
    double cos_az = (std::sin(decl) - std::sin(lat) * sin_alt) / (std::cos(lat) * cos_alt);
    az = wrap_deg(rad2deg(std::atan2(sin_az, cos_az)));
  }

  SunPosition p;
  p.altitude_deg = rad2deg(alt);
  p.azimuth_deg = az;
  p.extraterrestrial_w = kSolarConstant * eccentricity_factor(doy) * std::max(0.0, sin_alt);
  return p;
}

inline SunPosition sun_position(const StationMeta& st, const DateTime& t, double minute_frac = 0.5) {
  return sun_position(st.latitude_deg, st.longitude_deg, t.date, t.hour + minute_frac);
}

// Extraterrestrial horizontal irradiation for one day, Wh/m2 (closed form).
inline double extraterrestrial_daily_whm2(double latitude_deg, const Date& date) {
  int doy = day_of_year(date);
  double decl = declination_rad(doy);
  double lat = deg2rad(latitude_deg);
  double cos_ws = -std::tan(lat) * std::tan(decl);
  double ws;  // sunset hour angle
  if (cos_ws >= 1)
    return 0.0;  // polar night
  else if (cos_ws <= -1)
    ws = detail::kPi;  // midnight sun
  else
    ws = std::acos(cos_ws);
  double h0 = (24.0 / detail::kPi) * kSolarConstant * eccentricity_factor(doy) *
              (std::cos(lat) * std::cos(decl) * std::sin(ws) + ws * std::sin(lat) * std::sin(decl));
  return std::max(0.0, h0);
}

// Hourly extraterrestrial horizontal energy, Wh/m2, taken at mid-hour.
inline double extraterrestrial_hourly_whm2(const StationMeta& st, const Date& date, int hour) {
  return sun_position(st.latitude_deg, st.longitude_deg, date, hour + 0.5).extraterrestrial_w;
}

// Incident irradiance on a tilted surface, isotropic sky, ground albedo 0.2.
// Beam is dropped below 2 degrees of solar altitude to avoid the horizon
// singularity of the 1/sin(altitude) conversion.
inline double irradiance_on_surface(double global_whm2, double diffuse_whm2, const SunPosition& sun,
                                    double surface_azimuth_deg, double tilt_deg,
                                    double albedo = 0.2) {
  if (diffuse_whm2 > global_whm2) throw error("diffuse exceeds global");
  double tilt = deg2rad(tilt_deg);
  double diffuse_t = diffuse_whm2 * (1.0 + std::cos(tilt)) / 2.0;
  double ground_t = global_whm2 * albedo * (1.0 - std::cos(tilt)) / 2.0;
  double beam_t = 0;
  if (sun.altitude_deg > 2.0 && global_whm2 > diffuse_whm2) {
    double alt = deg2rad(sun.altitude_deg);
    double beam_normal = (global_whm2 - diffuse_whm2) / std::sin(alt);
    double cos_inc = std::cos(alt) * std::sin(tilt) *
                         std::cos(deg2rad(sun.azimuth_deg - surface_azimuth_deg)) +
                     std::sin(alt) * std::cos(tilt);
    beam_t = beam_normal * std::max(0.0, cos_inc);
  }
  return beam_t + diffuse_t + ground_t;
}

}  // namespace wseq::solar
