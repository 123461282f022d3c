#pragma once

// Moist-air property relations used by the moisture balance and the latent
// load accounting. Saturation pressure is the Magnus form with the
// Alduchov-Eskridge coefficients.

#include <cmath>

#include "weatherseq/core.hpp"

namespace wseq::psychro {

constexpr double kStandardPressurePa = 101325.0;
constexpr double kLatentHeatJPerKg = 2.45e6;  // of vaporization near 25 C

// Saturation vapor pressure over liquid water, Pa. Valid -40..60 C.
inline double saturation_pressure_pa(double temp_c) {
  if (temp_c < -40 || temp_c > 60) throw error("temperature outside [-40,60] C");
  return 610.94 * std::exp(17.625 * temp_c / (temp_c + 243.04));
}

// Humidity ratio w (kg water / kg dry air) from dry bulb, RH and pressure.
inline double humidity_ratio(double temp_c, double rh_pct, double pressure_pa = kStandardPressurePa) {
  double pw = rh_pct / 100.0 * saturation_pressure_pa(temp_c);
  if (pw >= pressure_pa) throw error("vapor pressure exceeds total pressure");
  return 0.622 * pw / (pressure_pa - pw);
}

inline double saturation_humidity_ratio(double temp_c, double pressure_pa = kStandardPressurePa) {
  return humidity_ratio(temp_c, 100.0, pressure_pa);
}

// Relative humidity (%) back from humidity ratio, clamped to [0,100].
inline double relative_humidity_pct(double temp_c, double humidity_ratio_kgkg,
                                    double pressure_pa = kStandardPressurePa) {
  double pw = pressure_pa * humidity_ratio_kgkg / (0.622 + humidity_ratio_kgkg);
  double rh = 100.0 * pw / saturation_pressure_pa(temp_c);
  return std::clamp(rh, 0.0, 100.0);
}

// Wet-bulb temperature estimate, Stull (2011) regression. Adequate as the
// indoor coil-condition proxy of the performance map; RH in [5,99].
inline double wet_bulb_stull_c(double temp_c, double rh_pct) {
  double rh = std::clamp(rh_pct, 5.0, 99.0);
  return temp_c * std::atan(0.151977 * std::sqrt(rh + 8.313659)) + std::atan(temp_c + rh) -
         std::atan(rh - 1.676331) + 0.00391838 * std::pow(rh, 1.5) * std::atan(0.023101 * rh) -
         4.686035;
}

}  // namespace wseq::psychro
