#pragma once

// Multizone thermal model: nodal finite-difference discretization of the
// building into the linear system [C] dT/dt = [A] T + B, implicit-Euler time
// stepping, a well-mixed humidity-ratio balance per zone, and the hourly
// simulation loop with the three HVAC models.
//
// Conventions: interior film 3.0 W/m2K on opaque faces, exterior film
// 17 + 3.8 * wind W/m2K, glazing as a pure U*A resistance, absorbed solar
// through the sol-air temperature on exterior faces, transmitted solar
// deposited on the zone air node.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weatherseq/building.hpp"
#include "weatherseq/core.hpp"
#include "weatherseq/hvac.hpp"
#include "weatherseq/linalg.hpp"
#include "weatherseq/psychro.hpp"
#include "weatherseq/solar.hpp"

namespace wseq::thermal {

constexpr double kAirDensity = 1.2;          // kg/m3
constexpr double kAirSpecificHeat = 1006.0;  // J/kgK
constexpr double kInteriorFilm = 3.0;        // W/m2K
constexpr double kExteriorFilmBase = 17.0;   // W/m2K at calm air
constexpr double kExteriorFilmWind = 3.8;    // W/m2K per m/s

inline double exterior_film(double wind_ms) {
  return kExteriorFilmBase + kExteriorFilmWind * std::max(0.0, wind_ms);
}

struct ThermalSystem {
  std::vector<double> capacitance;     // J/K, diagonal of [C]
  std::vector<std::string> node_name;  // zone name or component node label
  std::map<std::string, int> zone_node;

  struct Edge {  // fixed internal conductance
    int i = 0, j = 0;
    double k = 0;  // W/K
  };
  std::vector<Edge> edges;

  struct ExteriorCoupling {
    int node = 0;
    double series_resistance = 0;  // K/W behind the film (half segment of the face layer)
    double film_area_m2 = 0;       // > 0: wind-dependent film; 0: fixed conductance
    double fixed_k = 0;            // W/K when film_area_m2 == 0
    double absorptance = 0;        // sol-air solar pickup on opaque faces
    double azimuth_deg = 0, tilt_deg = 90;
    double effective_k(double wind_ms) const {
      if (film_area_m2 <= 0) return fixed_k;
      double r = 1.0 / (exterior_film(wind_ms) * film_area_m2) + series_resistance;
      return 1.0 / r;
    }
  };
  std::vector<ExteriorCoupling> exterior;

  struct Transmission {  // transmitted solar into a zone
    int zone = 0;
    double tau_area_m2 = 0;
    double azimuth_deg = 0, tilt_deg = 90;
  };
  std::vector<Transmission> transmissions;

  linalg::Matrix reference_a;  // [A] with calm-air films, for inspection and tests

  int n() const { return static_cast<int>(capacitance.size()); }
};

// ---------------------------------------------------------------------------
// assembly

inline ThermalSystem assemble_system(const building::BuildingModel& b, int nodes_per_layer = 3) {
  b.check();
  if (nodes_per_layer < 1) throw error("assemble_system: nodes_per_layer must be >= 1");

  ThermalSystem sys;
  for (const auto& z : b.zones) {
    sys.zone_node[z.name] = sys.n();
    sys.capacitance.push_back(kAirDensity * kAirSpecificHeat * z.volume_m3);
    sys.node_name.push_back(z.name);
  }

  auto add_edge = [&](int i, int j, double k) { sys.edges.push_back({i, j, k}); };

  for (const auto& iz : b.interzones) {
    bool a_ext = iz.zone_a == building::kExterior;
    bool b_ext = iz.zone_b == building::kExterior;
    for (const auto& cname : iz.components) {
      if (const auto* g = b.find_glazing(cname)) {
        double k = g->u_value_w_m2k * g->area_m2;
        if (a_ext || b_ext) {
          int zone = sys.zone_node.at(a_ext ? iz.zone_b : iz.zone_a);
          sys.exterior.push_back({zone, 0, 0, k, 0, g->azimuth_deg, g->tilt_deg});
          sys.transmissions.push_back({zone,
                                       g->solar_transmittance * g->shading_coefficient * g->area_m2,
                                       g->azimuth_deg, g->tilt_deg});
        } else {
          add_edge(sys.zone_node.at(iz.zone_a), sys.zone_node.at(iz.zone_b), k);
        }
        continue;
      }
      const auto* c = b.find_opaque(cname);
      // wall node chain, ordered from side a to side b
      std::vector<int> nodes;
      std::vector<double> seg_resistance;  // between consecutive nodes of one layer
      for (const auto& layer : c->layers) {
        double r_seg = layer.thickness_m / (static_cast<double>(nodes_per_layer) *
                                            layer.conductivity_w_mk * c->area_m2);
        double cap = layer.density_kg_m3 * layer.specific_heat_j_kgk * layer.thickness_m *
                     c->area_m2 / static_cast<double>(nodes_per_layer);
        for (int i = 0; i < nodes_per_layer; ++i) {
          nodes.push_back(sys.n());
          seg_resistance.push_back(r_seg);
          sys.capacitance.push_back(cap);
          sys.node_name.push_back(c->name + "#" + std::to_string(nodes.size()));
        }
      }
      for (size_t i = 0; i + 1 < nodes.size(); ++i)
        add_edge(nodes[i], nodes[i + 1], 1.0 / (seg_resistance[i] / 2 + seg_resistance[i + 1] / 2));

      auto attach = [&](const std::string& side, int face_node, double half_r) {
        if (side == building::kExterior) {
          sys.exterior.push_back(
              {face_node, half_r, c->area_m2, 0, c->absorptance, c->azimuth_deg, c->tilt_deg});
        } else {
          double k = 1.0 / (1.0 / (kInteriorFilm * c->area_m2) + half_r);
          add_edge(sys.zone_node.at(side), face_node, k);
        }
      };
      attach(iz.zone_a, nodes.front(), seg_resistance.front() / 2);
      attach(iz.zone_b, nodes.back(), seg_resistance.back() / 2);
    }
  }

  // reference [A] at calm air for inspection, tests, and steady-state checks
  sys.reference_a = linalg::Matrix(static_cast<size_t>(sys.n()), static_cast<size_t>(sys.n()));
  for (const auto& e : sys.edges) {
    sys.reference_a(static_cast<size_t>(e.i), static_cast<size_t>(e.i)) -= e.k;
    sys.reference_a(static_cast<size_t>(e.j), static_cast<size_t>(e.j)) -= e.k;
    sys.reference_a(static_cast<size_t>(e.i), static_cast<size_t>(e.j)) += e.k;
    sys.reference_a(static_cast<size_t>(e.j), static_cast<size_t>(e.i)) += e.k;
  }
  for (const auto& x : sys.exterior)
    sys.reference_a(static_cast<size_t>(x.node), static_cast<size_t>(x.node)) -= x.effective_k(0);
  return sys;
}

// ---------------------------------------------------------------------------
// forcing and stepping

struct AssembledForcing {
  linalg::Matrix a;        // [A] at this hour's wind
  std::vector<double> b;   // W
};

struct BoundaryHour {
  double exterior_t_c = 25;
  double wind_ms = 0;
  double global_whm2 = 0;
  double diffuse_whm2 = 0;
  solar::SunPosition sun;
  std::vector<double> zone_gain_w;        // per zone, internal sensible
  std::vector<double> zone_extraction_w;  // per zone, HVAC cooling (positive = heat removed)
};

inline double incident_on(const BoundaryHour& bc, double azimuth_deg, double tilt_deg) {
  if (bc.global_whm2 <= 0) return 0;
  return solar::irradiance_on_surface(bc.global_whm2, bc.diffuse_whm2, bc.sun, azimuth_deg,
                                      tilt_deg);
}

inline AssembledForcing assemble_forcing(const ThermalSystem& sys, const BoundaryHour& bc) {
  AssembledForcing f;
  f.a = linalg::Matrix(static_cast<size_t>(sys.n()), static_cast<size_t>(sys.n()));
  f.b.assign(static_cast<size_t>(sys.n()), 0.0);
  for (const auto& e : sys.edges) {
    f.a(static_cast<size_t>(e.i), static_cast<size_t>(e.i)) -= e.k;
    f.a(static_cast<size_t>(e.j), static_cast<size_t>(e.j)) -= e.k;
    f.a(static_cast<size_t>(e.i), static_cast<size_t>(e.j)) += e.k;
    f.a(static_cast<size_t>(e.j), static_cast<size_t>(e.i)) += e.k;
  }
  for (const auto& x : sys.exterior) {
    double k = x.effective_k(bc.wind_ms);
    double boundary_t = bc.exterior_t_c;
    if (x.absorptance > 0 && x.film_area_m2 > 0) {
      double incident = incident_on(bc, x.azimuth_deg, x.tilt_deg);
      boundary_t += x.absorptance * incident / exterior_film(bc.wind_ms);  // sol-air
    }
    f.a(static_cast<size_t>(x.node), static_cast<size_t>(x.node)) -= k;
    f.b[static_cast<size_t>(x.node)] += k * boundary_t;
  }
  for (const auto& tr : sys.transmissions)
    f.b[static_cast<size_t>(tr.zone)] += tr.tau_area_m2 * incident_on(bc, tr.azimuth_deg, tr.tilt_deg);
  for (size_t z = 0; z < bc.zone_gain_w.size(); ++z) f.b[z] += bc.zone_gain_w[z];
  for (size_t z = 0; z < bc.zone_extraction_w.size(); ++z) f.b[z] -= bc.zone_extraction_w[z];
  return f;
}

// One implicit (backward Euler) step: ([C]/dt - [A]) T' = [C]/dt T + B.
inline std::vector<double> step_state(const ThermalSystem& sys, const std::vector<double>& t,
                                      const AssembledForcing& f, double dt_s) {
  if (!(dt_s > 0)) throw error("step_state: dt must be positive");
  const size_t n = static_cast<size_t>(sys.n());
  linalg::Matrix m(n, n);
  std::vector<double> rhs(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) m(i, j) = -f.a(i, j);
    m(i, i) += sys.capacitance[i] / dt_s;
    rhs[i] = sys.capacitance[i] / dt_s * t[i] + f.b[i];
  }
  return linalg::solve(m, rhs);
}

// Same step with selected nodes pinned to fixed temperatures. Returns the
// next state and the heat extraction (positive = cooling) that holds each
// pinned node, from its balance residual.
inline std::pair<std::vector<double>, std::map<int, double>> step_state_pinned(
    const ThermalSystem& sys, const std::vector<double>& t, const AssembledForcing& f, double dt_s,
    const std::map<int, double>& pins) {
  const size_t n = static_cast<size_t>(sys.n());
  linalg::Matrix m(n, n);
  std::vector<double> rhs(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) m(i, j) = -f.a(i, j);
    m(i, i) += sys.capacitance[i] / dt_s;
    rhs[i] = sys.capacitance[i] / dt_s * t[i] + f.b[i];
  }
  for (const auto& [node, temp] : pins) {
    for (size_t j = 0; j < n; ++j) m(static_cast<size_t>(node), j) = 0.0;
    m(static_cast<size_t>(node), static_cast<size_t>(node)) = 1.0;
    rhs[static_cast<size_t>(node)] = temp;
  }
  auto next = linalg::solve(m, rhs);
  std::map<int, double> extraction;
  for (const auto& [node, temp] : pins) {
    double row = 0;
    for (size_t j = 0; j < n; ++j) row += f.a(static_cast<size_t>(node), j) * next[j];
    double q = sys.capacitance[static_cast<size_t>(node)] * (temp - t[static_cast<size_t>(node)]) / dt_s -
               row - f.b[static_cast<size_t>(node)];
    extraction[node] = -q;  // q < 0 means heat removal
  }
  return {std::move(next), std::move(extraction)};
}

// Steady state of [A] T + B = 0.
inline std::vector<double> steady_state(const AssembledForcing& f) {
  const size_t n = f.b.size();
  linalg::Matrix m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m(i, j) = -f.a(i, j);
  return linalg::solve(m, f.b);
}

// ---------------------------------------------------------------------------
// zone moisture balance

struct MoistureStep {
  double humidity_ratio = 0;
  double extraction_kgps = 0;  // moisture removed by HVAC
};

// Well-mixed implicit balance; extraction is capped so the zone never dries
// below w_floor, and the result never exceeds saturation at the zone
// temperature (condensation).
inline MoistureStep step_moisture(double w, double zone_volume_m3, double ach, double w_ext,
                                  double gain_kgps, double requested_extraction_kgps, double dt_s,
                                  double zone_t_c, double w_floor = 1e-4) {
  double m_air = kAirDensity * zone_volume_m3;
  double m_inf = kAirDensity * zone_volume_m3 * ach / 3600.0;
  auto advance = [&](double extraction) {
    return (m_air * w / dt_s + m_inf * w_ext + gain_kgps - extraction) / (m_air / dt_s + m_inf);
  };
  MoistureStep out;
  double e = std::max(0.0, requested_extraction_kgps);
  double w_next = advance(e);
  if (w_next < w_floor) {
    // cap extraction at the amount that lands exactly on the floor
    e = std::max(0.0, m_air * (w - w_floor) / dt_s + m_inf * (w_ext - w_floor) + gain_kgps);
    w_next = advance(e);
  }
  double w_sat = psychro::saturation_humidity_ratio(std::clamp(zone_t_c, -40.0, 60.0));
  out.humidity_ratio = std::min(w_next, w_sat);
  out.extraction_kgps = e;
  return out;
}

// Ideal latent control: extraction that pins the zone at w_set, or zero if
// the free balance stays below the setpoint.
inline MoistureStep step_moisture_ideal(double w, double zone_volume_m3, double ach, double w_ext,
                                        double gain_kgps, double w_set, double dt_s,
                                        double zone_t_c) {
  double m_air = kAirDensity * zone_volume_m3;
  double m_inf = kAirDensity * zone_volume_m3 * ach / 3600.0;
  double w_free = (m_air * w / dt_s + m_inf * w_ext + gain_kgps) / (m_air / dt_s + m_inf);
  if (w_free <= w_set)
    return step_moisture(w, zone_volume_m3, ach, w_ext, gain_kgps, 0.0, dt_s, zone_t_c);
  double e = m_air * (w - w_set) / dt_s + m_inf * (w_ext - w_set) + gain_kgps;
  MoistureStep out;
  out.humidity_ratio = w_set;
  out.extraction_kgps = std::max(0.0, e);
  return out;
}

// ---------------------------------------------------------------------------
// simulation

struct SimOptions {
  double dt_s = 3600;
  int nodes_per_layer = 3;
  int hvac_substeps_per_hour = 60;  // one-minute cycling resolution
};

struct EnergyAudit {
  double stored_delta_j = 0;     // sum C (T_end - T_start)
  double net_input_j = 0;        // boundary + solar + gains - extraction, implicit-consistent
  double hvac_sensible_j = 0;    // total delivered sensible cooling
  double hvac_latent_j = 0;
};

struct SimulationResult {
  std::vector<hvac::HourlyLoadRow> rows;
  EnergyAudit audit;
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

inline void account_step(const AssembledForcing& f, const std::vector<double>& t_next, double dt_s,
                         EnergyAudit* audit) {
  // B already carries boundary, solar, gains and extraction; internal edges
  // cancel pairwise, so the net input is  sum_i (A T' + B)_i * dt.
  double sum = 0;
  for (size_t i = 0; i < f.b.size(); ++i) {
    double row = f.b[i];
    for (size_t j = 0; j < f.b.size(); ++j) row += f.a(i, j) * t_next[j];
    sum += row;
  }
  audit->net_input_j += sum * dt_s;
}

}  // namespace detail

inline SimulationResult simulate_building(const building::BuildingModel& b,
                                          const std::vector<DayProfile>& weather,
                                          const std::optional<hvac::HvacSpec>& spec,
                                          const StationMeta& station, const SimOptions& opt = {}) {
  if (weather.empty()) throw error("simulate_building: no weather days");
  for (size_t i = 0; i < weather.size(); ++i) {
    if (!weather[i].valid)
      throw error("simulate_building: invalid weather day " + format_date(weather[i].date));
    if (i > 0 && day_number(weather[i].date) != day_number(weather[i - 1].date) + 1)
      throw error("simulate_building: weather days not contiguous at " +
                  format_date(weather[i].date));
  }
  if (spec) spec->check();

  ThermalSystem sys = assemble_system(b, opt.nodes_per_layer);
  const size_t nz = b.zones.size();

  SimulationResult res;
  const HourlyRecord& first = weather.front().hours.front();
  std::vector<double> t(static_cast<size_t>(sys.n()), first.temp_c);
  std::vector<double> w(nz, psychro::humidity_ratio(first.temp_c, first.rh_pct));
  std::vector<double> t_start = t;

  std::vector<hvac::ThermostatState> thermostats(nz);
  double w_set = spec ? spec->humidity_ratio_setpoint() : 0.0;

  for (const auto& day : weather) {
    for (int hour = 0; hour < 24; ++hour) {
      const HourlyRecord& rec = day.hours[static_cast<size_t>(hour)];
      BoundaryHour bc;
      bc.exterior_t_c = rec.temp_c;
      bc.wind_ms = rec.wind_ms;
      bc.global_whm2 = rec.global_whm2;
      bc.diffuse_whm2 = rec.diffuse_whm2;
      bc.sun = solar::sun_position(station, rec.timestamp);
      bc.zone_gain_w.assign(nz, 0.0);
      bc.zone_extraction_w.assign(nz, 0.0);
      for (size_t z = 0; z < nz; ++z)
        bc.zone_gain_w[z] = b.zones[z].sensible_gain_w[static_cast<size_t>(hour)];

      double w_ext = psychro::humidity_ratio(rec.temp_c, rec.rh_pct);
      std::vector<double> sens_energy_j(nz, 0.0), lat_energy_j(nz, 0.0);
      AssembledForcing f = assemble_forcing(sys, bc);

      bool hvac_active = spec && spec->active_at(hour);
      if (!spec || !hvac_active) {
        // free floating hour
        auto t_next = step_state(sys, t, f, opt.dt_s);
        detail::account_step(f, t_next, opt.dt_s, &res.audit);
        t = std::move(t_next);
        for (size_t z = 0; z < nz; ++z) {
          auto ms = step_moisture(w[z], b.zones[z].volume_m3, b.zones[z].infiltration_ach, w_ext,
                                  b.zones[z].moisture_gain_kgph[static_cast<size_t>(hour)] / 3600.0,
                                  0.0, opt.dt_s, t[z]);
          w[z] = ms.humidity_ratio;
        }
        if (spec)
          for (auto& th : thermostats) th.since_switch_s += opt.dt_s;
      } else if (spec->kind == hvac::ModelKind::ideal) {
        // active set: pin every zone whose free float exceeds the setpoint and
        // whose pinned balance still calls for cooling
        std::map<int, double> pins;
        std::vector<double> t_next;
        std::map<int, double> extraction;
        for (int pass = 0; pass < static_cast<int>(nz) + 2; ++pass) {
          auto [next, extr] = step_state_pinned(sys, t, f, opt.dt_s, pins);
          bool changed = false;
          for (size_t z = 0; z < nz; ++z) {
            int node = static_cast<int>(z);
            if (!pins.count(node) && next[z] > spec->cooling_setpoint_c + 1e-12) {
              pins[node] = spec->cooling_setpoint_c;
              changed = true;
            } else if (pins.count(node) && extr.at(node) < 0) {
              pins.erase(node);  // holding the setpoint would need heating
              changed = true;
            }
          }
          if (!changed) {
            t_next = std::move(next);
            extraction = std::move(extr);
            break;
          }
          if (pass == static_cast<int>(nz) + 1) {
            t_next = std::move(next);
            extraction = std::move(extr);
          }
        }
        detail::account_step(f, t_next, opt.dt_s, &res.audit);
        // extraction enters the balance through the pinned rows; fold it into
        // the audit's input side
        for (const auto& [node, q] : extraction) res.audit.net_input_j -= q * opt.dt_s;
        t = std::move(t_next);
        for (size_t z = 0; z < nz; ++z) {
          double q = 0;
          auto it = extraction.find(static_cast<int>(z));
          if (it != extraction.end()) q = std::max(0.0, it->second);
          sens_energy_j[z] += q * opt.dt_s;
          auto ms = step_moisture_ideal(
              w[z], b.zones[z].volume_m3, b.zones[z].infiltration_ach, w_ext,
              b.zones[z].moisture_gain_kgph[static_cast<size_t>(hour)] / 3600.0, w_set, opt.dt_s,
              t[z]);
          w[z] = ms.humidity_ratio;
          lat_energy_j[z] += ms.extraction_kgps * psychro::kLatentHeatJPerKg * opt.dt_s;
        }
      } else {
        // One-minute on/off cycling, optionally with the performance map.
        // While on the unit delivers its (corrected) rated capacity; when a
        // full-capacity sub-step would undershoot the off threshold and the
        // minimum on-time is satisfied, the unit cycles off within the
        // sub-step: the zone is pinned at the threshold and the delivered
        // energy is the runtime fraction of the rated pulse.
        int substeps = opt.hvac_substeps_per_hour;
        double dt_sub = 3600.0 / substeps;
        double off_threshold = spec->cooling_setpoint_c - spec->deadband_k / 2;
        for (int s = 0; s < substeps; ++s) {
          std::vector<double> available_w(nz, 0.0), moisture_rate(nz, 0.0);
          std::vector<char> can_cycle_off(nz, 0);
          for (size_t z = 0; z < nz; ++z) {
            bool on = thermostats[z].decide(t[z], spec->cooling_setpoint_c, spec->deadband_k,
                                            spec->min_on_s, spec->min_off_s);
            if (!on) continue;
            double mult = 1.0;
            if (spec->kind == hvac::ModelKind::cycling_with_performance) {
              double rh = psychro::relative_humidity_pct(t[z], w[z]);
              auto mm = hvac::performance_correction(t[z], rh, rec.temp_c, spec->map,
                                                     &res.diagnostics);
              mult = mm.capacity;
            }
            available_w[z] = spec->rated_sensible_w * mult;
            moisture_rate[z] = spec->rated_moisture_kgps * mult;
            can_cycle_off[z] = thermostats[z].since_switch_s >= spec->min_on_s;
          }

          bc.zone_extraction_w = available_w;
          AssembledForcing fs = assemble_forcing(sys, bc);
          auto t_next = step_state(sys, t, fs, dt_sub);

          std::vector<double> delivered = available_w;
          std::map<int, double> pins;
          for (size_t z = 0; z < nz; ++z)
            if (available_w[z] > 0 && can_cycle_off[z] && t_next[z] < off_threshold - 1e-12)
              pins[static_cast<int>(z)] = off_threshold;
          if (!pins.empty()) {
            BoundaryHour bc_pin = bc;
            for (const auto& [node, temp] : pins) bc_pin.zone_extraction_w[static_cast<size_t>(node)] = 0;
            AssembledForcing fp = assemble_forcing(sys, bc_pin);
            auto [pinned_next, extraction] = step_state_pinned(sys, t, fp, dt_sub, pins);
            for (const auto& [node, need] : extraction)
              delivered[static_cast<size_t>(node)] =
                  std::clamp(need, 0.0, available_w[static_cast<size_t>(node)]);
            bc.zone_extraction_w = delivered;
            fs = assemble_forcing(sys, bc);
            t_next = step_state(sys, t, fs, dt_sub);
          }

          detail::account_step(fs, t_next, dt_sub, &res.audit);
          t = std::move(t_next);
          for (size_t z = 0; z < nz; ++z) {
            double fraction = available_w[z] > 0 ? delivered[z] / available_w[z] : 0.0;
            sens_energy_j[z] += delivered[z] * dt_sub;
            auto ms = step_moisture(
                w[z], b.zones[z].volume_m3, b.zones[z].infiltration_ach, w_ext,
                b.zones[z].moisture_gain_kgph[static_cast<size_t>(hour)] / 3600.0,
                moisture_rate[z] * fraction, dt_sub, t[z]);
            w[z] = ms.humidity_ratio;
            lat_energy_j[z] += ms.extraction_kgps * psychro::kLatentHeatJPerKg * dt_sub;
            if (available_w[z] > 0 && fraction < 1.0 - 1e-12) {
              // cycled off within the sub-step
              thermostats[z].on = false;
              thermostats[z].since_switch_s = (1.0 - fraction) * dt_sub;
            } else {
              thermostats[z].advance(dt_sub);
            }
          }
        }
      }

      for (size_t z = 0; z < nz; ++z) {
        hvac::HourlyLoadRow row;
        row.timestamp = rec.timestamp;
        row.zone = b.zones[z].name;
        row.temp_c = t[z];
        row.humidity_ratio = w[z];
        row.sensible_w = sens_energy_j[z] / 3600.0;
        row.latent_w = lat_energy_j[z] / 3600.0;
        res.rows.push_back(row);
        res.audit.hvac_sensible_j += sens_energy_j[z];
        res.audit.hvac_latent_j += lat_energy_j[z];
      }
    }
  }

  for (size_t i = 0; i < t.size(); ++i)
    res.audit.stored_delta_j += sys.capacitance[i] * (t[i] - t_start[i]);
  return res;
}

}  // namespace wseq::thermal
