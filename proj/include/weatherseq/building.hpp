#pragma once

// Building description: zones, inter-zones (zone separations), and components
// (opaque walls, glazing). Loadable from the declarative block format and
// bundled with the two-zone T3/V reference flat.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weatherseq/config.hpp"
#include "weatherseq/core.hpp"

namespace wseq::building {

constexpr const char* kExterior = "exterior";

struct Layer {
  double thickness_m = 0;
  double conductivity_w_mk = 0;
  double density_kg_m3 = 0;
  double specific_heat_j_kgk = 0;
};

struct OpaqueComponent {
  std::string name;
  double area_m2 = 0;
  std::vector<Layer> layers;  // ordered from the inside face to the outside face
  double absorptance = 0.6;
  double azimuth_deg = 0;  // from North, clockwise
  double tilt_deg = 90;    // 0 horizontal, 90 vertical
};

struct GlazingComponent {
  std::string name;
  double area_m2 = 0;
  double u_value_w_m2k = 5.8;
  double solar_transmittance = 0.85;
  double shading_coefficient = 1.0;  // veranda/overhang reduction on transmitted solar
  double azimuth_deg = 0;
  double tilt_deg = 90;
};

struct Zone {
  std::string name;
  double volume_m3 = 0;
  std::array<double, 24> sensible_gain_w{};
  std::array<double, 24> moisture_gain_kgph{};
  double infiltration_ach = 0;
};

struct InterZone {
  std::string zone_a;  // zone name or "exterior"
  std::string zone_b;
  std::vector<std::string> components;
};

struct BuildingModel {
  std::string name;
  std::vector<Zone> zones;
  std::vector<OpaqueComponent> opaque;
  std::vector<GlazingComponent> glazing;
  std::vector<InterZone> interzones;

  const Zone* find_zone(const std::string& n) const {
    for (const auto& z : zones)
      if (z.name == n) return &z;
    return nullptr;
  }
  const OpaqueComponent* find_opaque(const std::string& n) const {
    for (const auto& c : opaque)
      if (c.name == n) return &c;
    return nullptr;
  }
  const GlazingComponent* find_glazing(const std::string& n) const {
    for (const auto& c : glazing)
      if (c.name == n) return &c;
    return nullptr;
  }

  void check() const {
    if (zones.empty()) throw error("building '" + name + "' has no zones");
    std::set<std::string> zone_names;
    for (const auto& z : zones) {
      if (!(z.volume_m3 > 0)) throw error("zone '" + z.name + "': volume must be positive");
      if (z.infiltration_ach < 0) throw error("zone '" + z.name + "': negative infiltration");
      if (!zone_names.insert(z.name).second) throw error("duplicate zone '" + z.name + "'");
    }
    for (const auto& c : opaque) {
      if (!(c.area_m2 > 0)) throw error("component '" + c.name + "': area must be positive");
      if (c.layers.empty()) throw error("component '" + c.name + "': no layers");
      for (const auto& l : c.layers)
        if (!(l.thickness_m > 0 && l.conductivity_w_mk > 0 && l.density_kg_m3 > 0 &&
              l.specific_heat_j_kgk > 0))
          throw error("component '" + c.name + "': layer properties must be positive");
      if (c.absorptance < 0 || c.absorptance > 1)
        throw error("component '" + c.name + "': absorptance outside [0,1]");
    }
    for (const auto& g : glazing) {
      if (!(g.area_m2 > 0 && g.u_value_w_m2k > 0))
        throw error("glazing '" + g.name + "': area and U-value must be positive");
      if (g.solar_transmittance < 0 || g.solar_transmittance > 1)
        throw error("glazing '" + g.name + "': transmittance outside [0,1]");
    }
    std::set<std::string> used;
    for (const auto& iz : interzones) {
      auto is_zone = [&](const std::string& n) { return n == kExterior || zone_names.count(n); };
      if (!is_zone(iz.zone_a) || !is_zone(iz.zone_b))
        throw error("interzone references unknown zone '" + iz.zone_a + "'/'" + iz.zone_b + "'");
      if (iz.zone_a == kExterior && iz.zone_b == kExterior)
        throw error("interzone connects exterior to exterior");
      if (iz.components.empty()) throw error("interzone has no components");
      for (const auto& cn : iz.components) {
        if (!find_opaque(cn) && !find_glazing(cn))
          throw error("interzone references unknown component '" + cn + "'");
        if (!used.insert(cn).second)
          throw error("component '" + cn + "' used by more than one interzone");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// config round trip

namespace detail {

inline std::array<double, 24> schedule_from(const config::Node& n) {
  std::array<double, 24> out{};
  if (n.args.size() == 2 && n.args[0] == "constant") {
    out.fill(n.arg_num(1));
  } else if (n.args.size() == 24) {
    for (int h = 0; h < 24; ++h) out[static_cast<size_t>(h)] = n.arg_num(static_cast<size_t>(h));
  } else {
    throw error("'" + n.name + "' expects 'constant <v>' or 24 hourly values");
  }
  return out;
}

inline config::Node schedule_node(const std::string& name, const std::array<double, 24>& v) {
  bool constant = true;
  for (double x : v) constant = constant && x == v[0];
  config::Node n{name, {}, {}, false};
  if (constant) {
    n.args = {"constant", fmt_num(v[0], 12)};
  } else {
    for (double x : v) n.args.push_back(fmt_num(x, 12));
  }
  return n;
}

}  // namespace detail

inline BuildingModel building_from_config(const std::vector<config::Node>& nodes) {
  BuildingModel b;
  for (const auto& n : nodes) {
    if (n.name == "building") {
      b.name = n.arg_str(0);
    } else if (n.name == "zone") {
      Zone z;
      z.name = n.arg_str(0);
      z.volume_m3 = n.child_num("volume_m3");
      z.infiltration_ach = n.child_num_or("infiltration_ach", 0.0);
      if (const auto* g = n.find("sensible_gain_w")) z.sensible_gain_w = detail::schedule_from(*g);
      if (const auto* g = n.find("moisture_gain_kgph")) z.moisture_gain_kgph = detail::schedule_from(*g);
      b.zones.push_back(std::move(z));
    } else if (n.name == "component") {
      std::string type = n.child_str("type");
      if (type == "opaque") {
        OpaqueComponent c;
        c.name = n.arg_str(0);
        c.area_m2 = n.child_num("area_m2");
        c.absorptance = n.child_num_or("absorptance", 0.6);
        c.azimuth_deg = n.child_num_or("azimuth_deg", 0.0);
        c.tilt_deg = n.child_num_or("tilt_deg", 90.0);
        for (const auto* l : n.find_all("layer"))
          c.layers.push_back({l->arg_num(0), l->arg_num(1), l->arg_num(2), l->arg_num(3)});
        b.opaque.push_back(std::move(c));
      } else if (type == "glazing") {
        GlazingComponent g;
        g.name = n.arg_str(0);
        g.area_m2 = n.child_num("area_m2");
        g.u_value_w_m2k = n.child_num_or("u_value", 5.8);
        g.solar_transmittance = n.child_num_or("solar_transmittance", 0.85);
        g.shading_coefficient = n.child_num_or("shading_coefficient", 1.0);
        g.azimuth_deg = n.child_num_or("azimuth_deg", 0.0);
        g.tilt_deg = n.child_num_or("tilt_deg", 90.0);
        b.glazing.push_back(std::move(g));
      } else {
        throw error("component '" + n.arg_str(0) + "': unknown type '" + type + "'");
      }
    } else if (n.name == "interzone") {
      InterZone iz;
      iz.zone_a = n.arg_str(0);
      iz.zone_b = n.arg_str(1);
      const config::Node* c = n.find("components");
      if (!c) throw error("interzone block needs a 'components' entry");
      iz.components = c->args;
      b.interzones.push_back(std::move(iz));
    }
  }
  b.check();
  return b;
}

inline std::vector<config::Node> building_to_config(const BuildingModel& b) {
  std::vector<config::Node> nodes;
  nodes.push_back({"building", {b.name}, {}, false});
  for (const auto& z : b.zones) {
    config::Node n{"zone", {z.name}, {}, true};
    n.children.push_back({"volume_m3", {fmt_num(z.volume_m3, 12)}, {}, false});
    n.children.push_back({"infiltration_ach", {fmt_num(z.infiltration_ach, 12)}, {}, false});
    n.children.push_back(detail::schedule_node("sensible_gain_w", z.sensible_gain_w));
    n.children.push_back(detail::schedule_node("moisture_gain_kgph", z.moisture_gain_kgph));
    nodes.push_back(std::move(n));
  }
  for (const auto& c : b.opaque) {
    config::Node n{"component", {c.name}, {}, true};
    n.children.push_back({"type", {"opaque"}, {}, false});
    n.children.push_back({"area_m2", {fmt_num(c.area_m2, 12)}, {}, false});
    n.children.push_back({"absorptance", {fmt_num(c.absorptance, 12)}, {}, false});
    n.children.push_back({"azimuth_deg", {fmt_num(c.azimuth_deg, 12)}, {}, false});
    n.children.push_back({"tilt_deg", {fmt_num(c.tilt_deg, 12)}, {}, false});
    for (const auto& l : c.layers)
      n.children.push_back({"layer",
                            {fmt_num(l.thickness_m, 12), fmt_num(l.conductivity_w_mk, 12),
                             fmt_num(l.density_kg_m3, 12), fmt_num(l.specific_heat_j_kgk, 12)},
                            {},
                            false});
    nodes.push_back(std::move(n));
  }
  for (const auto& g : b.glazing) {
    config::Node n{"component", {g.name}, {}, true};
    n.children.push_back({"type", {"glazing"}, {}, false});
    n.children.push_back({"area_m2", {fmt_num(g.area_m2, 12)}, {}, false});
    n.children.push_back({"u_value", {fmt_num(g.u_value_w_m2k, 12)}, {}, false});
    n.children.push_back({"solar_transmittance", {fmt_num(g.solar_transmittance, 12)}, {}, false});
    n.children.push_back({"shading_coefficient", {fmt_num(g.shading_coefficient, 12)}, {}, false});
    n.children.push_back({"azimuth_deg", {fmt_num(g.azimuth_deg, 12)}, {}, false});
    n.children.push_back({"tilt_deg", {fmt_num(g.tilt_deg, 12)}, {}, false});
    nodes.push_back(std::move(n));
  }
  for (const auto& iz : b.interzones) {
    config::Node n{"interzone", {iz.zone_a, iz.zone_b}, {}, true};
    config::Node c{"components", iz.components, {}, false};
    n.children.push_back(std::move(c));
    nodes.push_back(std::move(n));
  }
  return nodes;
}

inline BuildingModel load_building(const std::string& path) {
  return building_from_config(config::parse_file(path));
}

// ---------------------------------------------------------------------------
// bundled reference flat

// Two-zone top-floor T3/V: living room to the west behind a veranda (shading
// on the west glazing), two bedrooms merged into an east zone, heavy concrete
// envelope, roof exposed, window-to-wall ratio 0.25 on the main facades.
inline BuildingModel t3v_building() {
  BuildingModel b;
  b.name = "t3v";

  Zone living;
  living.name = "living";
  living.volume_m3 = 62.5;  // 25 m2 x 2.5 m
  living.infiltration_ach = 1.0;
  for (int h = 0; h < 24; ++h) {
    bool evening = h >= 17 && h < 22;
    living.sensible_gain_w[static_cast<size_t>(h)] = evening ? 300.0 : 80.0;
    living.moisture_gain_kgph[static_cast<size_t>(h)] = evening ? 0.10 : 0.03;
  }
  Zone bed;
  bed.name = "bedrooms";
  bed.volume_m3 = 55.0;  // 22 m2 x 2.5 m
  bed.infiltration_ach = 1.0;
  for (int h = 0; h < 24; ++h) {
    bool night = h >= 22 || h < 6;
    bed.sensible_gain_w[static_cast<size_t>(h)] = night ? 160.0 : 40.0;
    bed.moisture_gain_kgph[static_cast<size_t>(h)] = night ? 0.08 : 0.02;
  }
  b.zones = {living, bed};

  Layer concrete15{0.15, 1.75, 2300, 920};
  Layer concrete10{0.10, 1.75, 2300, 920};
  Layer screed6{0.06, 0.5, 1200, 1000};  // lightweight roof screed + waterproofing
  auto wall = [&](const std::string& name, double area, double az) {
    OpaqueComponent c;
    c.name = name;
    c.area_m2 = area;
    c.layers = {concrete15};
    c.absorptance = 0.6;
    c.azimuth_deg = az;
    c.tilt_deg = 90;
    return c;
  };
  OpaqueComponent roof_living = wall("roof_living", 25.0, 0);
  roof_living.tilt_deg = 0;
  roof_living.absorptance = 0.6;  // light coating
  roof_living.layers = {concrete15, screed6};  // inside face first
  OpaqueComponent roof_bed = wall("roof_bedrooms", 22.0, 0);
  roof_bed.tilt_deg = 0;
  roof_bed.absorptance = 0.6;
  roof_bed.layers = {concrete15, screed6};
  OpaqueComponent partition;
  partition.name = "partition";
  partition.area_m2 = 12.5;
  partition.layers = {concrete10};
  partition.absorptance = 0;
  partition.azimuth_deg = 0;
  partition.tilt_deg = 90;

  b.opaque = {
      wall("wall_west", 9.375, 270),       // 12.5 m2 facade minus the window
      wall("wall_north_living", 12.5, 0),  wall("wall_south_living", 12.5, 180),
      wall("wall_east", 8.25, 90),         // 11 m2 facade minus the window
      wall("wall_north_bed", 11.0, 0),     wall("wall_south_bed", 11.0, 180),
      roof_living, roof_bed, partition,
  };

  GlazingComponent win_west;
  win_west.name = "window_west";
  win_west.area_m2 = 3.125;  // WWR 0.25 of the west facade
  win_west.u_value_w_m2k = 5.8;
  win_west.solar_transmittance = 0.85;
  win_west.shading_coefficient = 0.55;  // veranda
  win_west.azimuth_deg = 270;
  win_west.tilt_deg = 90;
  GlazingComponent win_east = win_west;
  win_east.name = "window_east";
  win_east.area_m2 = 2.75;
  win_east.shading_coefficient = 1.0;
  win_east.azimuth_deg = 90;

  b.glazing = {win_west, win_east};

  b.interzones = {
      {"living", kExterior,
       {"wall_west", "wall_north_living", "wall_south_living", "roof_living", "window_west"}},
      {"bedrooms", kExterior,
       {"wall_east", "wall_north_bed", "wall_south_bed", "roof_bedrooms", "window_east"}},
      {"living", "bedrooms", {"partition"}},
  };
  b.check();
  return b;
}

}  // namespace wseq::building
