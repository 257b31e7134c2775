#include "slicesim/scenarios.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

namespace slicesim {

namespace {
PlateSpec half_space(double face, int facing, std::size_t n_sites,
                     double site_origin = 0) {
  PlateSpec p;
  p.face = face;
  p.facing = facing;
  p.thickness = kInf;
  p.n_sites = n_sites;
  p.site_origin = site_origin;
  return p;
}
}  // namespace

RunConfig scenario_free_flight() {
  RunConfig c;
  c.label = "free_flight";
  c.grid = {1, -20, 20, 1024, 0, 1, 1};
  c.initial.kind = InitialSpec::Kind::gaussian;
  c.initial.center = {-10, 0};
  c.initial.sigma = 1.0;
  c.initial.k0 = {8, 0};
  c.stepper.dt = 3e-4;
  c.stepper.t_final = 3.4;
  c.output.probes = {{0, 0}, {5, 0}};
  return c;
}

RunConfig scenario_flat_screen() {
  RunConfig c;
  c.label = "flat_screen";
  c.grid = {1, -20, 20, 2048, 0, 1, 1};
  c.initial.kind = InitialSpec::Kind::gaussian;
  c.initial.center = {-5, 0};
  c.initial.sigma = 1.0;
  c.initial.k0 = {5, 0};
  c.stepper.dt = 1e-4;
  c.stepper.t_final = 3.2;
  BodySpec b;
  b.primitive = "segment";
  b.plates = {half_space(5.0, -1, 64)};
  b.d = 0.25;
  b.v_s = 5.0;
  c.bodies = {b};
  c.reference = "flux_integral";
  c.output.probes = {{2, 0}};
  c.tau_p = 0.1;
  c.tau_e = 0.3;
  return c;
}

RunConfig scenario_flat_screen_sheet() {
  RunConfig c;
  c.label = "flat_screen_sheet";
  c.grid = {1, -20, 20, 2048, 0, 1, 1};
  c.initial.kind = InitialSpec::Kind::gaussian;
  c.initial.center = {0, 0};
  c.initial.sigma = 2.0;
  c.initial.k0 = {0, 0};
  c.stepper.dt = 1e-4;
  c.stepper.t_final = 0.6;
  BodySpec b;
  b.primitive = "segment";
  // d = 16 grid cells and an on-lattice face: panels tile the grid exactly
  // and site centers land on grid points
  const double h = 40.0 / 2048.0;
  PlateSpec p = half_space(-10.0, -1, 64);
  p.thickness = 64.0 * 16.0 * h;
  // inactive until the contact instant
  p.holes = {{-1.0, 64.0 * 16.0 * h + 1.0, -kInf, 0.5}};
  b.plates = {p};
  b.d = 16.0 * h;
  b.v_s = 5.0;
  b.skin_width = 1.0;
  b.skin_strength = 40.0;
  c.bodies = {b};
  c.reference = "contact_density";
  c.tau_p = 0.1;
  c.tau_e = 0.3;
  return c;
}

RunConfig scenario_elongated_packet() {
  RunConfig c;
  c.label = "elongated_packet";
  c.grid = {1, -20, 20, 2048, 0, 1, 1};
  c.initial.kind = InitialSpec::Kind::sheet;
  c.initial.lo = {-14, 0};
  c.initial.hi = {-2, 0};
  c.initial.k0 = {5, 0};
  c.stepper.dt = 1e-4;
  c.stepper.t_final = 4.0;
  BodySpec b;
  b.primitive = "segment";
  b.plates = {half_space(0.0, -1, 4)};
  b.d = 0.25;
  b.v_s = 5.0;
  c.bodies = {b};
  c.reference = "flux_integral";
  c.tau_p = 0.1;
  c.tau_e = 0.3;
  return c;
}

RunConfig scenario_accelerating_surface() {
  RunConfig c;
  c.label = "accelerating_surface";
  // v_g = hbar k0 / m = 1 with k0 = 5, m = 5: keeps the de Broglie wavelength
  // short enough for a compact absorbing skin
  c.units.mass = 5.0;
  c.grid = {1, -16, 16, 2048, 0, 1, 1};
  c.initial.kind = InitialSpec::Kind::sheet;
  c.initial.lo = {-10, 0};
  c.initial.hi = {0, 0};
  c.initial.k0 = {5, 0};
  c.stepper.dt = 2.5e-4;
  c.stepper.t_final = 16.5;
  BodySpec b;
  b.primitive = "segment";
  PlateSpec p = half_space(0.0, -1, 12);
  p.thickness = 4.5;
  b.plates = {p};
  b.d = 0.25;
  b.v_s = 5.0;
  b.skin_width = 2.0;
  b.skin_strength = 60.0;
  b.skin_power = 3.0;
  b.segments = {{0.0, {0, 0}}, {4.0, {5, 0}}};
  c.bodies = {b};
  BodySpec b2;
  b2.primitive = "segment";
  b2.plates = {half_space(6.0, -1, 12)};
  b2.d = 0.25;
  b2.v_s = 5.0;
  b2.skin_width = 2.0;
  b2.skin_strength = 60.0;
  b2.skin_power = 3.0;
  c.bodies.push_back(b2);
  c.tau_p = 0.2;
  c.tau_e = 0.3;
  return c;
}

RunConfig scenario_two_plates(double separation) {
  RunConfig c;
  c.label = "two_plates";
  c.grid = {1, -20, 20, 2048, 0, 1, 1};
  c.initial.kind = InitialSpec::Kind::gaussian;
  c.initial.center = {-6, 0};
  c.initial.sigma = 1.0;
  c.initial.k0 = {5, 0};
  c.stepper.dt = 1e-4;
  c.stepper.t_final = 2.4 + separation / 5.0;
  BodySpec b;
  b.primitive = "two_plates";
  PlateSpec p1;
  p1.face = 0.0;
  p1.facing = -1;
  p1.thickness = 0.08;  // membrane: transient binding, partial transmission
  p1.n_sites = 1;
  p1.eta = 0.35;
  PlateSpec p2 = half_space(separation, -1, 8);
  b.plates = {p1, p2};
  b.d = 0.25;
  b.v_s = 5.0;
  c.bodies = {b};
  c.tau_p = 0.3;
  c.tau_e = 0.5;
  return c;
}

RunConfig scenario_holes_interference() {
  RunConfig c;
  c.label = "holes_interference";
  c.grid = {2, -30, 30, 512, -30, 30, 512};
  c.initial.kind = InitialSpec::Kind::gaussian;
  c.initial.center = {-12, 0};
  c.initial.sigma = 1.7;
  c.initial.k0 = {5, 0};
  c.stepper.dt = 3e-3;
  c.stepper.t_final = 7.5;
  BodySpec b;
  b.primitive = "line";
  PlateSpec p;
  p.face = 0.0;
  p.facing = -1;
  p.thickness = 3.0;
  p.n_sites = 240;
  p.site_origin = -30.0;
  // two slits of width 1 centered at y = -1.5 and +1.5
  p.holes = {{-2.0, -1.0, -kInf, kInf}, {1.0, 2.0, -kInf, kInf}};
  b.plates = {p};
  b.d = 0.25;
  b.v_s = 5.0;
  c.bodies = {b};
  BodySpec collector;
  collector.primitive = "line";
  collector.plates = {half_space(15.0, -1, 240, -30.0)};
  collector.d = 0.25;
  collector.v_s = 5.0;
  c.bodies.push_back(collector);
  c.output.probes = {{7.5, 0.0}, {7.5, 3.0}};
  c.tau_p = 0.3;
  c.tau_e = 0.5;
  return c;
}

namespace {
RunConfig galilean_config(double boost) {
  // boost is a k-lattice point; boost * t_activate is an exact cell count,
  // so the boosted run maps cell-for-cell onto the base run.
  RunConfig c;
  c.label = boost == 0 ? "galilean_base" : "galilean_boosted";
  c.grid = {1, -20, 20, 2048, 0, 1, 1};
  const double h = 40.0 / 2048.0;
  const double q = 2.0 * std::numbers::pi * 32.0 / 40.0;  // ~5.027
  const double t1 = 129.0 * h / q;                        // ~0.5013
  c.initial.kind = InitialSpec::Kind::gaussian;
  c.initial.center = {0, 0};
  c.initial.sigma = 1.5;
  c.initial.k0 = {boost, 0};
  // t1 is both a whole number of steps and a whole number of cells of boost
  // displacement, so the two runs sample identical geometry
  c.stepper.dt = t1 / 5000.0;
  c.stepper.t_final = t1 + 0.1;
  BodySpec b;
  b.primitive = "segment";
  PlateSpec p = half_space(-10.0, -1, 64);
  p.thickness = 64.0 * 16.0 * h;
  p.holes = {{-1.0, 64.0 * 16.0 * h + 1.0, -kInf, t1}};
  b.plates = {p};
  b.d = 16.0 * h;
  b.v_s = 5.0;
  b.skin_width = 1.0;
  b.skin_strength = 40.0;
  if (boost != 0) b.segments = {{0.0, {boost, 0}}};
  c.bodies = {b};
  c.tau_p = 0.2;
  c.tau_e = 0.5;
  return c;
}
}  // namespace

RunConfig scenario_galilean_base() { return galilean_config(0.0); }

RunConfig scenario_galilean_boosted() {
  return galilean_config(2.0 * std::numbers::pi * 32.0 / 40.0);
}

std::vector<std::pair<std::string, RunConfig>> bundled_scenarios() {
  return {
      {"free_flight", scenario_free_flight()},
      {"flat_screen", scenario_flat_screen()},
      {"flat_screen_sheet", scenario_flat_screen_sheet()},
      {"elongated_packet", scenario_elongated_packet()},
      {"accelerating_surface", scenario_accelerating_surface()},
      {"two_plates", scenario_two_plates()},
      {"holes_interference", scenario_holes_interference()},
      {"galilean_base", scenario_galilean_base()},
      {"galilean_boosted", scenario_galilean_boosted()},
  };
}

void emit_scenarios(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [name, cfg] : bundled_scenarios())
    save_config(cfg, (fs::path(dir) / (name + ".cfg")).string());
}

}  // namespace slicesim
