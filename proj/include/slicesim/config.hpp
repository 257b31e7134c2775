#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/body.hpp"
#include "slicesim/grid.hpp"
#include "slicesim/init.hpp"
#include "slicesim/potential.hpp"

namespace slicesim {

// Section/key=value run description. The exact schema is documented in
// docs/config-format.md; parse and serialize round-trip losslessly.

struct GridSpec {
  int dim = 1;
  double x_lo = -1, x_hi = 1;
  std::size_t nx = 8;
  double y_lo = -1, y_hi = 1;
  std::size_t ny = 8;
};

struct InitialSpec {
  enum class Kind { gaussian, sheet } kind = Kind::gaussian;
  std::array<double, 2> center{0, 0};
  double sigma = 1;
  std::array<double, 2> lo{0, 0}, hi{0, 0};  // sheet box
  std::array<double, 2> k0{0, 0};
};

struct PotentialSpec {
  enum class Kind { free, harmonic, linear } kind = Kind::free;
  double strength = 1;                // harmonic k or linear gradient g
  std::array<double, 2> center{0, 0};
};

struct PlateSpec {
  double face = 0;
  double thickness = kInf;
  int facing = -1;
  std::size_t n_sites = 1;
  double site_origin = 0;
  double eta = 1.0;
  std::vector<Hole> holes;
};

struct BodySpec {
  std::string primitive = "segment";  // segment | line | two_plates
  std::vector<PlateSpec> plates;
  double d = 0.25;
  double v_s = 1.0;
  double skin_width = 0;     // 0 = auto
  double skin_strength = 0;  // 0 = auto
  double skin_power = 2.0;
  std::vector<TrajectorySegment> segments{{0.0, {0, 0}}};

  BodyState make(int dim) const;
};

struct StepperSpec {
  double dt = 1e-3;
  double t_final = 1.0;
  long max_steps = 100000000;
};

struct OutputSpec {
  long snapshot_cadence = 0;  // 0 = none
  bool text_snapshots = false;
  std::vector<std::array<double, 2>> probes;
};

struct RunConfig {
  std::string label = "run";
  Units units;
  GridSpec grid;
  InitialSpec initial;
  PotentialSpec potential;
  StepperSpec stepper;
  std::vector<BodySpec> bodies;
  double bin_width = 0;  // 0 = d / v_s of the first body
  OutputSpec output;
  long seed = 0;  // reserved; every run is deterministic
  double tau_p = 0.05, tau_e = 0.05;
  double k_char = 0;  // 0 = auto from the initial state and body motion
  std::string reference = "none";  // none | flux_integral | contact_density

  Grid make_grid() const;
  WaveField make_initial() const;
  Potential make_potential() const;

  void validate() const;

  bool operator==(const RunConfig&) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::string& path);

}  // namespace slicesim
