#pragma once

#include <array>
#include <limits>
#include <vector>

#include "slicesim/grid.hpp"

namespace slicesim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SurfaceSite {
  int id = 0;
  int plate = 0;
  std::array<double, 2> rest_position{0, 0};
  std::array<double, 2> rest_normal{1, 0};
};

struct TrajectorySegment {
  double t_start = 0;
  std::array<double, 2> velocity{0, 0};
};

// Piecewise-constant rigid translation, with an optional rotation rate about
// a pivot (2D geometry queries only; capture requires zero rotation).
struct Trajectory {
  std::vector<TrajectorySegment> segments{{0.0, {0, 0}}};
  double rotation_rate = 0;
  std::array<double, 2> pivot{0, 0};

  double t_start() const { return segments.empty() ? 0.0 : segments.front().t_start; }
  std::array<double, 2> offset(double t) const;
  std::array<double, 2> velocity(double t) const;
  double angle(double t) const;
  std::vector<double> event_times() const;  // impulse instants (segment boundaries)
};

// Open interval of the surface coordinate with an existence window. While
// open, sites inside are removed and the material behind them is absent.
struct Hole {
  double lo = 0, hi = 0;
  double t_open = -kInf, t_close = kInf;
  bool is_open(double t) const { return t >= t_open && t < t_close; }
};

// One flat absorbing plate perpendicular to the body axis.
//  facing -1: outward normal -axis, material occupies [face, face+thickness]
//  facing +1: outward normal +axis, material occupies [face-thickness, face]
struct Plate {
  double face = 0;
  double thickness = kInf;
  int facing = -1;
  std::size_t n_sites = 1;
  double site_origin = 0;  // 2D: transverse coordinate where the site array begins
                           // 1D: depth offset of the first site layer (usually 0)
  std::vector<Hole> holes;
  double eta = 1.0;
};

struct SiteSample {
  SurfaceSite site;
  std::array<double, 2> position{0, 0};
  std::array<double, 2> normal{1, 0};
  std::array<double, 2> velocity{0, 0};
  bool active = true;
};

struct SweptCell {
  std::size_t cell = 0;
  int site_id = -1;
  double t_cross = 0;
};

struct BodyState {
  int dim = 1;
  int axis = 0;  // plate normal axis; only 0 (x) is used by the bundled scenarios
  std::vector<Plate> plates;
  Trajectory trajectory;
  double granularity = 0.0;   // d
  double sound_speed = 1.0;   // v_s
  double skin_width = 0.0;    // absorber ramp depth (auto-set by the runner if 0)
  double skin_strength = 0.0; // absorber rate scale (auto-set if 0)
  double skin_power = 2.0;    // ramp exponent gamma ~ u^power

  void validate() const;

  // All sites (active and not) with rigidly transformed positions, normals,
  // velocities at time t.
  std::vector<SiteSample> site_positions(double t) const;

  bool interior(std::array<double, 2> p, double t) const;

  // world-frame face coordinate of a plate along the axis
  double face_position(const Plate& p, double t) const;
  // true if the plate has at least one active site at t
  bool plate_active(const Plate& p, double t) const;
  // site ids of a plate that are active at time t
  std::vector<int> active_sites(const Plate& p, double t) const;

  // Cells (by flat grid index) that changed from exterior at t0 to interior
  // at t1, each with the nearest active site at t1 and the crossing estimate.
  // Throws if the rigid motion exceeds one grid cell over (t0, t1]; hole
  // open/close events inside the window are allowed (materialization).
  std::vector<SweptCell> swept_cells(const Grid& g, double t0, double t1) const;

  // impulse + hole event times, sorted unique
  std::vector<double> event_times() const;

  int total_sites() const;
};

// body construction helpers used by configs and tests

// 1D half-line absorber: face at x0 facing the exterior on `facing` side,
// n_sites depth layers of spacing d.
BodyState make_segment_body_1d(double x0, int facing, std::size_t n_sites, double d,
                               double v_s, double eta = 1.0);

// 2D full-width plate: face line at x0, sites spanning [y_lo, y_lo + n*d).
BodyState make_line_body_2d(double x0, int facing, double y_lo, std::size_t n_sites,
                            double d, double v_s, double thickness = kInf,
                            double eta = 1.0);

}  // namespace slicesim
