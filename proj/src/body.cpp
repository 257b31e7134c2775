#include "slicesim/body.hpp"

#include <algorithm>
#include <cmath>

namespace slicesim {

std::array<double, 2> Trajectory::offset(double t) const {
  std::array<double, 2> u{0, 0};
  for (std::size_t i = 0; i < segments.size(); i++) {
    const double a = segments[i].t_start;
    if (t <= a) break;
    const double b = (i + 1 < segments.size()) ? std::min(t, segments[i + 1].t_start) : t;
    const double span = b - a;
    u[0] += segments[i].velocity[0] * span;
    u[1] += segments[i].velocity[1] * span;
  }
  return u;
}

std::array<double, 2> Trajectory::velocity(double t) const {
  std::array<double, 2> v{0, 0};
  for (const auto& s : segments) {
    if (t >= s.t_start) v = s.velocity;
  }
  return v;
}

double Trajectory::angle(double t) const {
  return rotation_rate * std::max(0.0, t - t_start());
}

std::vector<double> Trajectory::event_times() const {
  std::vector<double> e;
  for (std::size_t i = 1; i < segments.size(); i++) e.push_back(segments[i].t_start);
  return e;
}

void BodyState::validate() const {
  if (!(granularity > 0)) throw ConfigError("body: granularity d must be positive");
  if (!(sound_speed > 0)) throw ConfigError("body: sound speed v_s must be positive");
  if (plates.empty()) throw ConfigError("body: needs at least one plate");
  for (const auto& p : plates) {
    if (p.n_sites == 0) throw ConfigError("body: plate without sites");
    if (!(p.eta >= 0 && p.eta <= 1)) throw ConfigError("body: eta outside [0,1]");
    if (p.facing != -1 && p.facing != 1) throw ConfigError("body: facing must be +-1");
    for (std::size_t i = 0; i < p.holes.size(); i++)
      for (std::size_t j = i + 1; j < p.holes.size(); j++) {
        const Hole& a = p.holes[i];
        const Hole& b = p.holes[j];
        const bool coord_overlap = a.lo < b.hi && b.lo < a.hi;
        const bool time_overlap = a.t_open < b.t_close && b.t_open < a.t_close;
        if (coord_overlap && time_overlap) throw ConfigError("body: overlapping holes");
      }
  }
  auto ts = trajectory.segments;
  for (std::size_t i = 1; i < ts.size(); i++)
    if (!(ts[i].t_start > ts[i - 1].t_start))
      throw ConfigError("body: trajectory segments not time-ordered");
}

namespace {

std::array<double, 2> rest_site_position(const BodyState& b, const Plate& p,
                                         std::size_t j) {
  std::array<double, 2> r{0, 0};
  if (b.dim == 1) {
    // depth layers into the material
    const double depth = p.site_origin + (double(j) + 0.5) * b.granularity;
    r[0] = p.face - p.facing * depth;
  } else {
    r[b.axis] = p.face;
    r[1 - b.axis] = p.site_origin + (double(j) + 0.5) * b.granularity;
  }
  return r;
}

double site_surface_coord(const BodyState& b, const Plate& p, std::size_t j) {
  if (b.dim == 1) return p.site_origin + (double(j) + 0.5) * b.granularity;
  return p.site_origin + (double(j) + 0.5) * b.granularity;
}

bool site_active(const BodyState& b, const Plate& p, std::size_t j, double t) {
  const double s = site_surface_coord(b, p, j);
  for (const auto& h : p.holes)
    if (h.is_open(t) && s > h.lo && s < h.hi) return false;
  return true;
}

std::array<double, 2> rotate(std::array<double, 2> v, double c, double s) {
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

}  // namespace

std::vector<SiteSample> BodyState::site_positions(double t) const {
  std::vector<SiteSample> out;
  const auto u = trajectory.offset(t);
  const auto vel = trajectory.velocity(t);
  const double th = dim == 2 ? trajectory.angle(t) : 0.0;
  const double c = std::cos(th), s = std::sin(th);
  int id = 0;
  for (std::size_t pi = 0; pi < plates.size(); pi++) {
    const Plate& p = plates[pi];
    for (std::size_t j = 0; j < p.n_sites; j++) {
      SiteSample smp;
      smp.site.id = id++;
      smp.site.plate = int(pi);
      smp.site.rest_position = rest_site_position(*this, p, j);
      smp.site.rest_normal = {0, 0};
      smp.site.rest_normal[axis] = double(p.facing);
      const auto rel = std::array<double, 2>{smp.site.rest_position[0] - trajectory.pivot[0],
                                             smp.site.rest_position[1] - trajectory.pivot[1]};
      const auto rot = rotate(rel, c, s);
      smp.position = {trajectory.pivot[0] + rot[0] + u[0],
                      trajectory.pivot[1] + rot[1] + u[1]};
      smp.normal = rotate(smp.site.rest_normal, c, s);
      smp.velocity = vel;
      if (trajectory.rotation_rate != 0) {
        smp.velocity[0] += -trajectory.rotation_rate * rot[1];
        smp.velocity[1] += trajectory.rotation_rate * rot[0];
      }
      smp.active = site_active(*this, p, j, t);
      out.push_back(smp);
    }
  }
  return out;
}

double BodyState::face_position(const Plate& p, double t) const {
  return p.face + trajectory.offset(t)[axis];
}

bool BodyState::plate_active(const Plate& p, double t) const {
  for (std::size_t j = 0; j < p.n_sites; j++)
    if (site_active(*this, p, j, t)) return true;
  return false;
}

std::vector<int> BodyState::active_sites(const Plate& p, double t) const {
  std::vector<int> ids;
  int base = 0;
  for (const auto& q : plates) {
    if (&q == &p) break;
    base += int(q.n_sites);
  }
  for (std::size_t j = 0; j < p.n_sites; j++)
    if (site_active(*this, p, j, t)) ids.push_back(base + int(j));
  return ids;
}

bool BodyState::interior(std::array<double, 2> p, double t) const {
  if (trajectory.rotation_rate != 0)
    throw ConfigError("body: interior queries require zero rotation rate");
  const auto u = trajectory.offset(t);
  std::array<double, 2> q{p[0] - u[0], p[1] - u[1]};  // body frame
  for (const auto& pl : plates) {
    const double a = q[axis];
    double lo, hi;
    if (pl.facing < 0) {
      lo = pl.face;
      hi = pl.face + pl.thickness;
    } else {
      lo = pl.face - pl.thickness;
      hi = pl.face;
    }
    if (a < lo || a > hi) continue;
    if (dim == 2) {
      const double tr = q[1 - axis];
      const double span_lo = pl.site_origin;
      const double span_hi = pl.site_origin + double(pl.n_sites) * granularity;
      if (tr < span_lo || tr > span_hi) continue;
      bool in_hole = false;
      for (const auto& h : pl.holes)
        if (h.is_open(t) && tr > h.lo && tr < h.hi) in_hole = true;
      if (in_hole) continue;
    } else {
      if (!plate_active(pl, t)) continue;  // fully holed plate is absent
    }
    return true;
  }
  return false;
}

std::vector<SweptCell> BodyState::swept_cells(const Grid& g, double t0, double t1) const {
  if (!(t1 > t0)) throw ConfigError("swept_cells: need t1 > t0");
  const auto u0 = trajectory.offset(t0);
  const auto u1 = trajectory.offset(t1);
  const double motion = std::max(std::abs(u1[0] - u0[0]), std::abs(u1[1] - u0[1]));
  if (motion > g.min_spacing() * (1.0 + 1e-9))
    throw ConfigError("swept_cells: motion exceeds one cell per call; subdivide the step");

  bool hole_event = false;
  for (const auto& pl : plates)
    for (const auto& h : pl.holes)
      if (h.is_open(t0) != h.is_open(t1)) hole_event = true;
  if (motion == 0.0 && !hole_event) return {};

  // candidate ix bands: around each plate's slab boundary, or the full slab
  // footprint when a hole toggled (materialization)
  const double hx = g.spacing(0);
  std::vector<std::pair<long, long>> bands;
  auto add_band = [&](double a, double b) {
    long ia = long(std::floor((std::min(a, b) - g.lo[0]) / hx)) - 1;
    long ib = long(std::ceil((std::max(a, b) - g.lo[0]) / hx)) + 1;
    ia = std::max<long>(0, ia);
    ib = std::min<long>(long(g.n[0]) - 1, ib);
    if (ia <= ib) bands.push_back({ia, ib});
  };
  const bool transverse_motion = dim == 2 && (u1[1 - axis] != u0[1 - axis]);
  for (const auto& pl : plates) {
    double lo0, hi0;
    if (pl.facing < 0) {
      lo0 = pl.face;
      hi0 = std::isfinite(pl.thickness) ? pl.face + pl.thickness : g.hi[axis];
    } else {
      lo0 = std::isfinite(pl.thickness) ? pl.face - pl.thickness : g.lo[axis];
      hi0 = pl.face;
    }
    if (hole_event || transverse_motion) {
      add_band(lo0 + std::min(u0[axis], u1[axis]), hi0 + std::max(u0[axis], u1[axis]));
    } else {
      add_band(lo0 + u0[axis], lo0 + u1[axis]);
      add_band(hi0 + u0[axis], hi0 + u1[axis]);
    }
  }

  std::vector<SiteSample> sites = site_positions(t1);
  auto nearest_site = [&](std::array<double, 2> p) -> int {
    int best = -1;
    double bd = kInf;
    for (const auto& s : sites) {
      if (!s.active) continue;
      const double dx = p[0] - s.position[0];
      const double dy = dim == 2 ? p[1] - s.position[1] : 0.0;
      const double d2 = dx * dx + dy * dy;
      if (d2 < bd) {
        bd = d2;
        best = s.site.id;
      }
    }
    return best;
  };

  std::vector<SweptCell> out;
  const double tc = 0.5 * (t0 + t1);
  for (const auto& [ia, ib] : bands) {
    for (long ix = ia; ix <= ib; ix++) {
      const double x = g.coord(0, std::size_t(ix));
      for (std::size_t iy = 0; iy < g.n[1]; iy++) {
        const std::array<double, 2> p{x, g.dim == 2 ? g.coord(1, iy) : 0.0};
        if (!interior(p, t1) || interior(p, t0)) continue;
        out.push_back({g.index(std::size_t(ix), iy), nearest_site(p), tc});
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SweptCell& a, const SweptCell& b) { return a.cell < b.cell; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const SweptCell& a, const SweptCell& b) {
                          return a.cell == b.cell;
                        }),
            out.end());
  std::erase_if(out, [](const SweptCell& c) { return c.site_id < 0; });
  return out;
}

std::vector<double> BodyState::event_times() const {
  std::vector<double> e = trajectory.event_times();
  for (const auto& p : plates)
    for (const auto& h : p.holes) {
      if (std::isfinite(h.t_open)) e.push_back(h.t_open);
      if (std::isfinite(h.t_close)) e.push_back(h.t_close);
    }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          e.end());
  return e;
}

int BodyState::total_sites() const {
  int n = 0;
  for (const auto& p : plates) n += int(p.n_sites);
  return n;
}

BodyState make_segment_body_1d(double x0, int facing, std::size_t n_sites, double d,
                               double v_s, double eta) {
  BodyState b;
  b.dim = 1;
  b.axis = 0;
  Plate p;
  p.face = x0;
  p.facing = facing;
  p.thickness = kInf;
  p.n_sites = n_sites;
  p.site_origin = 0;
  p.eta = eta;
  b.plates.push_back(p);
  b.granularity = d;
  b.sound_speed = v_s;
  return b;
}

BodyState make_line_body_2d(double x0, int facing, double y_lo, std::size_t n_sites,
                            double d, double v_s, double thickness, double eta) {
  BodyState b;
  b.dim = 2;
  b.axis = 0;
  Plate p;
  p.face = x0;
  p.facing = facing;
  p.thickness = thickness;
  p.n_sites = n_sites;
  p.site_origin = y_lo;
  p.eta = eta;
  b.plates.push_back(p);
  b.granularity = d;
  b.sound_speed = v_s;
  return b;
}

}  // namespace slicesim
