#include "slicesim/init.hpp"

#include <cmath>
#include <numbers>

namespace slicesim {

namespace {

constexpr double kSeamBudget = 1e-10;

void guard_seam(const WaveField& f) {
  const double w = 4.0 * f.grid.min_spacing();
  if (seam_norm_fraction(f, w) > kSeamBudget)
    throw ConfigError("initializer: packet clipped by the periodic domain boundary");
}

// raised-cosine ramp: 0 at u=0, 1 at u=1
double ramp(double u) {
  const double s = std::sin(0.5 * std::numbers::pi * u);
  return s * s;
}

}  // namespace

WaveField make_gaussian(const Grid& grid, std::array<double, 2> center, double sigma,
                        std::array<double, 2> k0, Units units) {
  if (!(sigma > 0) || sigma < 2.0 * grid.min_spacing())
    throw ConfigError("make_gaussian: sigma under-resolved (need sigma >= 2 spacing)");
  WaveField f;
  f.grid = grid;
  f.mass = units.mass;
  f.hbar = units.hbar;
  f.values.resize(grid.size());
  const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
  for (std::size_t ix = 0; ix < grid.n[0]; ix++) {
    const double x = grid.coord(0, ix);
    const double dx = x - center[0];
    for (std::size_t iy = 0; iy < grid.n[1]; iy++) {
      double r2 = dx * dx;
      double phase = k0[0] * x;
      if (grid.dim == 2) {
        const double y = grid.coord(1, iy);
        const double dy = y - center[1];
        r2 += dy * dy;
        phase += k0[1] * y;
      }
      f.values[grid.index(ix, iy)] = std::polar(std::exp(-r2 * inv4s2), phase);
    }
  }
  f.normalize();
  guard_seam(f);
  return f;
}

WaveField make_rect_sheet(const Grid& grid, std::array<double, 2> lo,
                          std::array<double, 2> hi, std::array<double, 2> k0,
                          Units units) {
  for (int ax = 0; ax < grid.dim; ax++) {
    if (!(hi[ax] - lo[ax] >= 4.0 * grid.spacing(ax)))
      throw ConfigError("make_rect_sheet: degenerate interval (need hi - lo >= 4 spacing)");
  }
  WaveField f;
  f.grid = grid;
  f.mass = units.mass;
  f.hbar = units.hbar;
  f.values.resize(grid.size());
  const std::array<double, 2> w{4.0 * grid.spacing(0),
                                grid.dim == 2 ? 4.0 * grid.spacing(1) : 0.0};
  auto envelope = [&](int ax, double u) -> double {
    if (u < lo[ax] || u > hi[ax]) return 0.0;
    if (u < lo[ax] + w[ax]) return ramp((u - lo[ax]) / w[ax]);
    if (u > hi[ax] - w[ax]) return ramp((hi[ax] - u) / w[ax]);
    return 1.0;
  };
  for (std::size_t ix = 0; ix < grid.n[0]; ix++) {
    const double x = grid.coord(0, ix);
    double env = envelope(0, x);
    double phase = k0[0] * x;
    for (std::size_t iy = 0; iy < grid.n[1]; iy++) {
      double e = env;
      double ph = phase;
      if (grid.dim == 2) {
        const double y = grid.coord(1, iy);
        e *= envelope(1, y);
        ph += k0[1] * y;
      }
      f.values[grid.index(ix, iy)] = std::polar(e, ph);
    }
  }
  f.normalize();
  guard_seam(f);
  return f;
}

}  // namespace slicesim
