#include "slicesim/grid.hpp"

#include <cmath>

#include "slicesim/kernels.hpp"

namespace slicesim {

namespace {
void check_axis(double lo, double hi, std::size_t n) {
  if (!(hi > lo)) throw ConfigError("grid: extent must satisfy hi > lo");
  if (n < 8) throw ConfigError("grid: need at least 8 points per axis");
}
}  // namespace

Grid Grid::make_1d(double lo_, double hi_, std::size_t n_) {
  check_axis(lo_, hi_, n_);
  Grid g;
  g.dim = 1;
  g.lo = {lo_, 0};
  g.hi = {hi_, 1};
  g.n = {n_, 1};
  return g;
}

Grid Grid::make_2d(double lox, double hix, std::size_t nx, double loy, double hiy,
                   std::size_t ny) {
  check_axis(lox, hix, nx);
  check_axis(loy, hiy, ny);
  Grid g;
  g.dim = 2;
  g.lo = {lox, loy};
  g.hi = {hix, hiy};
  g.n = {nx, ny};
  return g;
}

std::vector<double> Grid::wavenumbers(int axis) const {
  const std::size_t nn = n[axis];
  const double L = hi[axis] - lo[axis];
  std::vector<double> k(nn);
  for (std::size_t j = 0; j < nn; j++) {
    // FFT ordering: non-negative frequencies first
    double m = (j <= (nn - 1) / 2) ? double(j) : double(j) - double(nn);
    k[j] = 2.0 * std::numbers::pi * m / L;
  }
  return k;
}

double WaveField::norm() const {
  return kernels::sum_abs2(values) * grid.cell_volume();
}

void WaveField::normalize() {
  const double n = norm();
  if (!(n > 0)) throw ConfigError("field: cannot normalize zero field");
  kernels::scale(std::span<cplx>(values), 1.0 / std::sqrt(n));
}

double seam_norm_fraction(const WaveField& f, double width) {
  const Grid& g = f.grid;
  double seam = 0;
  const double total = kernels::sum_abs2(f.values);
  if (total == 0) return 0;
  for (std::size_t ix = 0; ix < g.n[0]; ix++) {
    const double x = g.coord(0, ix);
    const bool x_seam = (x - g.lo[0] < width) || (g.hi[0] - x <= width);
    for (std::size_t iy = 0; iy < g.n[1]; iy++) {
      bool near = x_seam;
      if (g.dim == 2) {
        const double y = g.coord(1, iy);
        near = near || (y - g.lo[1] < width) || (g.hi[1] - y <= width);
      }
      if (near) seam += std::norm(f.values[g.index(ix, iy)]);
    }
  }
  return seam / total;
}

}  // namespace slicesim
