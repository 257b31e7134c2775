#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "slicesim/errors.hpp"

namespace slicesim {

using cplx = std::complex<double>;

// Uniform periodic grid, 1D or 2D. Row-major storage: index = ix * ny + iy.
struct Grid {
  int dim = 1;
  std::array<double, 2> lo{0, 0};
  std::array<double, 2> hi{1, 1};
  std::array<std::size_t, 2> n{8, 1};

  static Grid make_1d(double lo, double hi, std::size_t n);
  static Grid make_2d(double lox, double hix, std::size_t nx, double loy, double hiy,
                      std::size_t ny);

  double spacing(int axis) const { return (hi[axis] - lo[axis]) / double(n[axis]); }
  double min_spacing() const {
    return dim == 1 ? spacing(0) : std::min(spacing(0), spacing(1));
  }
  double cell_volume() const { return dim == 1 ? spacing(0) : spacing(0) * spacing(1); }
  std::size_t size() const { return n[0] * n[1]; }
  double coord(int axis, std::size_t i) const { return lo[axis] + double(i) * spacing(axis); }
  std::size_t index(std::size_t ix, std::size_t iy = 0) const { return ix * n[1] + iy; }
  // largest representable wavenumber
  double k_max() const { return std::numbers::pi / min_spacing(); }
  // FFT-ordered wavenumbers for one axis
  std::vector<double> wavenumbers(int axis) const;

  bool operator==(const Grid&) const = default;
};

// Complex one-body field on a Grid, with its own units. Value semantics; all
// operations that evolve a field take it by value and return the new one.
struct WaveField {
  Grid grid;
  std::vector<cplx> values;
  double time = 0.0;
  double mass = 1.0;
  double hbar = 1.0;

  double norm() const;   // sum |psi|^2 * cell_volume
  void normalize();      // rescale to unit norm
  cplx at(std::size_t ix, std::size_t iy = 0) const { return values[grid.index(ix, iy)]; }
};

// Fraction of the norm lying within `width` of the periodic seam (any axis).
double seam_norm_fraction(const WaveField& f, double width);

}  // namespace slicesim
