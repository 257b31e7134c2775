#pragma once

#include <array>

#include "slicesim/grid.hpp"

namespace slicesim {

struct Units {
  double hbar = 1.0;
  double mass = 1.0;
};

// Normalized Gaussian packet exp(-(x-c)^2 / 4 sigma^2 + i k0.x).
// Rejects under-resolved packets (sigma < 2 spacing) and any state leaving
// more than 1e-10 of its norm within 4 spacings of the periodic seam.
WaveField make_gaussian(const Grid& grid, std::array<double, 2> center, double sigma,
                        std::array<double, 2> k0, Units units = {});

// Normalized flat-envelope packet over the box [lo, hi] with raised-cosine
// edges of width 4 spacings, carrying plane-wave momentum k0.
WaveField make_rect_sheet(const Grid& grid, std::array<double, 2> lo,
                          std::array<double, 2> hi, std::array<double, 2> k0,
                          Units units = {});

}  // namespace slicesim
