#pragma once

#include <array>
#include <span>
#include <vector>

#include "slicesim/grid.hpp"

namespace slicesim {

struct FieldObservables {
  double norm = 0;
  std::array<double, 2> mean_x{0, 0};
  std::array<double, 2> sigma_x{0, 0};
  std::array<double, 2> mean_p{0, 0};
  std::array<double, 2> sigma_p{0, 0};
  double energy = 0;
  double kinetic_energy = 0;
};

// Norm, position/momentum moments (momentum spectral) and <H>. `potential`
// may be empty (free) or one real value per grid point.
FieldObservables observables(const WaveField& f, std::span<const double> potential = {});

// Full FFT of the field values across all axes (row-major k layout).
std::vector<cplx> spectrum(const WaveField& f);

// Spectral derivative d(psi)/dx_axis on the grid.
std::vector<cplx> spectral_gradient(const WaveField& f, int axis);

// Kinetic momentum density integrated: m * integral of flux. Equals <p>
// spectrally for smooth fields; kept as the independent flux route.
std::array<double, 2> momentum_from_flux(const WaveField& f);

}  // namespace slicesim
