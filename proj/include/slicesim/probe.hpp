#pragma once

#include <array>
#include <vector>

#include "slicesim/grid.hpp"

namespace slicesim {

// Time series of the field value at a fixed point, sampled uniformly.
struct ProbeSignal {
  std::array<double, 2> position{0, 0};
  double t_start = 0;
  double dt_sample = 0;
  std::vector<cplx> samples;
};

struct ProbeUncertainty {
  double sigma_t = 0;
  double sigma_omega = 0;
  double product = 0;
};

// Temporal / spectral widths of |s|^2 and |s_hat|^2 and their product.
// Requires >= 64 samples and a signal decayed below 1e-6 of its peak
// magnitude at both window ends.
ProbeUncertainty probe_uncertainty(const ProbeSignal& sig);

}  // namespace slicesim
