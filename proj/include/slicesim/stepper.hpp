#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "slicesim/fft.hpp"
#include "slicesim/grid.hpp"
#include "slicesim/potential.hpp"

namespace slicesim {

struct StepperConfig {
  double dt = 0;
  long max_steps = std::numeric_limits<long>::max();
};

// Checks dt against the potential phase-wrap bound (dt |V| / hbar < 0.5) and
// the kinetic band-edge bound (dt hbar k_max^2 / 2m < 1.5).
void validate_stepper(const StepperConfig& cfg, const Grid& grid, const Potential& pot,
                      double mass, double hbar);

// Strang split-operator propagator with spectral kinetic steps, fixed dt.
// Unitary up to roundoff; free evolution is exact in dt.
class Stepper {
 public:
  Stepper(const Grid& grid, Potential pot, StepperConfig cfg, double mass, double hbar);

  // one step of dt; pure field -> field
  WaveField step(WaveField f) const;

  const StepperConfig& config() const { return cfg_; }
  const Potential& potential() const { return pot_; }

 private:
  void apply_kinetic(std::vector<cplx>& v) const;
  void apply_half_potential(std::vector<cplx>& v, double t_mid) const;

  Grid grid_;
  Potential pot_;
  StepperConfig cfg_;
  double mass_, hbar_;
  std::vector<double> kin_theta_;       // hbar k^2 dt / 2m, k-space layout
  std::shared_ptr<fft::Plan> plan_x_, plan_y_;
  mutable std::vector<double> vbuf_;    // midpoint potential scratch
  mutable std::vector<double> vtheta_;  // V dt / (2 hbar)
  mutable std::vector<cplx> scratch_;   // 2D transpose scratch
};

struct EvolveObserver {
  long cadence = 1;  // invoke every `cadence` steps
  std::function<void(const WaveField&)> fn;
};

// One-shot step (constructs the propagator; prefer Stepper for loops).
WaveField step(WaveField f, const Potential& pot, const StepperConfig& cfg);

// Repeated stepping to t_final (rounded up to a whole number of steps).
// Observers receive the state read-only: after construction and then after
// every cadence-th step.
WaveField evolve(WaveField f, const Potential& pot, const StepperConfig& cfg,
                 double t_final, const std::vector<EvolveObserver>& observers = {});

}  // namespace slicesim
