#include "slicesim/stepper.hpp"

#include <cmath>
#include <memory>

#include "slicesim/fft.hpp"
#include "slicesim/kernels.hpp"

namespace slicesim {

void validate_stepper(const StepperConfig& cfg, const Grid& grid, const Potential& pot,
                      double mass, double hbar) {
  if (!(cfg.dt > 0)) throw ConfigError("stepper: dt must be positive");
  if (cfg.dt * pot.bound() / hbar >= 0.5)
    throw ConfigError("stepper: dt * max|V| / hbar >= 0.5 (potential phase wrap)");
  const double kmax = grid.k_max();
  if (cfg.dt * hbar * kmax * kmax / (2.0 * mass) >= 1.5)
    throw ConfigError("stepper: dt * hbar * k_max^2 / 2m >= 1.5 (kinetic phase wrap)");
}

Stepper::Stepper(const Grid& grid, Potential pot, StepperConfig cfg, double mass,
                 double hbar)
    : grid_(grid), pot_(std::move(pot)), cfg_(cfg), mass_(mass), hbar_(hbar) {
  validate_stepper(cfg_, grid_, pot_, mass_, hbar_);
  const auto kx = grid_.wavenumbers(0);
  const auto ky = grid_.dim == 2 ? grid_.wavenumbers(1) : std::vector<double>{0.0};
  const double c = hbar_ * cfg_.dt / (2.0 * mass_);
  kin_theta_.resize(grid_.size());
  if (grid_.dim == 1) {
    for (std::size_t i = 0; i < kx.size(); i++) kin_theta_[i] = c * kx[i] * kx[i];
  } else {
    // kinetic phases stored in the transposed (ky-major) layout used mid-step
    for (std::size_t iy = 0; iy < grid_.n[1]; iy++)
      for (std::size_t ix = 0; ix < grid_.n[0]; ix++)
        kin_theta_[iy * grid_.n[0] + ix] = c * (kx[ix] * kx[ix] + ky[iy] * ky[iy]);
    scratch_.resize(grid_.size());
  }
  plan_x_ = std::make_shared<fft::Plan>(grid_.n[0]);
  if (grid_.dim == 2) plan_y_ = std::make_shared<fft::Plan>(grid_.n[1]);
}

void Stepper::apply_kinetic(std::vector<cplx>& v) const {
  if (grid_.dim == 1) {
    plan_x_->forward(v);
    kernels::phase_rotate(v, kin_theta_);
    plan_x_->inverse(v);
    return;
  }
  const std::size_t nx = grid_.n[0], ny = grid_.n[1];
  // y transforms on contiguous rows, then x transforms in transposed layout
  plan_y_->forward_rows(v, nx, ny);
  kernels::transpose(v, scratch_, nx, ny);
  plan_x_->forward_rows(scratch_, ny, nx);
  kernels::phase_rotate(scratch_, kin_theta_);
  plan_x_->inverse_rows(scratch_, ny, nx);
  kernels::transpose(scratch_, v, ny, nx);
  plan_y_->inverse_rows(v, nx, ny);
}

void Stepper::apply_half_potential(std::vector<cplx>& v, double t_mid) const {
  if (pot_.is_free()) return;
  pot_.sample(grid_, t_mid, vbuf_);
  const double c = cfg_.dt / (2.0 * hbar_);
  vtheta_.resize(vbuf_.size());
  for (std::size_t i = 0; i < vbuf_.size(); i++) vtheta_[i] = c * vbuf_[i];
  kernels::phase_rotate(v, vtheta_);
}

WaveField Stepper::step(WaveField f) const {
  if (f.grid != grid_) throw ConfigError("stepper: field grid mismatch");
  const double t_mid = f.time + 0.5 * cfg_.dt;
  apply_half_potential(f.values, t_mid);
  apply_kinetic(f.values);
  apply_half_potential(f.values, t_mid);
  f.time += cfg_.dt;
  return f;
}

WaveField step(WaveField f, const Potential& pot, const StepperConfig& cfg) {
  Stepper s(f.grid, pot, cfg, f.mass, f.hbar);
  return s.step(std::move(f));
}

WaveField evolve(WaveField f, const Potential& pot, const StepperConfig& cfg,
                 double t_final, const std::vector<EvolveObserver>& observers) {
  if (t_final < f.time - 1e-12)
    throw ConfigError("evolve: t_final must not precede the field time");
  Stepper s(f.grid, pot, cfg, f.mass, f.hbar);
  const long n = std::lround(std::ceil((t_final - f.time) / cfg.dt - 1e-12));
  if (n > cfg.max_steps) throw ConfigError("evolve: exceeds max_steps");
  for (const auto& obs : observers)
    if (obs.fn) obs.fn(f);
  for (long i = 1; i <= n; i++) {
    f = s.step(std::move(f));
    for (const auto& obs : observers)
      if (obs.fn && (i % std::max<long>(1, obs.cadence)) == 0) obs.fn(f);
  }
  return f;
}

}  // namespace slicesim
