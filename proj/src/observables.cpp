#include "slicesim/observables.hpp"

#include <cmath>

#include "slicesim/fft.hpp"
#include "slicesim/kernels.hpp"

namespace slicesim {

std::vector<cplx> spectrum(const WaveField& f) {
  const Grid& g = f.grid;
  std::vector<cplx> s(f.values);
  if (g.dim == 1) {
    fft::forward(s);
    return s;
  }
  // rows along y (contiguous), then columns along x via transpose
  fft::Plan py(g.n[1]);
  py.forward_rows(s, g.n[0], g.n[1]);
  std::vector<cplx> t(s.size());
  kernels::transpose(s, t, g.n[0], g.n[1]);
  fft::Plan px(g.n[0]);
  px.forward_rows(t, g.n[1], g.n[0]);
  kernels::transpose(t, s, g.n[1], g.n[0]);
  return s;
}

std::vector<cplx> spectral_gradient(const WaveField& f, int axis) {
  const Grid& g = f.grid;
  std::vector<cplx> s = spectrum(f);
  const auto kx = g.wavenumbers(0);
  const auto ky = g.dim == 2 ? g.wavenumbers(1) : std::vector<double>{0.0};
  for (std::size_t ix = 0; ix < g.n[0]; ix++)
    for (std::size_t iy = 0; iy < g.n[1]; iy++) {
      const double k = axis == 0 ? kx[ix] : ky[iy];
      s[g.index(ix, iy)] *= cplx(0, k);
    }
  // inverse transform
  if (g.dim == 1) {
    fft::inverse(s);
    return s;
  }
  fft::Plan py(g.n[1]);
  py.inverse_rows(s, g.n[0], g.n[1]);
  std::vector<cplx> t(s.size());
  kernels::transpose(s, t, g.n[0], g.n[1]);
  fft::Plan px(g.n[0]);
  px.inverse_rows(t, g.n[1], g.n[0]);
  kernels::transpose(t, s, g.n[1], g.n[0]);
  return s;
}

FieldObservables observables(const WaveField& f, std::span<const double> potential) {
  const Grid& g = f.grid;
  FieldObservables out;
  const double vol = g.cell_volume();

  // position moments
  kernels::KahanSum nrm, pot_e;
  std::array<kernels::KahanSum, 2> sx, sxx;
  for (std::size_t ix = 0; ix < g.n[0]; ix++) {
    const double x = g.coord(0, ix);
    for (std::size_t iy = 0; iy < g.n[1]; iy++) {
      const std::size_t idx = g.index(ix, iy);
      const double rho = std::norm(f.values[idx]);
      nrm.add(rho);
      sx[0].add(rho * x);
      sxx[0].add(rho * x * x);
      if (g.dim == 2) {
        const double y = g.coord(1, iy);
        sx[1].add(rho * y);
        sxx[1].add(rho * y * y);
      }
      if (!potential.empty()) pot_e.add(rho * potential[idx]);
    }
  }
  const double total = nrm.value();
  out.norm = total * vol;
  for (int ax = 0; ax < g.dim; ax++) {
    const double m1 = sx[ax].value() / total;
    const double m2 = sxx[ax].value() / total;
    out.mean_x[ax] = m1;
    out.sigma_x[ax] = std::sqrt(std::max(0.0, m2 - m1 * m1));
  }

  // momentum moments from the spectrum
  std::vector<cplx> s = spectrum(f);
  const auto kx = g.wavenumbers(0);
  const auto ky = g.dim == 2 ? g.wavenumbers(1) : std::vector<double>{0.0};
  kernels::KahanSum sw;
  std::array<kernels::KahanSum, 2> sk, skk;
  kernels::KahanSum sk2;  // total |k|^2 for kinetic energy
  for (std::size_t ix = 0; ix < g.n[0]; ix++)
    for (std::size_t iy = 0; iy < g.n[1]; iy++) {
      const double w = std::norm(s[g.index(ix, iy)]);
      sw.add(w);
      sk[0].add(w * kx[ix]);
      skk[0].add(w * kx[ix] * kx[ix]);
      if (g.dim == 2) {
        sk[1].add(w * ky[iy]);
        skk[1].add(w * ky[iy] * ky[iy]);
      }
      sk2.add(w * (kx[ix] * kx[ix] + (g.dim == 2 ? ky[iy] * ky[iy] : 0.0)));
    }
  const double wtot = sw.value();
  for (int ax = 0; ax < g.dim; ax++) {
    const double m1 = sk[ax].value() / wtot;
    const double m2 = skk[ax].value() / wtot;
    out.mean_p[ax] = f.hbar * m1;
    out.sigma_p[ax] = f.hbar * std::sqrt(std::max(0.0, m2 - m1 * m1));
  }
  out.kinetic_energy =
      (f.hbar * f.hbar / (2.0 * f.mass)) * (sk2.value() / wtot) * out.norm;
  out.energy = out.kinetic_energy + pot_e.value() * vol;
  return out;
}

std::array<double, 2> momentum_from_flux(const WaveField& f) {
  std::array<double, 2> p{0, 0};
  for (int ax = 0; ax < f.grid.dim; ax++) {
    std::vector<cplx> d = spectral_gradient(f, ax);
    p[ax] = f.hbar * kernels::imag_dot(f.values, d) * f.grid.cell_volume();
  }
  return p;
}

}  // namespace slicesim
