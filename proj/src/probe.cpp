#include "slicesim/probe.hpp"

#include <cmath>
#include <numbers>

#include "slicesim/fft.hpp"
#include "slicesim/kernels.hpp"

namespace slicesim {

ProbeUncertainty probe_uncertainty(const ProbeSignal& sig) {
  const std::size_t n = sig.samples.size();
  if (n < 64) throw ConfigError("probe_uncertainty: need at least 64 samples");
  double peak = 0;
  for (const auto& s : sig.samples) peak = std::max(peak, std::abs(s));
  if (peak <= 0) throw ConfigError("probe_uncertainty: empty signal");
  if (std::abs(sig.samples.front()) > 1e-6 * peak ||
      std::abs(sig.samples.back()) > 1e-6 * peak)
    throw ConfigError("probe_uncertainty: signal not decayed at the window ends");

  ProbeUncertainty out;
  {
    kernels::KahanSum w, wt, wtt;
    for (std::size_t i = 0; i < n; i++) {
      const double t = double(i) * sig.dt_sample;
      const double rho = std::norm(sig.samples[i]);
      w.add(rho);
      wt.add(rho * t);
      wtt.add(rho * t * t);
    }
    const double m1 = wt.value() / w.value();
    const double m2 = wtt.value() / w.value();
    out.sigma_t = std::sqrt(std::max(0.0, m2 - m1 * m1));
  }
  {
    std::vector<cplx> spec(sig.samples);
    fft::forward(spec);
    const double domega = 2.0 * std::numbers::pi / (double(n) * sig.dt_sample);
    kernels::KahanSum w, wo, woo;
    for (std::size_t j = 0; j < n; j++) {
      const double m = (j <= (n - 1) / 2) ? double(j) : double(j) - double(n);
      const double omega = m * domega;
      const double rho = std::norm(spec[j]);
      w.add(rho);
      wo.add(rho * omega);
      woo.add(rho * omega * omega);
    }
    const double m1 = wo.value() / w.value();
    const double m2 = woo.value() / w.value();
    out.sigma_omega = std::sqrt(std::max(0.0, m2 - m1 * m1));
  }
  out.product = out.sigma_t * out.sigma_omega;
  return out;
}

}  // namespace slicesim
