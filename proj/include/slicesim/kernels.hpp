#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Data-parallel building blocks. Every kernel exists twice: a plain serial
// reference under kernels::serial and an OpenMP version under kernels::par.
// The parallel versions are arithmetic-identical to the serial ones: maps are
// elementwise, and reductions use a fixed block decomposition whose partial
// sums are combined in block order, so results do not depend on the thread
// count. Tests assert bitwise equality between the two families.

namespace slicesim::kernels {

using cplx = std::complex<double>;

// Fixed reduction block; changing it changes rounding, so it is a constant,
// not a tuning knob.
inline constexpr std::size_t kReductionBlock = 4096;

bool parallel_enabled();
void set_parallel(bool on);
int max_threads();

namespace serial {

void scale(std::span<cplx> a, double s);
void scale(std::span<cplx> a, cplx s);
// a[i] *= b[i]
void multiply(std::span<cplx> a, std::span<const cplx> b);
// a[i] *= exp(-i * theta[i])
void phase_rotate(std::span<cplx> a, std::span<const double> theta);

// sum |a[i]|^2 (Neumaier-compensated, blocked)
double sum_abs2(std::span<const cplx> a);
// sum w[i] * |a[i]|^2
double weighted_abs2(std::span<const cplx> a, std::span<const double> w);
// sum conj(a[i]) * b[i]
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
// sum Im(conj(a[i]) * b[i])
double imag_dot(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace serial

namespace par {

void scale(std::span<cplx> a, double s);
void scale(std::span<cplx> a, cplx s);
void multiply(std::span<cplx> a, std::span<const cplx> b);
void phase_rotate(std::span<cplx> a, std::span<const double> theta);

double sum_abs2(std::span<const cplx> a);
double weighted_abs2(std::span<const cplx> a, std::span<const double> w);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double imag_dot(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace par

namespace serial {
void transpose(std::span<const cplx> src, std::span<cplx> dst, std::size_t nrows,
               std::size_t ncols);
}
namespace par {
void transpose(std::span<const cplx> src, std::span<cplx> dst, std::size_t nrows,
               std::size_t ncols);
}
void transpose(std::span<const cplx> src, std::span<cplx> dst, std::size_t nrows,
               std::size_t ncols);

// Dispatchers honoring the global switch.
void scale(std::span<cplx> a, double s);
void scale(std::span<cplx> a, cplx s);
void multiply(std::span<cplx> a, std::span<const cplx> b);
void phase_rotate(std::span<cplx> a, std::span<const double> theta);
double sum_abs2(std::span<const cplx> a);
double weighted_abs2(std::span<const cplx> a, std::span<const double> w);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double imag_dot(std::span<const cplx> a, std::span<const cplx> b);

// Deterministic compensated accumulator (Neumaier). Used for long-running
// ledger totals so the norm identity holds at 1e-10 over 1e5 steps.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace slicesim::kernels
