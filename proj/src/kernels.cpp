#include "slicesim/kernels.hpp"

#include <atomic>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace slicesim::kernels {

namespace {
std::atomic<bool> g_parallel{true};

struct Neumaier {
  double s = 0, c = 0;
  void add(double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// ---------------------------------------------------------------------------
// serial reference implementations
// ---------------------------------------------------------------------------
namespace serial {

void scale(std::span<cplx> a, double s) {
  for (auto& v : a) v *= s;
}

void scale(std::span<cplx> a, cplx s) {
  for (auto& v : a) v *= s;
}

void multiply(std::span<cplx> a, std::span<const cplx> b) {
  for (std::size_t i = 0; i < a.size(); i++) a[i] *= b[i];
}

void phase_rotate(std::span<cplx> a, std::span<const double> theta) {
  for (std::size_t i = 0; i < a.size(); i++)
    a[i] *= cplx(std::cos(theta[i]), -std::sin(theta[i]));
}

namespace detail {

inline double block_abs2(std::span<const cplx> a, std::size_t b, std::size_t e) {
  Neumaier acc;
  for (std::size_t i = b; i < e; i++) acc.add(std::norm(a[i]));
  return acc.value();
}

inline double block_wabs2(std::span<const cplx> a, std::span<const double> w,
                          std::size_t b, std::size_t e) {
  Neumaier acc;
  for (std::size_t i = b; i < e; i++) acc.add(w[i] * std::norm(a[i]));
  return acc.value();
}

inline cplx block_dot(std::span<const cplx> a, std::span<const cplx> b_,
                      std::size_t b, std::size_t e) {
  Neumaier re, im;
  for (std::size_t i = b; i < e; i++) {
    cplx p = std::conj(a[i]) * b_[i];
    re.add(p.real());
    im.add(p.imag());
  }
  return {re.value(), im.value()};
}

inline double block_imag_dot(std::span<const cplx> a, std::span<const cplx> b_,
                             std::size_t b, std::size_t e) {
  Neumaier acc;
  for (std::size_t i = b; i < e; i++)
    acc.add(a[i].real() * b_[i].imag() - a[i].imag() * b_[i].real());
  return acc.value();
}

}  // namespace detail

double sum_abs2(std::span<const cplx> a) {
  const std::size_t n = a.size();
  Neumaier total;
  for (std::size_t b = 0; b < n; b += kReductionBlock)
    total.add(detail::block_abs2(a, b, std::min(n, b + kReductionBlock)));
  return total.value();
}

double weighted_abs2(std::span<const cplx> a, std::span<const double> w) {
  const std::size_t n = a.size();
  Neumaier total;
  for (std::size_t b = 0; b < n; b += kReductionBlock)
    total.add(detail::block_wabs2(a, w, b, std::min(n, b + kReductionBlock)));
  return total.value();
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  Neumaier re, im;
  for (std::size_t blk = 0; blk < n; blk += kReductionBlock) {
    cplx p = detail::block_dot(a, b, blk, std::min(n, blk + kReductionBlock));
    re.add(p.real());
    im.add(p.imag());
  }
  return {re.value(), im.value()};
}

double imag_dot(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  Neumaier total;
  for (std::size_t blk = 0; blk < n; blk += kReductionBlock)
    total.add(detail::block_imag_dot(a, b, blk, std::min(n, blk + kReductionBlock)));
  return total.value();
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP implementations: elementwise maps plus block-partial reductions
// combined in block order.
// ---------------------------------------------------------------------------
namespace par {

void scale(std::span<cplx> a, double s) {
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; i++) a[i] *= s;
}

void scale(std::span<cplx> a, cplx s) {
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; i++) a[i] *= s;
}

void multiply(std::span<cplx> a, std::span<const cplx> b) {
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; i++) a[i] *= b[i];
}

void phase_rotate(std::span<cplx> a, std::span<const double> theta) {
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; i++)
    a[i] *= cplx(std::cos(theta[i]), -std::sin(theta[i]));
}

double sum_abs2(std::span<const cplx> a) {
  const std::size_t n = a.size();
  const std::size_t nblk = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(nblk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < std::ptrdiff_t(nblk); b++) {
    std::size_t lo = std::size_t(b) * kReductionBlock;
    partial[b] = serial::detail::block_abs2(a, lo, std::min(n, lo + kReductionBlock));
  }
  Neumaier total;
  for (double p : partial) total.add(p);
  return total.value();
}

double weighted_abs2(std::span<const cplx> a, std::span<const double> w) {
  const std::size_t n = a.size();
  const std::size_t nblk = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(nblk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < std::ptrdiff_t(nblk); b++) {
    std::size_t lo = std::size_t(b) * kReductionBlock;
    partial[b] = serial::detail::block_wabs2(a, w, lo, std::min(n, lo + kReductionBlock));
  }
  Neumaier total;
  for (double p : partial) total.add(p);
  return total.value();
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const std::size_t nblk = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<cplx> partial(nblk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < std::ptrdiff_t(nblk); blk++) {
    std::size_t lo = std::size_t(blk) * kReductionBlock;
    partial[blk] = serial::detail::block_dot(a, b, lo, std::min(n, lo + kReductionBlock));
  }
  Neumaier re, im;
  for (cplx p : partial) {
    re.add(p.real());
    im.add(p.imag());
  }
  return {re.value(), im.value()};
}

double imag_dot(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const std::size_t nblk = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(nblk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < std::ptrdiff_t(nblk); blk++) {
    std::size_t lo = std::size_t(blk) * kReductionBlock;
    partial[blk] = serial::detail::block_imag_dot(a, b, lo, std::min(n, lo + kReductionBlock));
  }
  Neumaier total;
  for (double p : partial) total.add(p);
  return total.value();
}

}  // namespace par

namespace serial {
void transpose(std::span<const cplx> src, std::span<cplx> dst, std::size_t nrows,
               std::size_t ncols) {
  for (std::size_t r = 0; r < nrows; r++)
    for (std::size_t c = 0; c < ncols; c++) dst[c * nrows + r] = src[r * ncols + c];
}
}  // namespace serial

namespace par {
void transpose(std::span<const cplx> src, std::span<cplx> dst, std::size_t nrows,
               std::size_t ncols) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(nrows); r++)
    for (std::size_t c = 0; c < ncols; c++)
      dst[c * nrows + std::size_t(r)] = src[std::size_t(r) * ncols + c];
}
}  // namespace par

void transpose(std::span<const cplx> src, std::span<cplx> dst, std::size_t nrows,
               std::size_t ncols) {
  if (parallel_enabled())
    par::transpose(src, dst, nrows, ncols);
  else
    serial::transpose(src, dst, nrows, ncols);
}

// ---------------------------------------------------------------------------
// dispatchers
// ---------------------------------------------------------------------------
#define SLICESIM_DISPATCH(fn, ...) \
  return parallel_enabled() ? par::fn(__VA_ARGS__) : serial::fn(__VA_ARGS__)

void scale(std::span<cplx> a, double s) {
  if (parallel_enabled())
    par::scale(a, s);
  else
    serial::scale(a, s);
}
void scale(std::span<cplx> a, cplx s) {
  if (parallel_enabled())
    par::scale(a, s);
  else
    serial::scale(a, s);
}
void multiply(std::span<cplx> a, std::span<const cplx> b) {
  if (parallel_enabled())
    par::multiply(a, b);
  else
    serial::multiply(a, b);
}
void phase_rotate(std::span<cplx> a, std::span<const double> theta) {
  if (parallel_enabled())
    par::phase_rotate(a, theta);
  else
    serial::phase_rotate(a, theta);
}
double sum_abs2(std::span<const cplx> a) { SLICESIM_DISPATCH(sum_abs2, a); }
double weighted_abs2(std::span<const cplx> a, std::span<const double> w) {
  SLICESIM_DISPATCH(weighted_abs2, a, w);
}
cplx dot(std::span<const cplx> a, std::span<const cplx> b) { SLICESIM_DISPATCH(dot, a, b); }
double imag_dot(std::span<const cplx> a, std::span<const cplx> b) {
  SLICESIM_DISPATCH(imag_dot, a, b);
}

#undef SLICESIM_DISPATCH

}  // namespace slicesim::kernels
