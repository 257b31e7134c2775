#include "slicesim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "slicesim/kernels.hpp"

namespace slicesim::fft {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

void bit_reverse_table(std::size_t n, std::vector<std::size_t>& rev) {
  rev.assign(n, 0);
  for (std::size_t i = 1, j = 0; i < n; i++) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    rev[i] = j;
  }
}

void twiddles(std::size_t n, std::vector<cplx>& tw) {
  tw.resize(n / 2);
  const double step = -2.0 * std::numbers::pi / double(n);
  for (std::size_t j = 0; j < n / 2; j++) tw[j] = std::polar(1.0, step * double(j));
}

void radix2(std::span<cplx> a, int sign, const std::vector<std::size_t>& rev,
            const std::vector<cplx>& tw) {
  const std::size_t n = a.size();
  for (std::size_t i = 1; i < n; i++) {
    std::size_t j = rev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; j++) {
        cplx w = tw[j * stride];
        if (sign > 0) w = std::conj(w);
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

Plan::Plan(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  if (n < 2) throw std::invalid_argument("fft: length must be >= 2");
  if (pow2_) {
    bit_reverse_table(n_, rev_);
    twiddles(n_, tw_);
  } else {
    m_ = next_pow2(2 * n_ - 1);
    bit_reverse_table(m_, rev_);
    twiddles(m_, tw_);
    // chirp b_j = exp(+i pi j^2 / n); j^2 taken mod 2n keeps the argument small
    chirp_.resize(n_);
    for (std::size_t j = 0; j < n_; j++) {
      std::size_t q = (j * j) % (2 * n_);
      chirp_[j] = std::polar(1.0, std::numbers::pi * double(q) / double(n_));
    }
    std::vector<cplx> v(m_, cplx(0));
    for (std::size_t j = 0; j < n_; j++) {
      v[j] = chirp_[j];
      if (j != 0) v[m_ - j] = chirp_[j];
    }
    chirp_fft_ = v;
    radix2(chirp_fft_, -1, rev_, tw_);
    for (std::size_t j = 0; j < m_; j++) v[j] = std::conj(j < n_ ? chirp_[j] : cplx(0));
    // rebuild wrapped conj chirp
    std::fill(v.begin(), v.end(), cplx(0));
    for (std::size_t j = 0; j < n_; j++) {
      v[j] = std::conj(chirp_[j]);
      if (j != 0) v[m_ - j] = std::conj(chirp_[j]);
    }
    chirp_fft_inv_ = v;
    radix2(chirp_fft_inv_, -1, rev_, tw_);
  }
}

void Plan::exec_bluestein(std::span<cplx> a, int sign) const {
  // X_k = conj(c_k) * sum_j [x_j conj(c_j)] c_{k-j}   with c = chirp (sign -1)
  std::vector<cplx> u(m_, cplx(0));
  if (sign < 0) {
    for (std::size_t j = 0; j < n_; j++) u[j] = a[j] * std::conj(chirp_[j]);
  } else {
    for (std::size_t j = 0; j < n_; j++) u[j] = a[j] * chirp_[j];
  }
  radix2(u, -1, rev_, tw_);
  const std::vector<cplx>& cf = (sign < 0) ? chirp_fft_ : chirp_fft_inv_;
  for (std::size_t j = 0; j < m_; j++) u[j] *= cf[j];
  radix2(u, +1, rev_, tw_);
  const double inv_m = 1.0 / double(m_);
  if (sign < 0) {
    for (std::size_t k = 0; k < n_; k++) a[k] = u[k] * inv_m * std::conj(chirp_[k]);
  } else {
    for (std::size_t k = 0; k < n_; k++) a[k] = u[k] * inv_m * chirp_[k];
  }
}

void Plan::exec(std::span<cplx> a, int sign) const {
  if (a.size() != n_) throw std::invalid_argument("fft: span size mismatch");
  if (pow2_)
    radix2(a, sign, rev_, tw_);
  else
    exec_bluestein(a, sign);
  if (sign > 0) {
    const double inv_n = 1.0 / double(n_);
    for (auto& v : a) v *= inv_n;
  }
}

void Plan::forward(std::span<cplx> a) const { exec(a, -1); }
void Plan::inverse(std::span<cplx> a) const { exec(a, +1); }

void Plan::rows(std::span<cplx> data, std::size_t nrows, std::size_t stride, int sign) const {
  if (kernels::parallel_enabled() && nrows > 1) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(nrows); r++)
      exec(data.subspan(std::size_t(r) * stride, n_), sign);
  } else {
    for (std::size_t r = 0; r < nrows; r++) exec(data.subspan(r * stride, n_), sign);
  }
}

void Plan::forward_rows(std::span<cplx> data, std::size_t nrows, std::size_t stride) const {
  rows(data, nrows, stride, -1);
}
void Plan::inverse_rows(std::span<cplx> data, std::size_t nrows, std::size_t stride) const {
  rows(data, nrows, stride, +1);
}

namespace {
std::mutex g_cache_mutex;
std::map<std::size_t, std::shared_ptr<Plan>> g_cache;

std::shared_ptr<Plan> cached_plan(std::size_t n) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_cache.find(n);
  if (it != g_cache.end()) return it->second;
  auto p = std::make_shared<Plan>(n);
  g_cache.emplace(n, p);
  return p;
}
}  // namespace

void forward(std::span<cplx> a) { cached_plan(a.size())->forward(a); }
void inverse(std::span<cplx> a) { cached_plan(a.size())->inverse(a); }

}  // namespace slicesim::fft
