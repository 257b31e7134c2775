#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Complex-to-complex FFT used by the spectral propagator. Self-contained so
// that results are bit-identical across thread counts: each 1D transform is a
// fixed arithmetic sequence (table-driven radix-2, Bluestein for other
// lengths), and batched transforms parallelize across independent rows only.

namespace slicesim::fft {

using cplx = std::complex<double>;

class Plan {
 public:
  explicit Plan(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place transform, unnormalized forward (sign -1); inverse applies 1/n.
  void forward(std::span<cplx> a) const;
  void inverse(std::span<cplx> a) const;

  // Batched rows of length n, contiguous with the given stride between rows.
  void forward_rows(std::span<cplx> data, std::size_t rows, std::size_t stride) const;
  void inverse_rows(std::span<cplx> data, std::size_t rows, std::size_t stride) const;

 private:
  void exec(std::span<cplx> a, int sign) const;
  void exec_pow2(std::span<cplx> a, int sign, std::span<cplx> scratchless) const;
  void exec_bluestein(std::span<cplx> a, int sign) const;
  void rows(std::span<cplx> data, std::size_t nrows, std::size_t stride, int sign) const;

  std::size_t n_;
  bool pow2_;
  // radix-2 tables for length n (or for the Bluestein convolution length m)
  std::size_t m_ = 0;  // convolution length when Bluestein is used
  std::vector<cplx> tw_;        // forward twiddles, size len/2 for the pow2 length
  std::vector<std::size_t> rev_;
  std::vector<cplx> chirp_;     // Bluestein chirp b_j = exp(+i pi j^2 / n)
  std::vector<cplx> chirp_fft_; // FFT of the zero-padded chirp (forward sign)
  std::vector<cplx> chirp_fft_inv_;
};

// Convenience wrappers with plan caching keyed by length.
void forward(std::span<cplx> a);
void inverse(std::span<cplx> a);

}  // namespace slicesim::fft
