#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tsel {

bool is_power_of_two(std::size_t n);

// Radix-2 complex FFT for power-of-two sizes. Plans (twiddles, bit-reversal
// table) are built once in the constructor; execution is const and reentrant.
class Fft {
 public:
  explicit Fft(std::size_t size);

  std::size_t size() const { return size_; }

  // In-place transforms. forward() applies no scaling, inverse() scales by 1/n.
  void forward(std::span<std::complex<double>> data) const;
  void inverse(std::span<std::complex<double>> data) const;

  // Real-input transform to the one-sided spectrum (size/2 + 1 bins) and back.
  void forward_real(std::span<const double> in,
                    std::span<std::complex<double>> out) const;
  void inverse_real(std::span<const std::complex<double>> in,
                    std::span<double> out) const;

 private:
  void transform(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t size_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;  // e^{-2*pi*i*k/n}, k < n/2
};

// Full linear convolution via FFT, output length a.size() + b.size() - 1.
std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b);

}  // namespace tsel
