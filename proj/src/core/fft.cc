#include "core/fft.h"

#include <cmath>
#include <numbers>

#include "core/error.h"

namespace tsel {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t size) : size_(size) {
  if (!is_power_of_two(size_)) {
    fail(Status::kInvalidArgument, "FFT size must be a power of two, got " +
                                       std::to_string(size_));
  }
  bit_reverse_.resize(size_);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < size_) ++bits;
  for (std::size_t i = 0; i < size_; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bit_reverse_[i] = r;
  }
  twiddles_.resize(size_ / 2);
  for (std::size_t k = 0; k < size_ / 2; ++k) {
    double phi = -2.0 * std::numbers::pi * static_cast<double>(k) /
                 static_cast<double>(size_);
    twiddles_[k] = {std::cos(phi), std::sin(phi)};
  }
}

void Fft::transform(std::span<std::complex<double>> data, bool inverse) const {
  if (data.size() != size_) {
    fail(Status::kShapeMismatch, "FFT buffer size mismatch");
  }
  for (std::size_t i = 0; i < size_; ++i) {
    std::size_t j = bit_reverse_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= size_; len <<= 1) {
    std::size_t stride = size_ / len;
    for (std::size_t base = 0; base < size_; base += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        std::complex<double> a = data[base + k];
        std::complex<double> b = data[base + k + len / 2] * w;
        data[base + k] = a + b;
        data[base + k + len / 2] = a - b;
      }
    }
  }
  if (inverse) {
    double scale = 1.0 / static_cast<double>(size_);
    for (auto& v : data) v *= scale;
  }
}

void Fft::forward(std::span<std::complex<double>> data) const {
  transform(data, false);
}

void Fft::inverse(std::span<std::complex<double>> data) const {
  transform(data, true);
}

void Fft::forward_real(std::span<const double> in,
                       std::span<std::complex<double>> out) const {
  if (in.size() != size_ || out.size() != size_ / 2 + 1) {
    fail(Status::kShapeMismatch, "real FFT buffer size mismatch");
  }
  std::vector<std::complex<double>> buf(size_);
  for (std::size_t i = 0; i < size_; ++i) buf[i] = {in[i], 0.0};
  transform(buf, false);
  for (std::size_t k = 0; k <= size_ / 2; ++k) out[k] = buf[k];
}

void Fft::inverse_real(std::span<const std::complex<double>> in,
                       std::span<double> out) const {
  if (in.size() != size_ / 2 + 1 || out.size() != size_) {
    fail(Status::kShapeMismatch, "real iFFT buffer size mismatch");
  }
  std::vector<std::complex<double>> buf(size_);
  buf[0] = {in[0].real(), 0.0};
  buf[size_ / 2] = {in[size_ / 2].real(), 0.0};
  for (std::size_t k = 1; k < size_ / 2; ++k) {
    buf[k] = in[k];
    buf[size_ - k] = std::conj(in[k]);
  }
  transform(buf, true);
  for (std::size_t i = 0; i < size_; ++i) out[i] = buf[i].real();
}

std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.empty() || b.empty()) {
    fail(Status::kInvalidArgument, "convolution inputs must be non-empty");
  }
  std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  Fft fft(n);
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = {a[i], 0.0};
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = {b[i], 0.0};
  fft.forward(fa);
  fft.forward(fb);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft.inverse(fa);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace tsel
