#pragma once

#include <complex>
#include <string>
#include <vector>

#include "core/stft.h"

namespace tsel {

inline constexpr double kMaskCeiling = 4.0;  // magnitude clamp for oracle S/Y
inline constexpr double kDivEps = 1e-8;

enum class MaskKind { kComplex, kReal };

// T x F time-frequency mask. Real masks keep imaginary parts exactly zero and
// real parts in [0, 1]; complex masks have magnitudes clamped to kMaskCeiling.
class TfMask {
 public:
  TfMask() = default;
  TfMask(std::size_t frames_t, std::size_t bins_f, MaskKind kind);

  std::size_t frames() const { return frames_t_; }
  std::size_t bins() const { return bins_f_; }
  MaskKind kind() const { return kind_; }

  std::complex<double>& at(std::size_t t, std::size_t f) {
    return values_[t * bins_f_ + f];
  }
  const std::complex<double>& at(std::size_t t, std::size_t f) const {
    return values_[t * bins_f_ + f];
  }

  std::vector<std::complex<double>>& values() { return values_; }
  const std::vector<std::complex<double>>& values() const { return values_; }

  void validate() const;

 private:
  std::size_t frames_t_ = 0;
  std::size_t bins_f_ = 0;
  MaskKind kind_ = MaskKind::kComplex;
  std::vector<std::complex<double>> values_;
};

struct MaskPair {
  TfMask target;
  TfMask interferer;
};

// Ideal complex mask S/Y on the given channel; bins with |Y| < kDivEps emit 0
// and magnitudes are clamped at kMaskCeiling.
TfMask oracle_complex_mask(const Spectrogram& target_image,
                           const Spectrogram& mixture, int channel);

// Ideal ratio mask |S| / (|S| + sum|B_i| + eps) plus its complement.
MaskPair oracle_real_mask(const Spectrogram& target_image,
                          const std::vector<Spectrogram>& interferer_images,
                          int channel);

// Elementwise 1 - m (complex subtraction); kind preserved.
TfMask complement(const TfMask& m);

// Binary container: magic, dims, kind byte, row-major float64 (re, im) pairs.
// See docs/formats.md for the byte-exact layout.
void save_mask(const TfMask& m, const std::string& path);
TfMask load_mask(const std::string& path, long expected_frames = -1,
                 long expected_bins = -1);

}  // namespace tsel
