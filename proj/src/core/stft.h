#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/waveform.h"

namespace tsel {

enum class WindowType { kHann, kRectangular };

struct StftParams {
  int win_length = 200;  // 25 ms at 8 kHz
  int hop = 80;          // 10 ms
  int n_fft = 512;       // one-sided dimension 257
  WindowType window = WindowType::kHann;

  int num_bins() const { return n_fft / 2 + 1; }
  void validate() const;  // hop <= win_length <= n_fft, n_fft power of two

  bool operator==(const StftParams&) const = default;
};

// Analysis window of length win_length (periodic Hann or rectangular).
std::vector<double> make_window(const StftParams& p);

// Relative ripple of the interior window-square overlap sum. Zero for
// COLA-exact configurations (e.g. rectangular with hop dividing win_length);
// the 25 ms / 10 ms Hann default measures ≈0.17.
double overlap_deviation(const StftParams& p);

// True when the window-square overlap sum stays bounded away from zero, i.e.
// NOLA holds and the inverse transform reconstructs exactly.
bool reconstruction_valid(const StftParams& p);

// C x T x F one-sided complex STFT tensor.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t channels, std::size_t frames_t, const StftParams& params,
              int sample_rate = kDefaultSampleRate, long source_length = -1);

  std::size_t channels() const { return channels_; }
  std::size_t frames() const { return frames_t_; }
  std::size_t bins() const { return bins_f_; }
  const StftParams& params() const { return params_; }
  int sample_rate() const { return sample_rate_; }
  long source_length() const { return source_length_; }

  std::complex<double>& at(std::size_t c, std::size_t t, std::size_t f) {
    return data_[(c * frames_t_ + t) * bins_f_ + f];
  }
  const std::complex<double>& at(std::size_t c, std::size_t t, std::size_t f) const {
    return data_[(c * frames_t_ + t) * bins_f_ + f];
  }

  std::vector<std::complex<double>>& data() { return data_; }
  const std::vector<std::complex<double>>& data() const { return data_; }

  Spectrogram extract_channel(std::size_t c) const;

 private:
  std::size_t channels_ = 0;
  std::size_t frames_t_ = 0;
  std::size_t bins_f_ = 0;
  StftParams params_;
  int sample_rate_ = kDefaultSampleRate;
  long source_length_ = -1;
  std::vector<std::complex<double>> data_;
};

// Centered analysis: the signal is reflection-padded by n_fft/2 so frame t is
// centered at sample t*hop; T = N/hop + 1. Errors on signals shorter than one
// window.
Spectrogram stft(const Waveform& x, const StftParams& p);

// Overlap-add synthesis normalized by the per-sample window-square sum,
// trimmed to the source length recorded at analysis time. Errors when
// reconstruction_valid(p) fails.
Waveform istft(const Spectrogram& s);

// Reflection padding with index folding (supports pad > length - 1).
std::vector<double> reflect_pad(std::span<const double> x, std::size_t pad);

}  // namespace tsel
