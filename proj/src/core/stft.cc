#include "core/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.h"
#include "core/fft.h"

namespace tsel {

void StftParams::validate() const {
  if (win_length < 1 || hop < 1 || n_fft < 2) {
    fail(Status::kInvalidArgument, "STFT params must be positive");
  }
  if (!(hop <= win_length && win_length <= n_fft)) {
    fail(Status::kInvalidArgument, "require hop <= win_length <= n_fft");
  }
  if (!is_power_of_two(static_cast<std::size_t>(n_fft))) {
    fail(Status::kInvalidArgument, "n_fft must be a power of two");
  }
}

std::vector<double> make_window(const StftParams& p) {
  p.validate();
  std::vector<double> w(static_cast<std::size_t>(p.win_length), 1.0);
  if (p.window == WindowType::kHann) {
    for (int n = 0; n < p.win_length; ++n) {
      w[static_cast<std::size_t>(n)] =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / p.win_length);
    }
  }
  return w;
}

namespace {

// Window-square overlap sum over enough hops to expose the steady state.
std::vector<double> interior_overlap_sum(const StftParams& p) {
  auto w = make_window(p);
  const int span_hops = 64;
  std::vector<double> acc(static_cast<std::size_t>(span_hops * p.hop + p.win_length), 0.0);
  for (int t = 0; t <= span_hops; ++t) {
    for (int n = 0; n < p.win_length; ++n) {
      acc[static_cast<std::size_t>(t * p.hop + n)] +=
          w[static_cast<std::size_t>(n)] * w[static_cast<std::size_t>(n)];
    }
  }
  // Keep only positions covered by the full set of overlapping windows.
  std::size_t lo = static_cast<std::size_t>(p.win_length);
  std::size_t hi = acc.size() - static_cast<std::size_t>(p.win_length);
  if (lo >= hi) fail(Status::kInvalidArgument, "window too long for overlap probe");
  return {acc.begin() + static_cast<long>(lo), acc.begin() + static_cast<long>(hi)};
}

}  // namespace

double overlap_deviation(const StftParams& p) {
  auto interior = interior_overlap_sum(p);
  double lo = *std::min_element(interior.begin(), interior.end());
  double hi = *std::max_element(interior.begin(), interior.end());
  double mean = 0.0;
  for (double v : interior) mean += v;
  mean /= static_cast<double>(interior.size());
  if (mean <= 0.0) return 1.0;
  return (hi - lo) / mean;
}

bool reconstruction_valid(const StftParams& p) {
  auto interior = interior_overlap_sum(p);
  double lo = *std::min_element(interior.begin(), interior.end());
  double hi = *std::max_element(interior.begin(), interior.end());
  return hi > 0.0 && lo > 1e-8 * hi;
}

Spectrogram::Spectrogram(std::size_t channels, std::size_t frames_t,
                         const StftParams& params, int sample_rate,
                         long source_length)
    : channels_(channels),
      frames_t_(frames_t),
      bins_f_(static_cast<std::size_t>(params.num_bins())),
      params_(params),
      sample_rate_(sample_rate),
      source_length_(source_length),
      data_(channels * frames_t * bins_f_, {0.0, 0.0}) {
  params_.validate();
  if (channels_ < 1 || frames_t_ < 1) {
    fail(Status::kInvalidArgument, "spectrogram must have at least 1 channel and 1 frame");
  }
}

Spectrogram Spectrogram::extract_channel(std::size_t c) const {
  if (c >= channels_) fail(Status::kInvalidArgument, "channel index out of range");
  Spectrogram out(1, frames_t_, params_, sample_rate_, source_length_);
  for (std::size_t t = 0; t < frames_t_; ++t) {
    for (std::size_t f = 0; f < bins_f_; ++f) out.at(0, t, f) = at(c, t, f);
  }
  return out;
}

std::vector<double> reflect_pad(std::span<const double> x, std::size_t pad) {
  if (x.empty()) fail(Status::kInvalidArgument, "cannot pad empty signal");
  const long n = static_cast<long>(x.size());
  std::vector<double> out(x.size() + 2 * pad);
  const long period = 2 * (n - 1);
  for (long i = 0; i < static_cast<long>(out.size()); ++i) {
    long src = i - static_cast<long>(pad);
    if (n == 1) {
      out[static_cast<std::size_t>(i)] = x[0];
      continue;
    }
    long m = src % period;
    if (m < 0) m += period;
    if (m >= n) m = period - m;
    out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(m)];
  }
  return out;
}

Spectrogram stft(const Waveform& x, const StftParams& p) {
  x.validate();
  p.validate();
  if (x.frames() < static_cast<std::size_t>(p.win_length)) {
    fail(Status::kInvalidArgument, "signal too short");
  }
  const std::size_t pad = static_cast<std::size_t>(p.n_fft) / 2;
  const std::size_t frames_t = x.frames() / static_cast<std::size_t>(p.hop) + 1;
  const int offset = (p.n_fft - p.win_length) / 2;  // window centered in the frame

  Spectrogram out(x.channels(), frames_t, p, x.sample_rate(),
                  static_cast<long>(x.frames()));
  Fft fft(static_cast<std::size_t>(p.n_fft));
  auto window = make_window(p);
  std::vector<double> frame(static_cast<std::size_t>(p.n_fft));
  std::vector<std::complex<double>> bins(out.bins());

  for (std::size_t c = 0; c < x.channels(); ++c) {
    auto padded = reflect_pad(x.channel(c), pad);
    for (std::size_t t = 0; t < frames_t; ++t) {
      std::fill(frame.begin(), frame.end(), 0.0);
      const std::size_t start = t * static_cast<std::size_t>(p.hop);
      for (int n = 0; n < p.win_length; ++n) {
        frame[static_cast<std::size_t>(offset + n)] =
            window[static_cast<std::size_t>(n)] * padded[start + static_cast<std::size_t>(offset + n)];
      }
      fft.forward_real(frame, bins);
      for (std::size_t f = 0; f < out.bins(); ++f) out.at(c, t, f) = bins[f];
    }
  }
  return out;
}

Waveform istft(const Spectrogram& s) {
  const StftParams& p = s.params();
  p.validate();
  if (!reconstruction_valid(p)) {
    fail(Status::kInvalidArgument, "reconstruction not guaranteed");
  }
  const std::size_t pad = static_cast<std::size_t>(p.n_fft) / 2;
  const std::size_t hop = static_cast<std::size_t>(p.hop);
  const std::size_t padded_len = (s.frames() - 1) * hop + static_cast<std::size_t>(p.n_fft);
  const int offset = (p.n_fft - p.win_length) / 2;

  std::size_t out_len = s.source_length() >= 0
                            ? static_cast<std::size_t>(s.source_length())
                            : (s.frames() - 1) * hop;
  if (out_len == 0) out_len = hop;
  if (out_len + pad > padded_len) {
    fail(Status::kShapeMismatch, "frame count inconsistent with source length");
  }

  Fft fft(static_cast<std::size_t>(p.n_fft));
  auto window = make_window(p);
  std::vector<double> frame(static_cast<std::size_t>(p.n_fft));
  std::vector<std::complex<double>> bins(s.bins());

  Waveform out(s.channels(), out_len, s.sample_rate());
  std::vector<double> acc(padded_len);
  std::vector<double> den(padded_len);

  for (std::size_t c = 0; c < s.channels(); ++c) {
    std::fill(acc.begin(), acc.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (std::size_t t = 0; t < s.frames(); ++t) {
      for (std::size_t f = 0; f < s.bins(); ++f) bins[f] = s.at(c, t, f);
      fft.inverse_real(bins, frame);
      const std::size_t start = t * hop;
      for (int n = 0; n < p.win_length; ++n) {
        const double w = window[static_cast<std::size_t>(n)];
        const std::size_t idx = start + static_cast<std::size_t>(offset + n);
        acc[idx] += w * frame[static_cast<std::size_t>(offset + n)];
        den[idx] += w * w;
      }
    }
    auto dst = out.channel(c);
    for (std::size_t i = 0; i < out_len; ++i) {
      const double d = den[pad + i];
      dst[i] = d > 0.0 ? acc[pad + i] / d : 0.0;
    }
  }
  return out;
}

}  // namespace tsel
