#include "core/waveform.h"

#include <cmath>

#include "core/error.h"

namespace tsel {

Waveform::Waveform(std::size_t channels, std::size_t frames, int sample_rate)
    : channels_(channels),
      frames_(frames),
      sample_rate_(sample_rate),
      samples_(channels * frames, 0.0) {
  validate();
}

Waveform Waveform::from_interleaved(std::span<const double> data,
                                    std::size_t channels, int sample_rate) {
  if (channels == 0 || data.size() % channels != 0) {
    fail(Status::kInvalidArgument, "interleaved size not divisible by channels");
  }
  Waveform w(channels, data.size() / channels, sample_rate);
  for (std::size_t n = 0; n < w.frames_; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      w.at(c, n) = data[n * channels + c];
    }
  }
  return w;
}

Waveform Waveform::extract_channel(std::size_t c) const {
  if (c >= channels_) {
    fail(Status::kInvalidArgument, "channel index out of range");
  }
  Waveform out(1, frames_, sample_rate_);
  auto src = channel(c);
  auto dst = out.channel(0);
  for (std::size_t n = 0; n < frames_; ++n) dst[n] = src[n];
  return out;
}

void Waveform::validate() const {
  if (channels_ < 1 || frames_ < 1) {
    fail(Status::kInvalidArgument, "waveform must have at least 1 channel and 1 frame");
  }
  if (sample_rate_ <= 0) {
    fail(Status::kInvalidArgument, "sample rate must be positive");
  }
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace tsel
