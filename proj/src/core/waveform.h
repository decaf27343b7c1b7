#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsel {

inline constexpr int kDefaultSampleRate = 8000;

// C x N multichannel sample buffer, channel-major, amplitudes nominally in
// [-1, 1]. All channels have equal length.
class Waveform {
 public:
  Waveform() = default;
  Waveform(std::size_t channels, std::size_t frames,
           int sample_rate = kDefaultSampleRate);

  static Waveform from_interleaved(std::span<const double> data,
                                   std::size_t channels, int sample_rate);

  std::size_t channels() const { return channels_; }
  std::size_t frames() const { return frames_; }
  int sample_rate() const { return sample_rate_; }

  double& at(std::size_t channel, std::size_t frame) {
    return samples_[channel * frames_ + frame];
  }
  double at(std::size_t channel, std::size_t frame) const {
    return samples_[channel * frames_ + frame];
  }

  std::span<double> channel(std::size_t c) {
    return {samples_.data() + c * frames_, frames_};
  }
  std::span<const double> channel(std::size_t c) const {
    return {samples_.data() + c * frames_, frames_};
  }

  std::span<const double> data() const { return samples_; }
  std::span<double> data() { return samples_; }

  // Single-channel view of one channel, copied out.
  Waveform extract_channel(std::size_t c) const;

  void validate() const;  // throws on empty buffers or nonpositive rate

 private:
  std::size_t channels_ = 0;
  std::size_t frames_ = 0;
  int sample_rate_ = kDefaultSampleRate;
  std::vector<double> samples_;
};

double rms(std::span<const double> x);

}  // namespace tsel
