#pragma once

#include <vector>

#include "core/geometry.h"
#include "core/waveform.h"

namespace tsel {

struct Rir {
  std::vector<double> taps;
  int sample_rate = kDefaultSampleRate;
};

enum class AbsorptionModel { kEyring, kSabine };

struct RirOptions {
  int max_order = 17;
  double speed_of_sound = kSpeedOfSound;
  int sinc_taps = 81;  // Hann-windowed sinc for fractional delays
  AbsorptionModel absorption = AbsorptionModel::kEyring;
  int sample_rate = kDefaultSampleRate;
};

// Uniform wall reflection coefficient for the requested decay time.
double wall_reflection_coefficient(const Vec3& room_dims, double rt60,
                                   AbsorptionModel model);

// Shoebox image-source model; amplitude of each image is
// beta^reflections / (4*pi*dist), placed with windowed-sinc interpolation.
// Returns one RIR per microphone.
std::vector<Rir> simulate_rir(const RoomScenario& scenario, int source_index,
                              const RirOptions& options = {});

struct RenderResult {
  Waveform mixture;                   // C x N
  std::vector<Waveform> clean_images; // per-source reverberant image at the array
};

// Convolves each single-channel dry source with its RIRs and sums:
// mixture[c] = sum_i conv(source_i, rir_{i,c}). Images are returned separately.
RenderResult render_mixture(const RoomScenario& scenario,
                            const std::vector<Waveform>& dry_sources,
                            const RirOptions& options = {});

// argmax |taps|, i.e. the direct-path arrival for anechoic responses.
std::size_t direct_path_peak(const Rir& rir);

// Backward-integrated (Schroeder) decay, fitted between -5 and -25 dB.
double schroeder_t60(const Rir& rir);

}  // namespace tsel
