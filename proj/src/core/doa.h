#pragma once

#include <optional>
#include <vector>

#include "core/geometry.h"
#include "core/mask.h"
#include "core/stft.h"

namespace tsel {

inline constexpr int kNumAzimuths = 181;  // integer degrees 0..180
inline constexpr double kDoaSigmaDefault = 6.0;

// Likelihood over the 181 azimuth candidates; index i is i degrees.
struct DoaCoding {
  std::vector<double> likelihoods = std::vector<double>(kNumAzimuths, 0.0);
};

// |a - b| on the frontal half-plane; inputs must lie in [0, 180].
double angular_distance(double a_deg, double b_deg);

// d_i = exp(-d(theta_i, theta)^2 / sigma^2) when theta is present, else zeros.
DoaCoding gaussian_coding(std::optional<double> theta_deg,
                          double sigma = kDoaSigmaDefault);

// Index of the maximum, ties broken toward the smaller angle. Errors on an
// all-zero coding ("no DOA evidence").
int argmax_angle(const DoaCoding& coding);

// Expected per-mic far-field phase for every candidate angle:
// phase[i][f][c] = 2*pi*f_hz * axial_offset(c) * cos(theta_i) / v.
class SteeringTable {
 public:
  SteeringTable(const ArrayGeometry& geometry, const StftParams& params,
                int sample_rate, double speed_of_sound = kSpeedOfSound);

  std::size_t bins() const { return bins_f_; }
  std::size_t channels() const { return channels_; }

  double phase(int angle_deg, std::size_t f, std::size_t c) const {
    return phases_[(static_cast<std::size_t>(angle_deg) * bins_f_ + f) * channels_ + c];
  }

 private:
  std::size_t bins_f_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> phases_;
};

// Steered-response power over the masked spectrogram, affinely rescaled to
// [0, 1]. Requires >= 2 channels.
DoaCoding estimate_doa(const TfMask& mask, const Spectrogram& mixture,
                       const SteeringTable& table);

enum class DoaErrorNorm { kSquared, kAbsolute };

// sum_i (d_hat_i - d_i)^2, or sum of absolute differences with kAbsolute.
double doa_mse(const DoaCoding& estimate, const DoaCoding& truth,
               DoaErrorNorm norm = DoaErrorNorm::kSquared);

}  // namespace tsel
