#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/geometry.h"
#include "core/mask.h"
#include "core/stft.h"

namespace tsel {

// P x T x F wrapped inter-channel phase differences, values in (-pi, pi].
struct Ipd {
  std::vector<std::pair<int, int>> pairs;
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;  // pair-major

  double at(std::size_t p, std::size_t t, std::size_t f) const {
    return values[(p * frames + t) * bins + f];
  }
  double& at(std::size_t p, std::size_t t, std::size_t f) {
    return values[(p * frames + t) * bins + f];
  }
};

// All C(C-1)/2 pairs (l, r) with l < r.
std::vector<std::pair<int, int>> all_mic_pairs(int channels);

Ipd compute_ipd(const Spectrogram& mixture,
                const std::vector<std::pair<int, int>>& pairs);

enum class FeatureKind { kAngle, kBeam };

struct SpatialFeature {
  std::size_t frames = 0;
  std::size_t bins = 0;
  FeatureKind kind = FeatureKind::kAngle;
  std::vector<double> values;

  double at(std::size_t t, std::size_t f) const { return values[t * bins + f]; }
  double& at(std::size_t t, std::size_t f) { return values[t * bins + f]; }
};

// Steering-term frequency mapping. kOneSidedBins reads the bin count of the
// one-sided spectrum as the normalizer, pi*fs*f/((F-1)*v), which coincides
// with the physical 2*pi*(f*fs/n_fft)*Delta/v; kFftSizeMinusOne uses the
// (n_fft - 1) denominator instead.
enum class SteeringConvention { kOneSidedBins, kFftSizeMinusOne };

// Mean over mic pairs of cos(ipd - expected phase difference at theta_hat);
// values in [-1, 1].
SpatialFeature df_angle(const Ipd& ipd, double theta_hat_deg,
                        const ArrayGeometry& geometry, const StftParams& params,
                        int sample_rate,
                        SteeringConvention convention = SteeringConvention::kOneSidedBins,
                        double speed_of_sound = kSpeedOfSound);

// Elementwise |B_tf| of a single-channel beam spectrum.
SpatialFeature df_beam(const Spectrogram& beam);

// Ordered named planes: the mixture channels (complex) followed by the two
// feature planes — the input contract for an external mask estimator.
class FeatureBundle {
 public:
  struct Plane {
    std::string name;
    bool is_complex = false;
    std::vector<std::complex<double>> data;  // imag 0 for real planes
  };

  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<Plane> planes;

  std::size_t plane_count() const { return planes.size(); }
  const Plane& plane_by_name(const std::string& name) const;
};

FeatureBundle assemble_features(const Spectrogram& mixture,
                                const SpatialFeature& beam_df,
                                const SpatialFeature& angle_df);

void save_bundle(const FeatureBundle& bundle, const std::string& path);
FeatureBundle load_bundle(const std::string& path);

// Softmax over per-bin feature evidence: m_tgt = e^{b Dt}/(e^{b Dt} + e^{b Di}).
MaskPair feature_guided_mask(const SpatialFeature& target_df,
                             const SpatialFeature& interferer_df,
                             double beta_sharpness);

}  // namespace tsel
