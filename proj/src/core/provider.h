#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/geometry.h"
#include "core/mask.h"
#include "core/spatial.h"
#include "core/stft.h"

namespace tsel {

enum class DoaSource { kOracleAngle, kEstimated };

inline constexpr double kBetaSharpnessDefault = 4.0;

// Everything a mask provider may consult: the mixture spectrum, the scene
// ground truth (oracle providers), per-source image spectra, and the feature
// configuration.
struct ProviderContext {
  const Spectrogram* mixture = nullptr;
  const RoomScenario* scenario = nullptr;
  const std::vector<Spectrogram>* image_specs = nullptr;
  int target_role = 0;
  std::string scenario_id;
  std::string mask_dir;  // from-file provider
  double beta_sharpness = kBetaSharpnessDefault;
  bool use_df_beam = false;
  bool use_df_angle = true;
  DoaSource doa_source = DoaSource::kOracleAngle;
  SteeringConvention steering = SteeringConvention::kOneSidedBins;
  bool complex_interferer_from_complement = false;

  void validate() const;
};

class MaskProvider {
 public:
  virtual ~MaskProvider() = default;
  virtual std::string name() const = 0;
  virtual MaskPair provide(const ProviderContext& ctx) const = 0;
};

// Registered implementations: oracle-complex, oracle-real, from-file,
// feature-guided, pass-through. Throws kNotFound for unknown names.
const MaskProvider& find_mask_provider(const std::string& name);
std::vector<std::string> mask_provider_names();

// Per-bin target/interferer direction evidence in [-1, 1], averaged over the
// enabled feature planes (angle feature and/or beam-magnitude contrast).
// `base` supplies the masks for the beam hypothesis pair; when null an
// angle-guided first pass is used.
std::pair<SpatialFeature, SpatialFeature> direction_evidence(
    const ProviderContext& ctx, const MaskPair* base);

// Sharpens a provider's masks with the feature evidence: real pairs are
// renormalized products, complex masks are scaled by the guided plane.
MaskPair refine_mask_pair(const MaskPair& base, const ProviderContext& ctx);

}  // namespace tsel
