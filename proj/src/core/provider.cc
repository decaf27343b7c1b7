#include "core/provider.h"

#include <cmath>
#include <memory>

#include "core/beamform.h"
#include "core/doa.h"
#include "core/error.h"

namespace tsel {

void ProviderContext::validate() const {
  if (!mixture || !scenario || !image_specs) {
    fail(Status::kInvalidArgument, "provider context is missing inputs");
  }
  if (image_specs->size() != scenario->num_sources()) {
    fail(Status::kShapeMismatch, "one image spectrogram required per source");
  }
  if (target_role < 0 ||
      static_cast<std::size_t>(target_role) >= scenario->num_sources()) {
    fail(Status::kInvalidArgument, "target role out of range");
  }
}

namespace {

int reference_mic(const ProviderContext& ctx) {
  return ctx.scenario->array.reference_mic;
}

// Sum of the non-target image spectra.
Spectrogram interferer_sum(const ProviderContext& ctx) {
  const auto& images = *ctx.image_specs;
  const auto& mix = *ctx.mixture;
  Spectrogram sum(mix.channels(), mix.frames(), mix.params(), mix.sample_rate(),
                  mix.source_length());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (static_cast<int>(i) == ctx.target_role) continue;
    for (std::size_t k = 0; k < sum.data().size(); ++k) {
      sum.data()[k] += images[i].data()[k];
    }
  }
  return sum;
}

std::vector<double> source_angles(const ProviderContext& ctx) {
  const auto& scenario = *ctx.scenario;
  if (ctx.doa_source == DoaSource::kOracleAngle) {
    return scenario.source_angles_deg;
  }
  SteeringTable table(scenario.array, ctx.mixture->params(),
                      ctx.mixture->sample_rate());
  std::vector<double> angles(scenario.num_sources());
  for (std::size_t i = 0; i < scenario.num_sources(); ++i) {
    const TfMask m = oracle_complex_mask((*ctx.image_specs)[i], *ctx.mixture,
                                         reference_mic(ctx));
    angles[i] = static_cast<double>(argmax_angle(estimate_doa(m, *ctx.mixture, table)));
  }
  return angles;
}

class OracleComplexProvider final : public MaskProvider {
 public:
  std::string name() const override { return "oracle-complex"; }
  MaskPair provide(const ProviderContext& ctx) const override {
    ctx.validate();
    const int ref = reference_mic(ctx);
    const auto role = static_cast<std::size_t>(ctx.target_role);
    TfMask target =
        oracle_complex_mask((*ctx.image_specs)[role], *ctx.mixture, ref);
    TfMask interferer =
        ctx.complex_interferer_from_complement
            ? complement(target)
            : oracle_complex_mask(interferer_sum(ctx), *ctx.mixture, ref);
    return {std::move(target), std::move(interferer)};
  }
};

class OracleRealProvider final : public MaskProvider {
 public:
  std::string name() const override { return "oracle-real"; }
  MaskPair provide(const ProviderContext& ctx) const override {
    ctx.validate();
    std::vector<Spectrogram> interferers;
    for (std::size_t i = 0; i < ctx.image_specs->size(); ++i) {
      if (static_cast<int>(i) == ctx.target_role) continue;
      interferers.push_back((*ctx.image_specs)[i]);
    }
    return oracle_real_mask((*ctx.image_specs)[static_cast<std::size_t>(ctx.target_role)],
                            interferers, reference_mic(ctx));
  }
};

class FromFileProvider final : public MaskProvider {
 public:
  std::string name() const override { return "from-file"; }
  MaskPair provide(const ProviderContext& ctx) const override {
    ctx.validate();
    if (ctx.mask_dir.empty()) {
      fail(Status::kInvalidArgument, "from-file provider needs a mask directory");
    }
    const std::string stem = ctx.mask_dir + "/" + ctx.scenario_id + "_t" +
                             std::to_string(ctx.target_role);
    const long frames = static_cast<long>(ctx.mixture->frames());
    const long bins = static_cast<long>(ctx.mixture->bins());
    return {load_mask(stem + "_tgt.mask", frames, bins),
            load_mask(stem + "_inf.mask", frames, bins)};
  }
};

class FeatureGuidedProvider final : public MaskProvider {
 public:
  std::string name() const override { return "feature-guided"; }
  MaskPair provide(const ProviderContext& ctx) const override {
    ctx.validate();
    auto [target_evidence, interferer_evidence] = direction_evidence(ctx, nullptr);
    return feature_guided_mask(target_evidence, interferer_evidence,
                               ctx.beta_sharpness);
  }
};

class PassThroughProvider final : public MaskProvider {
 public:
  std::string name() const override { return "pass-through"; }
  MaskPair provide(const ProviderContext& ctx) const override {
    ctx.validate();
    TfMask ones(ctx.mixture->frames(), ctx.mixture->bins(), MaskKind::kComplex);
    for (auto& v : ones.values()) v = {1.0, 0.0};
    return {ones, ones};
  }
};

const OracleComplexProvider g_oracle_complex;
const OracleRealProvider g_oracle_real;
const FromFileProvider g_from_file;
const FeatureGuidedProvider g_feature_guided;
const PassThroughProvider g_pass_through;

const MaskProvider* const g_providers[] = {
    &g_oracle_complex, &g_oracle_real, &g_from_file, &g_feature_guided,
    &g_pass_through};

}  // namespace

const MaskProvider& find_mask_provider(const std::string& name) {
  for (const auto* p : g_providers) {
    if (p->name() == name) return *p;
  }
  fail(Status::kNotFound, "unknown mask provider: " + name);
}

std::vector<std::string> mask_provider_names() {
  std::vector<std::string> names;
  for (const auto* p : g_providers) names.push_back(p->name());
  return names;
}

std::pair<SpatialFeature, SpatialFeature> direction_evidence(
    const ProviderContext& ctx, const MaskPair* base) {
  ctx.validate();
  if (!ctx.use_df_angle && !ctx.use_df_beam) {
    fail(Status::kInvalidArgument,
         "direction evidence needs df_angle and/or df_beam enabled");
  }
  if (!ctx.use_df_angle && !base) {
    fail(Status::kInvalidArgument,
         "beam-only evidence needs base masks for the beam hypothesis pair");
  }
  const auto& mix = *ctx.mixture;
  const auto angles = source_angles(ctx);
  const auto role = static_cast<std::size_t>(ctx.target_role);

  SpatialFeature target_e, interferer_e;
  target_e.frames = interferer_e.frames = mix.frames();
  target_e.bins = interferer_e.bins = mix.bins();
  target_e.values.assign(mix.frames() * mix.bins(), 0.0);
  interferer_e.values.assign(mix.frames() * mix.bins(), 0.0);
  int plane_count = 0;

  SpatialFeature angle_t, angle_i;
  if (ctx.use_df_angle) {
    const Ipd ipd = compute_ipd(mix, all_mic_pairs(static_cast<int>(mix.channels())));
    angle_t = df_angle(ipd, angles[role], ctx.scenario->array, mix.params(),
                       mix.sample_rate(), ctx.steering);
    angle_i.frames = mix.frames();
    angle_i.bins = mix.bins();
    angle_i.values.assign(mix.frames() * mix.bins(), 0.0);
    int others = 0;
    for (std::size_t j = 0; j < angles.size(); ++j) {
      if (j == role) continue;
      const SpatialFeature a = df_angle(ipd, angles[j], ctx.scenario->array,
                                        mix.params(), mix.sample_rate(), ctx.steering);
      for (std::size_t k = 0; k < angle_i.values.size(); ++k) {
        angle_i.values[k] += a.values[k];
      }
      ++others;
    }
    if (others == 0) fail(Status::kInvalidArgument, "evidence needs >= 2 sources");
    for (auto& v : angle_i.values) v /= static_cast<double>(others);
    for (std::size_t k = 0; k < target_e.values.size(); ++k) {
      target_e.values[k] += angle_t.values[k];
      interferer_e.values[k] += angle_i.values[k];
    }
    ++plane_count;
  }

  if (ctx.use_df_beam) {
    MaskPair hypothesis = base ? *base
                               : feature_guided_mask(angle_t, angle_i,
                                                     ctx.beta_sharpness);
    const Scm phi_t = estimate_scm(hypothesis.target, mix);
    const Scm phi_i = estimate_scm(hypothesis.interferer, mix);
    const int ref = reference_mic(ctx);
    const SpatialFeature beam_t =
        df_beam(apply_beamformer(mvdr_weights(phi_t, phi_i, ref), mix));
    const SpatialFeature beam_i =
        df_beam(apply_beamformer(mvdr_weights(phi_i, phi_t, ref), mix));
    for (std::size_t k = 0; k < target_e.values.size(); ++k) {
      const double bt = beam_t.values[k];
      const double bi = beam_i.values[k];
      const double contrast = (bt - bi) / (bt + bi + kDivEps);
      target_e.values[k] += contrast;
      interferer_e.values[k] -= contrast;
    }
    ++plane_count;
  }

  const double inv = 1.0 / static_cast<double>(plane_count);
  for (auto& v : target_e.values) v *= inv;
  for (auto& v : interferer_e.values) v *= inv;
  return {std::move(target_e), std::move(interferer_e)};
}

MaskPair refine_mask_pair(const MaskPair& base, const ProviderContext& ctx) {
  auto [target_evidence, interferer_evidence] = direction_evidence(ctx, &base);
  const MaskPair guided = feature_guided_mask(target_evidence, interferer_evidence,
                                              ctx.beta_sharpness);
  MaskPair out = base;
  if (base.target.kind() == MaskKind::kReal &&
      base.interferer.kind() == MaskKind::kReal) {
    for (std::size_t k = 0; k < out.target.values().size(); ++k) {
      const double bt = base.target.values()[k].real();
      const double bi = base.interferer.values()[k].real();
      const double gt = guided.target.values()[k].real();
      const double gi = guided.interferer.values()[k].real();
      const double num = bt * gt;
      const double m = num / (num + bi * gi + kDivEps);
      out.target.values()[k] = {m, 0.0};
      out.interferer.values()[k] = {1.0 - m, 0.0};
    }
  } else {
    for (std::size_t k = 0; k < out.target.values().size(); ++k) {
      out.target.values()[k] =
          base.target.values()[k] * guided.target.values()[k].real();
      out.interferer.values()[k] =
          base.interferer.values()[k] * guided.interferer.values()[k].real();
    }
  }
  return out;
}

}  // namespace tsel
