#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/beamform.h"
#include "core/metrics.h"
#include "core/provider.h"
#include "core/scenario.h"
#include "core/stft.h"
#include "core/synth.h"

namespace tsel {

struct PipelineConfig {
  std::string mask_provider = "oracle-real";
  bool use_df_beam = false;
  bool use_df_angle = false;
  DoaSource doa_source = DoaSource::kOracleAngle;
  StftParams stft;
  LossWeights loss_weights;
  std::string output_dir = "out";
  std::uint64_t master_seed = 0;
  ScmWeighting scm_weighting = ScmWeighting::kMagnitudeSquared;
  SteeringConvention steering = SteeringConvention::kOneSidedBins;
  double beta_sharpness = kBetaSharpnessDefault;
  double doa_sigma = kDoaSigmaDefault;
  int workers = 1;
  std::string mask_dir;
  bool write_extracted_wavs = true;

  void validate() const;  // provider must be registered, workers >= 1
  std::string method_name() const;
  std::string mask_type() const;
};

std::string config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config(const std::string& path);

// One evaluated (scenario, target-role) pair.
struct ScenarioRow {
  std::string scenario_id;
  int target_role = 0;
  bool failed = false;
  std::string error;
  MetricReport metrics;
};

struct BatchReport {
  std::string method;
  std::string mask_type;
  bool df_beam = false;
  bool df_angle = false;
  std::vector<ScenarioRow> rows;

  bool any_failed() const;
};

std::string batch_to_json(const BatchReport& report);
BatchReport batch_from_json(const std::string& text);
void save_batch(const BatchReport& report, const std::string& path);
BatchReport load_batch(const std::string& path);

// Per-source f0-class assignment for generated batches. kCycle walks the four
// (low/high) pairings so same- and different-class mixtures stay balanced.
enum class F0Policy { kCycle, kRandom };

struct GenerateOptions {
  int n_scenarios = 50;
  ScenarioConstraints constraints;
  std::uint64_t seed = 0;
  double duration_s = 4.0;
  SourceKind kind = SourceKind::kHarmonicComplex;
  F0Policy f0_policy = F0Policy::kCycle;
  std::string out_dir;
  int workers = 1;
};

// Writes n scenario directories (scenario.json, mixture.wav, per-source
// image/dry WAVs) plus manifest.json; byte-deterministic in the seed.
void cmd_generate(const GenerateOptions& options);

// Runs the configured pipeline over every (scenario, target-role) pair and
// writes batch.json (and extracted WAVs) under config.output_dir. Provider
// failures mark the row failed and the run continues.
BatchReport cmd_run(const PipelineConfig& config, const std::string& scenario_dir);

struct LocalizeRow {
  std::string scenario_id;
  int target_role = 0;
  bool failed = false;
  std::string error;
  double truth_angle_deg = 0.0;
  int estimated_angle_deg = 0;
  double abs_error_deg = 0.0;
  double doa_mse = 0.0;
  double rt60 = 0.0;
};

struct LocalizeReport {
  std::string mask_provider;
  double sigma = kDoaSigmaDefault;
  std::vector<LocalizeRow> rows;
};

LocalizeReport cmd_localize(const std::string& scenario_dir,
                            const std::string& mask_provider,
                            const std::string& out_path = "", int workers = 1,
                            double sigma = kDoaSigmaDefault);

// Manifest access shared with the report/CLI layers.
struct ManifestSource {
  SourceKind kind = SourceKind::kHarmonicComplex;
  F0Class f0_class = F0Class::kLow;
  double f0_hz = 0.0;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
};

struct ManifestEntry {
  std::string id;
  std::string scenario_file;
  std::string mixture_wav;
  std::vector<std::string> image_wavs;
  std::vector<std::string> dry_wavs;
  std::vector<ManifestSource> sources;
};

struct Manifest {
  std::uint64_t master_seed = 0;
  double duration_s = 0.0;
  std::vector<ManifestEntry> entries;
};

Manifest load_manifest(const std::string& scenario_dir);

}  // namespace tsel
