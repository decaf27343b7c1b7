#include "core/pipeline.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include <json.hpp>

#include "core/error.h"
#include "core/rng.h"
#include "core/room_sim.h"
#include "core/wav_io.h"

namespace tsel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNoValue = -1.0;  // sentinel for unavailable metrics

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const auto count = static_cast<std::size_t>(workers);
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Status::kIo, "cannot open file: " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(Status::kIo, "cannot open for writing: " + path);
  f << text;
  if (!f) fail(Status::kIo, "write failed: " + path);
}

std::string scenario_label(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "scn%04zu", index);
  return buf;
}

std::string pairing_label(const std::vector<ManifestSource>& sources) {
  if (sources.size() < 2) return "n/a";
  for (std::size_t i = 1; i < sources.size(); ++i) {
    if (sources[i].f0_class != sources[0].f0_class) return "different";
  }
  return "same";
}

}  // namespace

void PipelineConfig::validate() const {
  find_mask_provider(mask_provider);  // throws for unregistered names
  stft.validate();
  if (workers < 1) fail(Status::kInvalidArgument, "workers must be >= 1");
  if (beta_sharpness <= 0.0) fail(Status::kInvalidArgument, "beta_sharpness must be > 0");
  if (doa_sigma <= 0.0) fail(Status::kInvalidArgument, "doa_sigma must be > 0");
  if (mask_provider == "feature-guided" && !use_df_angle && !use_df_beam) {
    fail(Status::kInvalidArgument,
         "feature-guided provider needs df_angle and/or df_beam enabled");
  }
  if (mask_provider == "from-file" && mask_dir.empty()) {
    fail(Status::kInvalidArgument, "from-file provider needs mask_dir");
  }
}

std::string PipelineConfig::method_name() const {
  std::string name = mask_provider;
  if (use_df_beam) name += "+beam";
  if (use_df_angle) name += "+angle";
  return name;
}

std::string PipelineConfig::mask_type() const {
  if (mask_provider == "oracle-real" || mask_provider == "feature-guided") return "real";
  if (mask_provider == "oracle-complex") return "complex";
  if (mask_provider == "from-file") return "file";
  return "none";
}

std::string config_to_json(const PipelineConfig& c) {
  json j;
  j["mask_provider"] = c.mask_provider;
  j["use_df_beam"] = c.use_df_beam;
  j["use_df_angle"] = c.use_df_angle;
  j["doa_source"] = c.doa_source == DoaSource::kOracleAngle ? "oracle-angle" : "estimated";
  j["stft"]["win_length"] = c.stft.win_length;
  j["stft"]["hop"] = c.stft.hop;
  j["stft"]["n_fft"] = c.stft.n_fft;
  j["stft"]["window"] = c.stft.window == WindowType::kHann ? "hann" : "rectangular";
  j["loss_weights"]["alpha"] = c.loss_weights.alpha;
  j["loss_weights"]["beta"] = c.loss_weights.beta;
  j["loss_weights"]["gamma"] = c.loss_weights.gamma;
  j["output_dir"] = c.output_dir;
  j["master_seed"] = c.master_seed;
  j["scm_weighting"] = c.scm_weighting == ScmWeighting::kMagnitudeSquared
                           ? "magnitude-squared"
                           : "literal-complex";
  j["steering"] = c.steering == SteeringConvention::kOneSidedBins ? "bins" : "fft-minus-one";
  j["beta_sharpness"] = c.beta_sharpness;
  j["doa_sigma"] = c.doa_sigma;
  j["workers"] = c.workers;
  j["mask_dir"] = c.mask_dir;
  j["write_extracted_wavs"] = c.write_extracted_wavs;
  return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("config JSON parse error: ") + e.what());
  }
  PipelineConfig c;
  try {
    c.mask_provider = j.value("mask_provider", c.mask_provider);
    c.use_df_beam = j.value("use_df_beam", c.use_df_beam);
    c.use_df_angle = j.value("use_df_angle", c.use_df_angle);
    const std::string doa = j.value("doa_source", std::string("oracle-angle"));
    if (doa == "oracle-angle") {
      c.doa_source = DoaSource::kOracleAngle;
    } else if (doa == "estimated") {
      c.doa_source = DoaSource::kEstimated;
    } else {
      fail(Status::kFormat, "unknown doa_source: " + doa);
    }
    if (j.contains("stft")) {
      const auto& s = j.at("stft");
      c.stft.win_length = s.value("win_length", c.stft.win_length);
      c.stft.hop = s.value("hop", c.stft.hop);
      c.stft.n_fft = s.value("n_fft", c.stft.n_fft);
      const std::string w = s.value("window", std::string("hann"));
      if (w == "hann") {
        c.stft.window = WindowType::kHann;
      } else if (w == "rectangular") {
        c.stft.window = WindowType::kRectangular;
      } else {
        fail(Status::kFormat, "unknown window: " + w);
      }
    }
    if (j.contains("loss_weights")) {
      const auto& w = j.at("loss_weights");
      c.loss_weights.alpha = w.value("alpha", c.loss_weights.alpha);
      c.loss_weights.beta = w.value("beta", c.loss_weights.beta);
      c.loss_weights.gamma = w.value("gamma", c.loss_weights.gamma);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    c.master_seed = j.value("master_seed", c.master_seed);
    const std::string scm = j.value("scm_weighting", std::string("magnitude-squared"));
    if (scm == "magnitude-squared") {
      c.scm_weighting = ScmWeighting::kMagnitudeSquared;
    } else if (scm == "literal-complex") {
      c.scm_weighting = ScmWeighting::kLiteralComplex;
    } else {
      fail(Status::kFormat, "unknown scm_weighting: " + scm);
    }
    const std::string steer = j.value("steering", std::string("bins"));
    if (steer == "bins") {
      c.steering = SteeringConvention::kOneSidedBins;
    } else if (steer == "fft-minus-one") {
      c.steering = SteeringConvention::kFftSizeMinusOne;
    } else {
      fail(Status::kFormat, "unknown steering convention: " + steer);
    }
    c.beta_sharpness = j.value("beta_sharpness", c.beta_sharpness);
    c.doa_sigma = j.value("doa_sigma", c.doa_sigma);
    c.workers = j.value("workers", c.workers);
    c.mask_dir = j.value("mask_dir", c.mask_dir);
    c.write_extracted_wavs = j.value("write_extracted_wavs", c.write_extracted_wavs);
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("config JSON field error: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  return config_from_json(read_text_file(path));
}

bool BatchReport::any_failed() const {
  for (const auto& r : rows) {
    if (r.failed) return true;
  }
  return false;
}

std::string batch_to_json(const BatchReport& report) {
  json j;
  j["method"] = report.method;
  j["mask_type"] = report.mask_type;
  j["df_beam"] = report.df_beam;
  j["df_angle"] = report.df_angle;
  j["rows"] = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["scenario_id"] = r.scenario_id;
    row["target_role"] = r.target_role;
    row["failed"] = r.failed;
    row["error"] = r.error;
    row["si_sdr"] = r.metrics.si_sdr;
    row["sdr"] = r.metrics.sdr;
    row["si_sdr_unprocessed"] = r.metrics.si_sdr_unprocessed;
    row["si_sdr_improvement"] = r.metrics.si_sdr_improvement;
    row["doa_error_deg"] = r.metrics.doa_error_deg;
    row["doa_mse"] = r.metrics.doa_mse;
    row["angle_separation"] = r.metrics.angle_separation;
    row["f0_pairing"] = r.metrics.f0_pairing;
    row["rt60"] = r.metrics.rt60;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

BatchReport batch_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("batch JSON parse error: ") + e.what());
  }
  BatchReport report;
  try {
    report.method = j.at("method").get<std::string>();
    report.mask_type = j.at("mask_type").get<std::string>();
    report.df_beam = j.at("df_beam").get<bool>();
    report.df_angle = j.at("df_angle").get<bool>();
    for (const auto& row : j.at("rows")) {
      ScenarioRow r;
      r.scenario_id = row.at("scenario_id").get<std::string>();
      r.target_role = row.at("target_role").get<int>();
      r.failed = row.at("failed").get<bool>();
      r.error = row.value("error", std::string());
      r.metrics.si_sdr = row.at("si_sdr").get<double>();
      r.metrics.sdr = row.at("sdr").get<double>();
      r.metrics.si_sdr_unprocessed = row.at("si_sdr_unprocessed").get<double>();
      r.metrics.si_sdr_improvement = row.at("si_sdr_improvement").get<double>();
      r.metrics.doa_error_deg = row.at("doa_error_deg").get<double>();
      r.metrics.doa_mse = row.at("doa_mse").get<double>();
      r.metrics.angle_separation = row.at("angle_separation").get<double>();
      r.metrics.f0_pairing = row.at("f0_pairing").get<std::string>();
      r.metrics.rt60 = row.at("rt60").get<double>();
      report.rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("batch JSON field error: ") + e.what());
  }
  return report;
}

void save_batch(const BatchReport& report, const std::string& path) {
  write_text_file(path, batch_to_json(report));
}

BatchReport load_batch(const std::string& path) {
  return batch_from_json(read_text_file(path));
}

Manifest load_manifest(const std::string& scenario_dir) {
  const std::string path = (fs::path(scenario_dir) / "manifest.json").string();
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("manifest parse error: ") + e.what());
  }
  Manifest m;
  try {
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.duration_s = j.at("duration_s").get<double>();
    for (const auto& e : j.at("scenarios")) {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.scenario_file = e.at("scenario_file").get<std::string>();
      entry.mixture_wav = e.at("mixture_wav").get<std::string>();
      entry.image_wavs = e.at("image_wavs").get<std::vector<std::string>>();
      entry.dry_wavs = e.at("dry_wavs").get<std::vector<std::string>>();
      for (const auto& s : e.at("sources")) {
        ManifestSource src;
        src.kind = source_kind_from_string(s.at("kind").get<std::string>());
        src.f0_class = f0_class_from_string(s.at("f0_class").get<std::string>());
        src.f0_hz = s.at("f0_hz").get<double>();
        src.duration_s = s.at("duration_s").get<double>();
        src.seed = s.at("seed").get<std::uint64_t>();
        entry.sources.push_back(src);
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    fail(Status::kFormat, std::string("manifest field error: ") + e.what());
  }
  return m;
}

void cmd_generate(const GenerateOptions& options) {
  if (options.n_scenarios < 1) fail(Status::kInvalidArgument, "n_scenarios must be >= 1");
  if (options.out_dir.empty()) fail(Status::kInvalidArgument, "output directory required");
  options.constraints.validate();
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) fail(Status::kIo, "cannot create output directory: " + options.out_dir);

  const auto n = static_cast<std::size_t>(options.n_scenarios);
  std::vector<json> entries(n);

  parallel_for(n, options.workers, [&](std::size_t i) {
    const std::uint64_t scenario_seed = mix_seed(options.seed, i);
    RoomScenario scenario = generate_scenario(scenario_seed, options.constraints);
    const std::string id = scenario_label(i);
    const fs::path dir = fs::path(options.out_dir) / id;
    fs::create_directories(dir);

    const F0Class pairings[4][2] = {{F0Class::kLow, F0Class::kLow},
                                    {F0Class::kLow, F0Class::kHigh},
                                    {F0Class::kHigh, F0Class::kLow},
                                    {F0Class::kHigh, F0Class::kHigh}};
    Rng class_rng(mix_seed(scenario_seed, 0xf0));

    std::vector<Waveform> dry;
    std::vector<SynthSpec> specs;
    for (std::size_t k = 0; k < scenario.num_sources(); ++k) {
      SynthSpec spec;
      spec.kind = options.kind;
      spec.f0_class = options.f0_policy == F0Policy::kCycle
                          ? pairings[i % 4][k % 2]
                          : (class_rng.uniform01() < 0.5 ? F0Class::kLow
                                                         : F0Class::kHigh);
      spec.duration_s = options.duration_s;
      spec.seed = mix_seed(scenario_seed, 1000 + k);
      specs.push_back(spec);
      dry.push_back(synth_source(spec));
    }

    RenderResult rendered = render_mixture(scenario, dry);

    save_scenario(scenario, (dir / "scenario.json").string());
    write_wav(rendered.mixture, (dir / "mixture.wav").string());
    json entry;
    entry["id"] = id;
    entry["scenario_file"] = id + "/scenario.json";
    entry["mixture_wav"] = id + "/mixture.wav";
    entry["image_wavs"] = json::array();
    entry["dry_wavs"] = json::array();
    entry["sources"] = json::array();
    for (std::size_t k = 0; k < scenario.num_sources(); ++k) {
      const std::string image_name = id + "/image" + std::to_string(k) + ".wav";
      const std::string dry_name = id + "/dry" + std::to_string(k) + ".wav";
      write_wav(rendered.clean_images[k], (fs::path(options.out_dir) / image_name).string());
      write_wav(dry[k], (fs::path(options.out_dir) / dry_name).string());
      entry["image_wavs"].push_back(image_name);
      entry["dry_wavs"].push_back(dry_name);
      json src;
      src["kind"] = to_string(specs[k].kind);
      src["f0_class"] = to_string(specs[k].f0_class);
      src["f0_hz"] = synth_fundamental_hz(specs[k]);
      src["duration_s"] = specs[k].duration_s;
      src["seed"] = specs[k].seed;
      entry["sources"].push_back(std::move(src));
    }
    entries[i] = std::move(entry);
  });

  json manifest;
  manifest["master_seed"] = options.seed;
  manifest["n_scenarios"] = options.n_scenarios;
  manifest["duration_s"] = options.duration_s;
  manifest["scenarios"] = json::array();
  for (auto& e : entries) manifest["scenarios"].push_back(std::move(e));
  write_text_file((fs::path(options.out_dir) / "manifest.json").string(),
                  manifest.dump(2) + "\n");
}

namespace {

struct LoadedScenario {
  RoomScenario scenario;
  Waveform mixture;
  std::vector<Waveform> images;
  Spectrogram mixture_spec;
  std::vector<Spectrogram> image_specs;
};

LoadedScenario load_scenario_data(const std::string& scenario_dir,
                                  const ManifestEntry& entry,
                                  const StftParams& params) {
  LoadedScenario data;
  data.scenario = load_scenario((fs::path(scenario_dir) / entry.scenario_file).string());
  data.mixture = read_wav((fs::path(scenario_dir) / entry.mixture_wav).string());
  if (data.mixture.channels() != data.scenario.array.num_mics()) {
    fail(Status::kShapeMismatch, "mixture channel count does not match the array");
  }
  for (const auto& name : entry.image_wavs) {
    data.images.push_back(read_wav((fs::path(scenario_dir) / name).string()));
    if (data.images.back().frames() != data.mixture.frames() ||
        data.images.back().sample_rate() != data.mixture.sample_rate()) {
      fail(Status::kShapeMismatch, "image/mixture geometry mismatch in " + entry.id);
    }
  }
  if (data.images.size() != data.scenario.num_sources()) {
    fail(Status::kShapeMismatch, "image count does not match scenario sources");
  }
  data.mixture_spec = stft(data.mixture, params);
  for (const auto& img : data.images) data.image_specs.push_back(stft(img, params));
  return data;
}

}  // namespace

BatchReport cmd_run(const PipelineConfig& config, const std::string& scenario_dir) {
  config.validate();
  const Manifest manifest = load_manifest(scenario_dir);
  if (manifest.entries.empty()) fail(Status::kInvalidArgument, "empty manifest");

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) fail(Status::kIo, "cannot create output directory: " + config.output_dir);
  if (config.write_extracted_wavs) {
    fs::create_directories(fs::path(config.output_dir) / "extracted", ec);
    if (ec) fail(Status::kIo, "cannot create extracted WAV directory");
  }

  const MaskProvider& provider = find_mask_provider(config.mask_provider);

  // row offsets: one row per (scenario, target-role)
  std::vector<std::size_t> offsets(manifest.entries.size() + 1, 0);
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    offsets[i + 1] = offsets[i] + manifest.entries[i].sources.size();
  }

  BatchReport report;
  report.method = config.method_name();
  report.mask_type = config.mask_type();
  report.df_beam = config.use_df_beam;
  report.df_angle = config.use_df_angle;
  report.rows.resize(offsets.back());

  parallel_for(manifest.entries.size(), config.workers, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    const std::string pairing = pairing_label(entry.sources);
    auto fail_all = [&](const std::string& message) {
      for (std::size_t k = 0; k < entry.sources.size(); ++k) {
        ScenarioRow& row = report.rows[offsets[i] + k];
        row.scenario_id = entry.id;
        row.target_role = static_cast<int>(k);
        row.failed = true;
        row.error = message;
        row.metrics.f0_pairing = pairing;
      }
    };
    LoadedScenario data;
    try {
      data = load_scenario_data(scenario_dir, entry, config.stft);
    } catch (const Error& e) {
      fail_all(e.what());
      return;
    }
    const int ref = data.scenario.array.reference_mic;
    const double separation =
        data.scenario.num_sources() >= 2 ? data.scenario.min_angle_separation() : kNoValue;

    for (std::size_t k = 0; k < entry.sources.size(); ++k) {
      ScenarioRow& row = report.rows[offsets[i] + k];
      row.scenario_id = entry.id;
      row.target_role = static_cast<int>(k);
      row.metrics.f0_pairing = pairing;
      row.metrics.angle_separation = separation;
      row.metrics.rt60 = data.scenario.rt60;
      try {
        RoomScenario scenario = data.scenario;
        scenario.target_index = static_cast<int>(k);
        ProviderContext ctx;
        ctx.mixture = &data.mixture_spec;
        ctx.scenario = &scenario;
        ctx.image_specs = &data.image_specs;
        ctx.target_role = static_cast<int>(k);
        ctx.scenario_id = entry.id;
        ctx.mask_dir = config.mask_dir;
        ctx.beta_sharpness = config.beta_sharpness;
        ctx.use_df_beam = config.use_df_beam;
        ctx.use_df_angle = config.use_df_angle;
        ctx.doa_source = config.doa_source;
        ctx.steering = config.steering;

        MaskPair masks = provider.provide(ctx);
        const bool refine = (config.use_df_angle || config.use_df_beam) &&
                            config.mask_provider != "feature-guided" &&
                            data.scenario.num_sources() >= 2;
        if (refine) masks = refine_mask_pair(masks, ctx);

        const Waveform extracted =
            extract_target(masks, data.mixture_spec, ref, config.scm_weighting);
        const auto reference = data.images[k].channel(static_cast<std::size_t>(ref));
        const auto mixture_ref = data.mixture.channel(static_cast<std::size_t>(ref));

        row.metrics.si_sdr = si_sdr_db(extracted.channel(0), reference);
        row.metrics.sdr = sdr_db(extracted.channel(0), reference);
        row.metrics.si_sdr_unprocessed = si_sdr_db(mixture_ref, reference);
        row.metrics.si_sdr_improvement =
            row.metrics.si_sdr - row.metrics.si_sdr_unprocessed;

        if (data.mixture.channels() >= 2) {
          SteeringTable table(scenario.array, config.stft, data.mixture.sample_rate());
          const DoaCoding est = estimate_doa(masks.target, data.mixture_spec, table);
          row.metrics.doa_error_deg =
              doa_abs_error_deg(est, scenario.target_angle_deg());
          row.metrics.doa_mse = doa_mse(
              est, gaussian_coding(scenario.target_angle_deg(), config.doa_sigma));
        } else {
          row.metrics.doa_error_deg = kNoValue;
          row.metrics.doa_mse = kNoValue;
        }

        if (config.write_extracted_wavs) {
          const std::string name = entry.id + "_t" + std::to_string(k) + ".wav";
          write_wav(extracted,
                    (fs::path(config.output_dir) / "extracted" / name).string());
        }
      } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
  });

  save_batch(report, (fs::path(config.output_dir) / "batch.json").string());
  return report;
}

LocalizeReport cmd_localize(const std::string& scenario_dir,
                            const std::string& mask_provider,
                            const std::string& out_path, int workers,
                            double sigma) {
  const MaskProvider& provider = find_mask_provider(mask_provider);
  if (sigma <= 0.0) fail(Status::kInvalidArgument, "sigma must be > 0");
  const Manifest manifest = load_manifest(scenario_dir);
  if (manifest.entries.empty()) fail(Status::kInvalidArgument, "empty manifest");

  std::vector<std::size_t> offsets(manifest.entries.size() + 1, 0);
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    offsets[i + 1] = offsets[i] + manifest.entries[i].sources.size();
  }

  LocalizeReport report;
  report.mask_provider = mask_provider;
  report.sigma = sigma;
  report.rows.resize(offsets.back());

  const StftParams params;  // localization runs on the default analysis config

  parallel_for(manifest.entries.size(), workers, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    auto fail_all = [&](const std::string& message) {
      for (std::size_t k = 0; k < entry.sources.size(); ++k) {
        LocalizeRow& row = report.rows[offsets[i] + k];
        row.scenario_id = entry.id;
        row.target_role = static_cast<int>(k);
        row.failed = true;
        row.error = message;
      }
    };
    LoadedScenario data;
    try {
      data = load_scenario_data(scenario_dir, entry, params);
    } catch (const Error& e) {
      fail_all(e.what());
      return;
    }
    for (std::size_t k = 0; k < entry.sources.size(); ++k) {
      LocalizeRow& row = report.rows[offsets[i] + k];
      row.scenario_id = entry.id;
      row.target_role = static_cast<int>(k);
      row.rt60 = data.scenario.rt60;
      try {
        RoomScenario scenario = data.scenario;
        scenario.target_index = static_cast<int>(k);
        ProviderContext ctx;
        ctx.mixture = &data.mixture_spec;
        ctx.scenario = &scenario;
        ctx.image_specs = &data.image_specs;
        ctx.target_role = static_cast<int>(k);
        ctx.scenario_id = entry.id;

        const MaskPair masks = provider.provide(ctx);
        SteeringTable table(scenario.array, params, data.mixture.sample_rate());
        const DoaCoding est = estimate_doa(masks.target, data.mixture_spec, table);
        row.truth_angle_deg = scenario.target_angle_deg();
        row.estimated_angle_deg = argmax_angle(est);
        row.abs_error_deg = doa_abs_error_deg(est, row.truth_angle_deg);
        row.doa_mse = doa_mse(est, gaussian_coding(row.truth_angle_deg, sigma));
      } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
  });

  if (!out_path.empty()) {
    json j;
    j["mask_provider"] = report.mask_provider;
    j["sigma"] = report.sigma;
    j["rows"] = json::array();
    for (const auto& r : report.rows) {
      json row;
      row["scenario_id"] = r.scenario_id;
      row["target_role"] = r.target_role;
      row["failed"] = r.failed;
      row["error"] = r.error;
      row["truth_angle_deg"] = r.truth_angle_deg;
      row["estimated_angle_deg"] = r.estimated_angle_deg;
      row["abs_error_deg"] = r.abs_error_deg;
      row["doa_mse"] = r.doa_mse;
      row["rt60"] = r.rt60;
      j["rows"].push_back(std::move(row));
    }
    write_text_file(out_path, j.dump(2) + "\n");
  }
  return report;
}

}  // namespace tsel
