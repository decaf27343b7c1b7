#include "core/synth.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "core/error.h"
#include "core/rng.h"

namespace tsel {
namespace {

constexpr std::uint64_t kSynthStream = 0x531f;

double draw_f0(F0Class cls, Rng& rng) {
  return cls == F0Class::kLow ? rng.uniform(90.0, 150.0)
                              : rng.uniform(180.0, 260.0);
}

// Slow amplitude modulation so sources switch on and off across frames.
std::vector<double> syllabic_envelope(std::size_t n, int fs, Rng& rng) {
  const double rate = rng.uniform(2.0, 5.0);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    env[i] = 0.55 + 0.45 * std::sin(2.0 * std::numbers::pi * rate * t + phase);
  }
  return env;
}

void normalize_rms(std::span<double> x) {
  const double r = rms(x);
  if (r <= 0.0) fail(Status::kNumeric, "synthesized source has zero energy");
  for (auto& v : x) v /= r;
}

}  // namespace

double synth_fundamental_hz(const SynthSpec& spec) {
  Rng rng(mix_seed(spec.seed, kSynthStream));
  return draw_f0(spec.f0_class, rng);
}

Waveform synth_source(const SynthSpec& spec) {
  if (spec.duration_s <= 0.0) {
    fail(Status::kInvalidArgument, "duration must be positive");
  }
  if (spec.sample_rate <= 0) {
    fail(Status::kInvalidArgument, "sample rate must be positive");
  }
  const int fs = spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * fs));
  if (n < 1) fail(Status::kInvalidArgument, "duration too short");

  Rng rng(mix_seed(spec.seed, kSynthStream));
  const double f0 = draw_f0(spec.f0_class, rng);
  const double nyquist = fs / 2.0;

  Waveform w(1, n, fs);
  auto x = w.channel(0);

  switch (spec.kind) {
    case SourceKind::kHarmonicComplex: {
      const int harmonics =
          std::max(1, static_cast<int>(std::floor(0.95 * nyquist / f0)));
      std::vector<double> phases(static_cast<std::size_t>(harmonics));
      for (auto& p : phases) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
      auto env = syllabic_envelope(n, fs, rng);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        double acc = 0.0;
        for (int k = 1; k <= harmonics; ++k) {
          acc += std::sin(2.0 * std::numbers::pi * k * f0 * t +
                          phases[static_cast<std::size_t>(k - 1)]) /
                 static_cast<double>(k);
        }
        x[i] = env[i] * acc;
      }
      break;
    }
    case SourceKind::kModulatedNoise: {
      const double mod_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      auto env = syllabic_envelope(n, fs, rng);
      // Shape white noise with a one-pole high-pass at ~0.7 f0 and a one-pole
      // low-pass at ~18 f0 so the occupied band scales with the f0 class.
      const double hp_fc = 0.7 * f0;
      const double lp_fc = std::min(18.0 * f0, 0.9 * nyquist);
      const double a_hp = std::exp(-2.0 * std::numbers::pi * hp_fc / fs);
      const double a_lp = std::exp(-2.0 * std::numbers::pi * lp_fc / fs);
      double hp_state = 0.0, hp_prev = 0.0, lp_state = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double noise = rng.gaussian();
        hp_state = a_hp * (hp_state + noise - hp_prev);
        hp_prev = noise;
        lp_state = (1.0 - a_lp) * hp_state + a_lp * lp_state;
        const double pitch_am =
            0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * f0 * t + mod_phase);
        x[i] = env[i] * pitch_am * lp_state;
      }
      break;
    }
    case SourceKind::kChirp: {
      const double phase0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
      auto env = syllabic_envelope(n, fs, rng);
      const double f1 = std::min(2.5 * f0, 0.9 * nyquist);
      const double duration = static_cast<double>(n) / fs;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        // linear sweep f0 -> f1: phase(t) = 2*pi*(f0 t + (f1-f0) t^2 / (2 T))
        const double phase =
            2.0 * std::numbers::pi *
            (f0 * t + 0.5 * (f1 - f0) * t * t / duration);
        x[i] = env[i] * std::sin(phase + phase0);
      }
      break;
    }
  }
  normalize_rms(x);
  return w;
}

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kHarmonicComplex: return "harmonic-complex";
    case SourceKind::kModulatedNoise: return "modulated-noise";
    case SourceKind::kChirp: return "chirp";
  }
  fail(Status::kInvalidArgument, "unknown source kind");
}

SourceKind source_kind_from_string(const std::string& name) {
  if (name == "harmonic-complex") return SourceKind::kHarmonicComplex;
  if (name == "modulated-noise") return SourceKind::kModulatedNoise;
  if (name == "chirp") return SourceKind::kChirp;
  fail(Status::kInvalidArgument, "unknown source kind: " + name);
}

std::string to_string(F0Class f0_class) {
  return f0_class == F0Class::kLow ? "low" : "high";
}

F0Class f0_class_from_string(const std::string& name) {
  if (name == "low") return F0Class::kLow;
  if (name == "high") return F0Class::kHigh;
  fail(Status::kInvalidArgument, "unknown f0 class: " + name);
}

}  // namespace tsel
