#pragma once

#include <cstdint>
#include <string>

#include "core/waveform.h"

namespace tsel {

enum class SourceKind { kHarmonicComplex, kModulatedNoise, kChirp };

// Fundamental-frequency class, the stand-in for the two-voice-type split of
// the evaluation corpus: low draws f0 in [90, 150] Hz, high in [180, 260] Hz.
enum class F0Class { kLow, kHigh };

struct SynthSpec {
  SourceKind kind = SourceKind::kHarmonicComplex;
  F0Class f0_class = F0Class::kLow;
  double duration_s = 4.0;
  std::uint64_t seed = 0;
  int sample_rate = kDefaultSampleRate;
};

// The fundamental the given spec will draw (deterministic in the seed).
double synth_fundamental_hz(const SynthSpec& spec);

// Single-channel deterministic test source, normalized to unit RMS.
Waveform synth_source(const SynthSpec& spec);

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& name);
std::string to_string(F0Class f0_class);
F0Class f0_class_from_string(const std::string& name);

}  // namespace tsel
