#pragma once

#include <string>

#include "core/waveform.h"

namespace tsel {

enum class WavFormat { kPcm16, kFloat32 };

// RIFF/WAVE reader for PCM16 and IEEE-float (32/64 bit) files, 1-8 channels.
// Rejects malformed headers, unsupported codecs and truncated data chunks.
Waveform read_wav(const std::string& path);

void write_wav(const Waveform& w, const std::string& path,
               WavFormat format = WavFormat::kFloat32);

}  // namespace tsel
