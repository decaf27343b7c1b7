#include "core/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "core/error.h"

namespace tsel {
namespace {

constexpr std::size_t kMaxChannels = 8;

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t rd_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t rd_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void wr_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xFF));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void wr_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void wr_tag(std::vector<std::uint8_t>& b, const char* tag) {
  b.insert(b.end(), tag, tag + 4);
}

float bits_to_float(std::uint32_t u) { return std::bit_cast<float>(u); }

double bits_to_double(std::uint64_t u) { return std::bit_cast<double>(u); }

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Status::kIo, "cannot open WAV file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(Status::kFormat, "not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_offset = 0, data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    std::uint32_t chunk_size = rd_u32(hdr + 4);
    std::size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + chunk_size > bytes.size()) {
        fail(Status::kFormat, "malformed fmt chunk: " + path);
      }
      const std::uint8_t* p = bytes.data() + body;
      format = rd_u16(p);
      channels = rd_u16(p + 2);
      sample_rate = rd_u32(p + 4);
      bits = rd_u16(p + 14);
      if (format == kFormatExtensible) {
        if (chunk_size < 40) fail(Status::kFormat, "truncated extensible fmt chunk");
        format = rd_u16(p + 24);  // first two bytes of the SubFormat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_offset = body;
      data_size = chunk_size;
      if (data_offset + data_size > bytes.size()) {
        fail(Status::kFormat, "truncated WAV data chunk: " + path);
      }
      break;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  if (!have_fmt || data_offset == 0) {
    fail(Status::kFormat, "missing fmt or data chunk: " + path);
  }
  if (channels < 1 || channels > kMaxChannels) {
    fail(Status::kUnsupported, "unsupported channel count: " + std::to_string(channels));
  }
  if (sample_rate == 0) fail(Status::kFormat, "zero sample rate: " + path);

  std::size_t bytes_per_sample;
  if (format == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == kFormatIeeeFloat && bits == 32) {
    bytes_per_sample = 4;
  } else if (format == kFormatIeeeFloat && bits == 64) {
    bytes_per_sample = 8;
  } else {
    fail(Status::kUnsupported, "unsupported WAV codec (format " + std::to_string(format) +
                                   ", " + std::to_string(bits) + " bit)");
  }

  std::size_t frame_bytes = bytes_per_sample * channels;
  if (data_size % frame_bytes != 0) {
    fail(Status::kFormat, "data chunk not a whole number of frames: " + path);
  }
  std::size_t frames = data_size / frame_bytes;
  if (frames == 0) fail(Status::kFormat, "empty data chunk: " + path);

  Waveform w(channels, frames, static_cast<int>(sample_rate));
  const std::uint8_t* p = bytes.data() + data_offset;
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      double v;
      if (bytes_per_sample == 2) {
        auto raw = static_cast<std::int16_t>(rd_u16(p));
        v = static_cast<double>(raw) / 32768.0;
      } else if (bytes_per_sample == 4) {
        v = static_cast<double>(bits_to_float(rd_u32(p)));
      } else {
        std::uint64_t u = static_cast<std::uint64_t>(rd_u32(p)) |
                          (static_cast<std::uint64_t>(rd_u32(p + 4)) << 32);
        v = bits_to_double(u);
      }
      w.at(c, n) = v;
      p += bytes_per_sample;
    }
  }
  return w;
}

void write_wav(const Waveform& w, const std::string& path, WavFormat format) {
  w.validate();
  if (w.channels() > kMaxChannels) {
    fail(Status::kUnsupported, "more than 8 channels not supported by WAV writer");
  }
  const std::size_t frames = w.frames();
  const std::size_t channels = w.channels();
  const bool pcm = format == WavFormat::kPcm16;
  const std::size_t bytes_per_sample = pcm ? 2 : 4;
  const std::size_t data_size = frames * channels * bytes_per_sample;

  std::vector<std::uint8_t> b;
  b.reserve(data_size + 64);
  wr_tag(b, "RIFF");
  // fact chunk is included for the float variant
  std::uint32_t riff_size = static_cast<std::uint32_t>(4 + 24 + (pcm ? 0 : 12) + 8 + data_size);
  wr_u32(b, riff_size);
  wr_tag(b, "WAVE");
  wr_tag(b, "fmt ");
  wr_u32(b, 16);
  wr_u16(b, pcm ? kFormatPcm : kFormatIeeeFloat);
  wr_u16(b, static_cast<std::uint16_t>(channels));
  wr_u32(b, static_cast<std::uint32_t>(w.sample_rate()));
  std::uint32_t byte_rate = static_cast<std::uint32_t>(w.sample_rate() * channels * bytes_per_sample);
  wr_u32(b, byte_rate);
  wr_u16(b, static_cast<std::uint16_t>(channels * bytes_per_sample));
  wr_u16(b, static_cast<std::uint16_t>(bytes_per_sample * 8));
  if (!pcm) {
    wr_tag(b, "fact");
    wr_u32(b, 4);
    wr_u32(b, static_cast<std::uint32_t>(frames));
  }
  wr_tag(b, "data");
  wr_u32(b, static_cast<std::uint32_t>(data_size));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      double v = w.at(c, n);
      if (pcm) {
        long q = std::lround(v * 32768.0);
        q = std::clamp(q, -32768L, 32767L);
        wr_u16(b, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
      } else {
        wr_u32(b, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Status::kIo, "cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!f) fail(Status::kIo, "write failed: " + path);
}

}  // namespace tsel
