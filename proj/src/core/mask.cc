#include "core/mask.h"

#include <cmath>
#include <cstring>
#include <fstream>

#include "core/error.h"

namespace tsel {
namespace {

constexpr char kMaskMagic[8] = {'T', 'S', 'E', 'L', 'M', 'S', 'K', '1'};

void require_same_shape(const Spectrogram& a, const Spectrogram& b) {
  if (a.frames() != b.frames() || a.bins() != b.bins() ||
      a.channels() != b.channels()) {
    fail(Status::kShapeMismatch, "spectrogram shapes differ");
  }
}

}  // namespace

TfMask::TfMask(std::size_t frames_t, std::size_t bins_f, MaskKind kind)
    : frames_t_(frames_t),
      bins_f_(bins_f),
      kind_(kind),
      values_(frames_t * bins_f, {0.0, 0.0}) {
  if (frames_t_ < 1 || bins_f_ < 1) {
    fail(Status::kInvalidArgument, "mask must have at least 1 frame and 1 bin");
  }
}

void TfMask::validate() const {
  if (values_.size() != frames_t_ * bins_f_) {
    fail(Status::kShapeMismatch, "mask buffer size mismatch");
  }
  if (kind_ == MaskKind::kReal) {
    for (const auto& v : values_) {
      if (v.imag() != 0.0) {
        fail(Status::kInvalidArgument, "real mask contains nonzero imaginary parts");
      }
      if (v.real() < 0.0 || v.real() > 1.0) {
        fail(Status::kInvalidArgument, "real mask values must lie in [0, 1]");
      }
    }
  } else {
    for (const auto& v : values_) {
      if (std::abs(v) > kMaskCeiling * (1.0 + 1e-12)) {
        fail(Status::kInvalidArgument, "complex mask magnitude exceeds ceiling");
      }
    }
  }
}

TfMask oracle_complex_mask(const Spectrogram& target_image,
                           const Spectrogram& mixture, int channel) {
  require_same_shape(target_image, mixture);
  if (channel < 0 || static_cast<std::size_t>(channel) >= mixture.channels()) {
    fail(Status::kInvalidArgument, "channel index out of range");
  }
  const auto c = static_cast<std::size_t>(channel);
  TfMask m(mixture.frames(), mixture.bins(), MaskKind::kComplex);
  for (std::size_t t = 0; t < mixture.frames(); ++t) {
    for (std::size_t f = 0; f < mixture.bins(); ++f) {
      const std::complex<double> y = mixture.at(c, t, f);
      if (std::abs(y) < kDivEps) continue;  // emit 0
      std::complex<double> v = target_image.at(c, t, f) / y;
      const double mag = std::abs(v);
      if (mag > kMaskCeiling) v *= kMaskCeiling / mag;
      m.at(t, f) = v;
    }
  }
  return m;
}

MaskPair oracle_real_mask(const Spectrogram& target_image,
                          const std::vector<Spectrogram>& interferer_images,
                          int channel) {
  for (const auto& b : interferer_images) require_same_shape(target_image, b);
  if (channel < 0 ||
      static_cast<std::size_t>(channel) >= target_image.channels()) {
    fail(Status::kInvalidArgument, "channel index out of range");
  }
  const auto c = static_cast<std::size_t>(channel);
  MaskPair pair{TfMask(target_image.frames(), target_image.bins(), MaskKind::kReal),
                TfMask(target_image.frames(), target_image.bins(), MaskKind::kReal)};
  for (std::size_t t = 0; t < target_image.frames(); ++t) {
    for (std::size_t f = 0; f < target_image.bins(); ++f) {
      const double s = std::abs(target_image.at(c, t, f));
      double b = 0.0;
      for (const auto& img : interferer_images) b += std::abs(img.at(c, t, f));
      const double tgt = s / (s + b + kDivEps);
      pair.target.at(t, f) = {tgt, 0.0};
      pair.interferer.at(t, f) = {1.0 - tgt, 0.0};
    }
  }
  return pair;
}

TfMask complement(const TfMask& m) {
  TfMask out(m.frames(), m.bins(), m.kind());
  for (std::size_t i = 0; i < m.values().size(); ++i) {
    out.values()[i] = std::complex<double>{1.0, 0.0} - m.values()[i];
  }
  return out;
}

void save_mask(const TfMask& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Status::kIo, "cannot open for writing: " + path);
  f.write(kMaskMagic, sizeof(kMaskMagic));
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(m.frames()),
                                 static_cast<std::uint32_t>(m.bins())};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  const std::uint8_t kind = m.kind() == MaskKind::kComplex ? 0 : 1;
  f.write(reinterpret_cast<const char*>(&kind), 1);
  for (const auto& v : m.values()) {
    const double re = v.real(), im = v.imag();
    f.write(reinterpret_cast<const char*>(&re), sizeof(re));
    f.write(reinterpret_cast<const char*>(&im), sizeof(im));
  }
  if (!f) fail(Status::kIo, "write failed: " + path);
}

TfMask load_mask(const std::string& path, long expected_frames,
                 long expected_bins) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Status::kIo, "cannot open mask file: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMaskMagic, sizeof(magic)) != 0) {
    fail(Status::kFormat, "not a mask container: " + path);
  }
  std::uint32_t dims[2];
  std::uint8_t kind_byte = 0;
  f.read(reinterpret_cast<char*>(dims), sizeof(dims));
  f.read(reinterpret_cast<char*>(&kind_byte), 1);
  if (!f || kind_byte > 1) fail(Status::kFormat, "malformed mask header: " + path);
  if ((expected_frames >= 0 && dims[0] != static_cast<std::uint32_t>(expected_frames)) ||
      (expected_bins >= 0 && dims[1] != static_cast<std::uint32_t>(expected_bins))) {
    fail(Status::kShapeMismatch,
         "mask dims " + std::to_string(dims[0]) + "x" + std::to_string(dims[1]) +
             " do not match expected " + std::to_string(expected_frames) + "x" +
             std::to_string(expected_bins));
  }
  TfMask m(dims[0], dims[1], kind_byte == 0 ? MaskKind::kComplex : MaskKind::kReal);
  for (auto& v : m.values()) {
    double re = 0.0, im = 0.0;
    f.read(reinterpret_cast<char*>(&re), sizeof(re));
    f.read(reinterpret_cast<char*>(&im), sizeof(im));
    v = {re, im};
  }
  if (!f) fail(Status::kFormat, "truncated mask container: " + path);
  m.validate();
  return m;
}

}  // namespace tsel
