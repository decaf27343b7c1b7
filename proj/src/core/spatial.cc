#include "core/spatial.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "core/error.h"

namespace tsel {
namespace {

constexpr char kBundleMagic[8] = {'T', 'S', 'E', 'L', 'F', 'T', 'B', '1'};

}  // namespace

std::vector<std::pair<int, int>> all_mic_pairs(int channels) {
  if (channels < 2) fail(Status::kInvalidArgument, "need >= 2 channels for pairs");
  std::vector<std::pair<int, int>> pairs;
  for (int l = 0; l < channels; ++l) {
    for (int r = l + 1; r < channels; ++r) pairs.emplace_back(l, r);
  }
  return pairs;
}

Ipd compute_ipd(const Spectrogram& mixture,
                const std::vector<std::pair<int, int>>& pairs) {
  if (mixture.channels() < 2) {
    fail(Status::kInvalidArgument, "IPD requires >= 2 channels");
  }
  if (pairs.empty()) fail(Status::kInvalidArgument, "empty pair set");
  for (const auto& [l, r] : pairs) {
    if (l < 0 || r < 0 || static_cast<std::size_t>(l) >= mixture.channels() ||
        static_cast<std::size_t>(r) >= mixture.channels() || l == r) {
      fail(Status::kInvalidArgument, "invalid microphone pair (" +
                                         std::to_string(l) + "," + std::to_string(r) + ")");
    }
  }
  Ipd ipd;
  ipd.pairs = pairs;
  ipd.frames = mixture.frames();
  ipd.bins = mixture.bins();
  ipd.values.resize(pairs.size() * ipd.frames * ipd.bins);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto l = static_cast<std::size_t>(pairs[p].first);
    const auto r = static_cast<std::size_t>(pairs[p].second);
    for (std::size_t t = 0; t < ipd.frames; ++t) {
      for (std::size_t f = 0; f < ipd.bins; ++f) {
        // arg(Y_l conj(Y_r)) is the wrapped phase difference in (-pi, pi].
        const std::complex<double> prod =
            mixture.at(l, t, f) * std::conj(mixture.at(r, t, f));
        ipd.at(p, t, f) = std::atan2(prod.imag(), prod.real());
      }
    }
  }
  return ipd;
}

SpatialFeature df_angle(const Ipd& ipd, double theta_hat_deg,
                        const ArrayGeometry& geometry, const StftParams& params,
                        int sample_rate, SteeringConvention convention,
                        double speed_of_sound) {
  if (theta_hat_deg < 0.0 || theta_hat_deg > 180.0) {
    fail(Status::kInvalidArgument, "theta must lie in [0, 180] degrees");
  }
  if (ipd.bins != static_cast<std::size_t>(params.num_bins())) {
    fail(Status::kShapeMismatch, "IPD bins do not match the STFT params");
  }
  const double cos_theta = std::cos(theta_hat_deg * std::numbers::pi / 180.0);
  const double denom =
      convention == SteeringConvention::kOneSidedBins
          ? static_cast<double>(params.num_bins() - 1)
          : static_cast<double>(params.n_fft - 1);

  SpatialFeature out;
  out.frames = ipd.frames;
  out.bins = ipd.bins;
  out.kind = FeatureKind::kAngle;
  out.values.assign(out.frames * out.bins, 0.0);

  const double inv_p = 1.0 / static_cast<double>(ipd.pairs.size());
  for (std::size_t p = 0; p < ipd.pairs.size(); ++p) {
    const double delta = geometry.pair_axial_delta(ipd.pairs[p].first,
                                                   ipd.pairs[p].second);
    for (std::size_t f = 0; f < out.bins; ++f) {
      const double steer = std::numbers::pi * sample_rate *
                           static_cast<double>(f) * delta * cos_theta /
                           (denom * speed_of_sound);
      for (std::size_t t = 0; t < out.frames; ++t) {
        out.at(t, f) += inv_p * std::cos(ipd.at(p, t, f) - steer);
      }
    }
  }
  return out;
}

SpatialFeature df_beam(const Spectrogram& beam) {
  if (beam.channels() != 1) {
    fail(Status::kInvalidArgument, "beam feature expects a single-channel spectrum");
  }
  SpatialFeature out;
  out.frames = beam.frames();
  out.bins = beam.bins();
  out.kind = FeatureKind::kBeam;
  out.values.resize(out.frames * out.bins);
  for (std::size_t t = 0; t < out.frames; ++t) {
    for (std::size_t f = 0; f < out.bins; ++f) {
      out.at(t, f) = std::abs(beam.at(0, t, f));
    }
  }
  return out;
}

const FeatureBundle::Plane& FeatureBundle::plane_by_name(const std::string& name) const {
  for (const auto& p : planes) {
    if (p.name == name) return p;
  }
  fail(Status::kNotFound, "no plane named " + name);
}

FeatureBundle assemble_features(const Spectrogram& mixture,
                                const SpatialFeature& beam_df,
                                const SpatialFeature& angle_df) {
  if (beam_df.frames != mixture.frames() || beam_df.bins != mixture.bins() ||
      angle_df.frames != mixture.frames() || angle_df.bins != mixture.bins()) {
    fail(Status::kShapeMismatch, "feature plane shapes do not match the mixture");
  }
  FeatureBundle bundle;
  bundle.frames = mixture.frames();
  bundle.bins = mixture.bins();
  for (std::size_t c = 0; c < mixture.channels(); ++c) {
    FeatureBundle::Plane plane;
    plane.name = "y" + std::to_string(c);
    plane.is_complex = true;
    plane.data.resize(bundle.frames * bundle.bins);
    for (std::size_t t = 0; t < bundle.frames; ++t) {
      for (std::size_t f = 0; f < bundle.bins; ++f) {
        plane.data[t * bundle.bins + f] = mixture.at(c, t, f);
      }
    }
    bundle.planes.push_back(std::move(plane));
  }
  auto real_plane = [&](const char* name, const SpatialFeature& feat) {
    FeatureBundle::Plane plane;
    plane.name = name;
    plane.is_complex = false;
    plane.data.resize(bundle.frames * bundle.bins);
    for (std::size_t i = 0; i < feat.values.size(); ++i) {
      plane.data[i] = {feat.values[i], 0.0};
    }
    bundle.planes.push_back(std::move(plane));
  };
  real_plane("df_beam", beam_df);
  real_plane("df_angle", angle_df);
  return bundle;
}

void save_bundle(const FeatureBundle& bundle, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Status::kIo, "cannot open for writing: " + path);
  f.write(kBundleMagic, sizeof(kBundleMagic));
  const std::uint32_t hdr[3] = {static_cast<std::uint32_t>(bundle.frames),
                                static_cast<std::uint32_t>(bundle.bins),
                                static_cast<std::uint32_t>(bundle.planes.size())};
  f.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
  for (const auto& plane : bundle.planes) {
    const auto name_len = static_cast<std::uint32_t>(plane.name.size());
    f.write(reinterpret_cast<const char*>(&name_len), sizeof(name_len));
    f.write(plane.name.data(), name_len);
    const std::uint8_t is_complex = plane.is_complex ? 1 : 0;
    f.write(reinterpret_cast<const char*>(&is_complex), 1);
    for (const auto& v : plane.data) {
      const double re = v.real();
      f.write(reinterpret_cast<const char*>(&re), sizeof(re));
      if (plane.is_complex) {
        const double im = v.imag();
        f.write(reinterpret_cast<const char*>(&im), sizeof(im));
      }
    }
  }
  if (!f) fail(Status::kIo, "write failed: " + path);
}

FeatureBundle load_bundle(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Status::kIo, "cannot open bundle file: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kBundleMagic, sizeof(magic)) != 0) {
    fail(Status::kFormat, "not a feature bundle: " + path);
  }
  std::uint32_t hdr[3];
  f.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
  if (!f) fail(Status::kFormat, "malformed bundle header: " + path);
  FeatureBundle bundle;
  bundle.frames = hdr[0];
  bundle.bins = hdr[1];
  bundle.planes.resize(hdr[2]);
  for (auto& plane : bundle.planes) {
    std::uint32_t name_len = 0;
    f.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
    if (!f || name_len > 4096) fail(Status::kFormat, "malformed plane name: " + path);
    plane.name.resize(name_len);
    f.read(plane.name.data(), name_len);
    std::uint8_t is_complex = 0;
    f.read(reinterpret_cast<char*>(&is_complex), 1);
    plane.is_complex = is_complex != 0;
    plane.data.resize(bundle.frames * bundle.bins);
    for (auto& v : plane.data) {
      double re = 0.0, im = 0.0;
      f.read(reinterpret_cast<char*>(&re), sizeof(re));
      if (plane.is_complex) f.read(reinterpret_cast<char*>(&im), sizeof(im));
      v = {re, im};
    }
  }
  if (!f) fail(Status::kFormat, "truncated bundle file: " + path);
  return bundle;
}

MaskPair feature_guided_mask(const SpatialFeature& target_df,
                             const SpatialFeature& interferer_df,
                             double beta_sharpness) {
  if (target_df.frames != interferer_df.frames ||
      target_df.bins != interferer_df.bins) {
    fail(Status::kShapeMismatch, "feature plane shapes differ");
  }
  if (beta_sharpness <= 0.0) {
    fail(Status::kInvalidArgument, "beta_sharpness must be positive");
  }
  MaskPair pair{TfMask(target_df.frames, target_df.bins, MaskKind::kReal),
                TfMask(target_df.frames, target_df.bins, MaskKind::kReal)};
  for (std::size_t t = 0; t < target_df.frames; ++t) {
    for (std::size_t f = 0; f < target_df.bins; ++f) {
      // logistic in the evidence gap, numerically stable for large beta
      const double gap = beta_sharpness * (interferer_df.at(t, f) - target_df.at(t, f));
      const double m = 1.0 / (1.0 + std::exp(gap));
      pair.target.at(t, f) = {m, 0.0};
      pair.interferer.at(t, f) = {1.0 - m, 0.0};
    }
  }
  return pair;
}

}  // namespace tsel
