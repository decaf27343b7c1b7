#include "core/room_sim.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.h"
#include "core/fft.h"

namespace tsel {
namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(x) / x;
}

// Energy-based length: time for the tail to fall 60 dB, plus kernel margin.
std::size_t rir_length(double rt60, double max_dist, int sample_rate,
                       const RirOptions& opt) {
  double direct_s = max_dist / opt.speed_of_sound;
  double tail_s = rt60 > 0.0 ? rt60 * 1.25 : 0.0;
  return static_cast<std::size_t>(
      std::ceil((direct_s + tail_s) * sample_rate) + opt.sinc_taps + 2);
}

}  // namespace

double wall_reflection_coefficient(const Vec3& room_dims, double rt60,
                                   AbsorptionModel model) {
  if (rt60 <= 0.0) return 0.0;
  const double volume = room_dims.x * room_dims.y * room_dims.z;
  const double surface = 2.0 * (room_dims.x * room_dims.y +
                                room_dims.x * room_dims.z +
                                room_dims.y * room_dims.z);
  const double sabine = 0.1611 * volume / (surface * rt60);
  double alpha = model == AbsorptionModel::kSabine ? sabine
                                                   : 1.0 - std::exp(-sabine);
  alpha = std::clamp(alpha, 1e-6, 1.0 - 1e-6);
  return std::sqrt(1.0 - alpha);
}

std::vector<Rir> simulate_rir(const RoomScenario& scenario, int source_index,
                              const RirOptions& options) {
  scenario.validate();
  if (source_index < 0 ||
      static_cast<std::size_t>(source_index) >= scenario.num_sources()) {
    fail(Status::kInvalidArgument, "source index out of range");
  }
  if (options.max_order < 0) fail(Status::kInvalidArgument, "max_order must be >= 0");
  if (options.sinc_taps < 3 || options.sinc_taps % 2 == 0) {
    fail(Status::kInvalidArgument, "sinc_taps must be odd and >= 3");
  }

  const int fs = options.sample_rate;
  if (fs <= 0) fail(Status::kInvalidArgument, "sample rate must be positive");
  const Vec3 src = scenario.source_positions[static_cast<std::size_t>(source_index)];
  const Vec3& L = scenario.room_dims;
  const double beta =
      wall_reflection_coefficient(L, scenario.rt60, options.absorption);
  const double c = options.speed_of_sound;
  const int half_kernel = options.sinc_taps / 2;

  double max_dist = 0.0;
  for (const auto& mic : scenario.array.mic_positions) {
    max_dist = std::max(max_dist, distance(src, mic));
  }
  const std::size_t n_samples = rir_length(scenario.rt60, max_dist, fs, options);
  const double max_path = static_cast<double>(n_samples) * c / fs;

  // Per-axis lattice extent needed to reach max_path, bounded by max_order.
  auto lattice_extent = [&](double dim) {
    int by_len = static_cast<int>(std::ceil(max_path / (2.0 * dim)));
    return std::min(by_len, options.max_order);
  };
  const int nx = lattice_extent(L.x);
  const int ny = lattice_extent(L.y);
  const int nz = lattice_extent(L.z);

  std::vector<Rir> out(scenario.array.num_mics());
  for (auto& r : out) {
    r.sample_rate = fs;
    r.taps.assign(n_samples, 0.0);
  }

  for (std::size_t m = 0; m < scenario.array.num_mics(); ++m) {
    const Vec3 mic = scenario.array.mic_positions[m];
    auto& taps = out[m].taps;
    for (int mx = -nx; mx <= nx; ++mx) {
      for (int my = -ny; my <= ny; ++my) {
        for (int mz = -nz; mz <= nz; ++mz) {
          for (int q = 0; q <= 1; ++q) {
            for (int j = 0; j <= 1; ++j) {
              for (int k = 0; k <= 1; ++k) {
                const int order = std::abs(2 * mx - q) + std::abs(2 * my - j) +
                                  std::abs(2 * mz - k);
                if (order > options.max_order) continue;
                const Vec3 image{(1 - 2 * q) * src.x + 2.0 * mx * L.x,
                                 (1 - 2 * j) * src.y + 2.0 * my * L.y,
                                 (1 - 2 * k) * src.z + 2.0 * mz * L.z};
                const double dist = distance(image, mic);
                const double delay = dist / c * fs;
                const long center = std::lround(delay);
                if (center - half_kernel >= static_cast<long>(n_samples)) continue;
                const int reflections = std::abs(mx - q) + std::abs(mx) +
                                        std::abs(my - j) + std::abs(my) +
                                        std::abs(mz - k) + std::abs(mz);
                double gain = 1.0 / (4.0 * std::numbers::pi * std::max(dist, 1e-2));
                if (reflections > 0) gain *= std::pow(beta, reflections);
                for (long n = center - half_kernel; n <= center + half_kernel; ++n) {
                  if (n < 0 || n >= static_cast<long>(n_samples)) continue;
                  const double t = static_cast<double>(n) - delay;
                  const double w =
                      0.5 * (1.0 + std::cos(std::numbers::pi * t /
                                            (half_kernel + 1)));
                  taps[static_cast<std::size_t>(n)] +=
                      gain * w * sinc(std::numbers::pi * t);
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

RenderResult render_mixture(const RoomScenario& scenario,
                            const std::vector<Waveform>& dry_sources,
                            const RirOptions& options) {
  scenario.validate();
  if (dry_sources.size() != scenario.num_sources()) {
    fail(Status::kShapeMismatch, "one dry source signal required per scenario source");
  }
  const std::size_t n = dry_sources.front().frames();
  const int fs = dry_sources.front().sample_rate();
  for (const auto& s : dry_sources) {
    if (s.channels() != 1) fail(Status::kInvalidArgument, "dry sources must be single-channel");
    if (s.frames() != n) fail(Status::kShapeMismatch, "dry source length mismatch");
    if (s.sample_rate() != fs) fail(Status::kShapeMismatch, "dry source sample rate mismatch");
  }
  if (fs != options.sample_rate) {
    fail(Status::kShapeMismatch, "dry source rate does not match the render rate");
  }

  const std::size_t channels = scenario.array.num_mics();
  RenderResult result;
  result.clean_images.reserve(scenario.num_sources());

  std::size_t out_len = 0;
  std::vector<std::vector<std::vector<double>>> convs(scenario.num_sources());
  for (std::size_t i = 0; i < scenario.num_sources(); ++i) {
    auto rirs = simulate_rir(scenario, static_cast<int>(i), options);
    convs[i].resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      convs[i][c] = fft_convolve(dry_sources[i].channel(0), rirs[c].taps);
      out_len = std::max(out_len, convs[i][c].size());
    }
  }

  result.mixture = Waveform(channels, out_len, fs);
  for (std::size_t i = 0; i < scenario.num_sources(); ++i) {
    Waveform image(channels, out_len, fs);
    for (std::size_t c = 0; c < channels; ++c) {
      auto dst = image.channel(c);
      const auto& src = convs[i][c];
      for (std::size_t s = 0; s < src.size(); ++s) dst[s] = src[s];
    }
    for (std::size_t c = 0; c < channels; ++c) {
      auto mix = result.mixture.channel(c);
      auto img = image.channel(c);
      for (std::size_t s = 0; s < out_len; ++s) mix[s] += img[s];
    }
    result.clean_images.push_back(std::move(image));
  }
  return result;
}

std::size_t direct_path_peak(const Rir& rir) {
  if (rir.taps.empty()) fail(Status::kInvalidArgument, "empty RIR");
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t i = 0; i < rir.taps.size(); ++i) {
    const double v = std::abs(rir.taps[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

double schroeder_t60(const Rir& rir) {
  const auto& h = rir.taps;
  if (h.size() < 16) fail(Status::kInvalidArgument, "RIR too short for decay fit");
  std::vector<double> edc(h.size());
  double acc = 0.0;
  for (std::size_t i = h.size(); i-- > 0;) {
    acc += h[i] * h[i];
    edc[i] = acc;
  }
  if (acc <= 0.0) fail(Status::kNumeric, "RIR has no energy");
  const double fs = rir.sample_rate;
  // Least-squares line through the EDC between -5 and -25 dB, extrapolated.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < edc.size(); ++i) {
    const double db = 10.0 * std::log10(edc[i] / acc + 1e-300);
    if (db > -5.0 || db < -25.0) continue;
    const double t = static_cast<double>(i) / fs;
    sx += t;
    sy += db;
    sxx += t * t;
    sxy += t * db;
    ++count;
  }
  if (count < 8) fail(Status::kNumeric, "decay range too short for T60 fit");
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) fail(Status::kNumeric, "degenerate T60 fit");
  const double slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
  if (slope >= 0.0) fail(Status::kNumeric, "non-decaying RIR");
  return -60.0 / slope;
}

}  // namespace tsel
