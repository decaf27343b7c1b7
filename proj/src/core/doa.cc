#include "core/doa.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.h"

namespace tsel {

double angular_distance(double a_deg, double b_deg) {
  if (a_deg < 0.0 || a_deg > 180.0 || b_deg < 0.0 || b_deg > 180.0) {
    fail(Status::kInvalidArgument, "angles must lie in [0, 180] degrees");
  }
  return std::abs(a_deg - b_deg);
}

DoaCoding gaussian_coding(std::optional<double> theta_deg, double sigma) {
  if (sigma <= 0.0) fail(Status::kInvalidArgument, "sigma must be positive");
  DoaCoding coding;
  if (!theta_deg.has_value()) return coding;  // "no target" branch: all zeros
  const double theta = *theta_deg;
  if (theta < 0.0 || theta > 180.0) {
    fail(Status::kInvalidArgument, "theta must lie in [0, 180] degrees");
  }
  for (int i = 0; i < kNumAzimuths; ++i) {
    const double d = angular_distance(static_cast<double>(i), theta);
    coding.likelihoods[static_cast<std::size_t>(i)] =
        std::exp(-(d * d) / (sigma * sigma));
  }
  return coding;
}

int argmax_angle(const DoaCoding& coding) {
  if (coding.likelihoods.empty()) {
    fail(Status::kInvalidArgument, "empty DOA coding");
  }
  int best = 0;
  double best_v = coding.likelihoods[0];
  for (int i = 1; i < static_cast<int>(coding.likelihoods.size()); ++i) {
    const double v = coding.likelihoods[static_cast<std::size_t>(i)];
    if (v > best_v) {  // strict: ties keep the smaller angle
      best_v = v;
      best = i;
    }
  }
  bool all_zero = true;
  for (double v : coding.likelihoods) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) fail(Status::kNumeric, "no DOA evidence");
  return best;
}

SteeringTable::SteeringTable(const ArrayGeometry& geometry,
                             const StftParams& params, int sample_rate,
                             double speed_of_sound) {
  geometry.validate();
  params.validate();
  if (geometry.num_mics() < 2) {
    fail(Status::kInvalidArgument, "steering table needs >= 2 microphones");
  }
  bins_f_ = static_cast<std::size_t>(params.num_bins());
  channels_ = geometry.num_mics();
  phases_.resize(static_cast<std::size_t>(kNumAzimuths) * bins_f_ * channels_);

  std::vector<double> offsets(channels_);
  for (std::size_t c = 0; c < channels_; ++c) {
    offsets[c] = geometry.axial_offset(static_cast<int>(c));
  }
  for (int i = 0; i < kNumAzimuths; ++i) {
    const double cos_theta = std::cos(static_cast<double>(i) * std::numbers::pi / 180.0);
    for (std::size_t f = 0; f < bins_f_; ++f) {
      const double f_hz = static_cast<double>(f) * sample_rate / params.n_fft;
      const double omega = 2.0 * std::numbers::pi * f_hz;
      for (std::size_t c = 0; c < channels_; ++c) {
        phases_[(static_cast<std::size_t>(i) * bins_f_ + f) * channels_ + c] =
            omega * offsets[c] * cos_theta / speed_of_sound;
      }
    }
  }
}

DoaCoding estimate_doa(const TfMask& mask, const Spectrogram& mixture,
                       const SteeringTable& table) {
  if (mixture.channels() < 2) {
    fail(Status::kInvalidArgument, "DOA requires >= 2 channels");
  }
  if (mask.frames() != mixture.frames() || mask.bins() != mixture.bins()) {
    fail(Status::kShapeMismatch, "mask shape does not match the mixture");
  }
  if (table.bins() != mixture.bins() || table.channels() != mixture.channels()) {
    fail(Status::kShapeMismatch, "steering table does not match the mixture");
  }
  const std::size_t C = mixture.channels();
  const std::size_t T = mixture.frames();
  const std::size_t F = mixture.bins();

  // response(theta) = sum_{t,f} |sum_c m Y_c e^{-j phase}|^2 collapses to a
  // quadratic form over the per-bin covariance of the masked spectrogram.
  std::vector<std::complex<double>> cov(F * C * C, {0.0, 0.0});
  std::vector<std::complex<double>> m_y(C);
  for (std::size_t f = 0; f < F; ++f) {
    auto* slice = cov.data() + f * C * C;
    for (std::size_t t = 0; t < T; ++t) {
      const std::complex<double> m = mask.at(t, f);
      if (m == std::complex<double>{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < C; ++c) m_y[c] = m * mixture.at(c, t, f);
      for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
          slice[i * C + j] += m_y[i] * std::conj(m_y[j]);
        }
      }
    }
  }

  std::vector<double> response(kNumAzimuths, 0.0);
  std::vector<std::complex<double>> steer(C);
  for (int a = 0; a < kNumAzimuths; ++a) {
    double acc = 0.0;
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t c = 0; c < C; ++c) {
        const double p = table.phase(a, f, c);
        steer[c] = {std::cos(p), -std::sin(p)};  // e^{-j phase}
      }
      const auto* slice = cov.data() + f * C * C;
      std::complex<double> quad{0.0, 0.0};
      for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
          quad += steer[i] * slice[i * C + j] * std::conj(steer[j]);
        }
      }
      acc += quad.real();
    }
    response[static_cast<std::size_t>(a)] = acc;
  }

  const double lo = *std::min_element(response.begin(), response.end());
  const double hi = *std::max_element(response.begin(), response.end());
  DoaCoding coding;
  if (hi - lo <= 0.0) {
    return coding;  // flat response carries no evidence; argmax will reject it
  }
  for (int a = 0; a < kNumAzimuths; ++a) {
    coding.likelihoods[static_cast<std::size_t>(a)] =
        (response[static_cast<std::size_t>(a)] - lo) / (hi - lo);
  }
  return coding;
}

double doa_mse(const DoaCoding& estimate, const DoaCoding& truth,
               DoaErrorNorm norm) {
  if (estimate.likelihoods.size() != truth.likelihoods.size()) {
    fail(Status::kShapeMismatch, "DOA coding lengths differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < estimate.likelihoods.size(); ++i) {
    const double d = estimate.likelihoods[i] - truth.likelihoods[i];
    acc += norm == DoaErrorNorm::kSquared ? d * d : std::abs(d);
  }
  return acc;
}

}  // namespace tsel
