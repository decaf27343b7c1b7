#include "core/metrics.h"

#include <cmath>

#include "core/error.h"

namespace tsel {
namespace {

void require_equal_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    fail(Status::kShapeMismatch, "signal lengths differ or are empty");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double si_sdr_db(std::span<const double> estimate, std::span<const double> reference) {
  require_equal_length(estimate, reference);
  const double ref_energy = dot(reference, reference);
  if (ref_energy <= 0.0) fail(Status::kInvalidArgument, "zero reference signal");
  const double scale = dot(estimate, reference) / ref_energy;
  double target_energy = 0.0, residual_energy = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double proj = scale * reference[i];
    const double res = proj - estimate[i];
    target_energy += proj * proj;
    residual_energy += res * res;
  }
  if (residual_energy <= 0.0 || target_energy <= 0.0) {
    // zero residual means a perfect (up to scale) estimate; zero projection
    // means an orthogonal estimate with -inf ratio
    return residual_energy <= 0.0 ? kSiSdrCapDb : -kSiSdrCapDb;
  }
  const double db = 10.0 * std::log10(target_energy / residual_energy);
  return std::fmin(std::fmax(db, -kSiSdrCapDb), kSiSdrCapDb);
}

double sdr_db(std::span<const double> estimate, std::span<const double> reference) {
  require_equal_length(estimate, reference);
  const double ref_energy = dot(reference, reference);
  if (ref_energy <= 0.0) fail(Status::kInvalidArgument, "zero reference signal");
  double residual_energy = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double res = reference[i] - estimate[i];
    residual_energy += res * res;
  }
  if (residual_energy <= 0.0) return kSiSdrCapDb;
  const double db = 10.0 * std::log10(ref_energy / residual_energy);
  return std::fmin(std::fmax(db, -kSiSdrCapDb), kSiSdrCapDb);
}

double cross_entropy(std::span<const double> predicted, std::span<const double> label) {
  require_equal_length(predicted, label);
  double sum = 0.0;
  for (double v : predicted) {
    if (v < 0.0) fail(Status::kInvalidArgument, "predicted probabilities must be >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    fail(Status::kInvalidArgument, "predicted probabilities must sum to 1");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (label[i] == 0.0) continue;
    acc -= label[i] * std::log(predicted[i] + kLogEps);
  }
  return acc;
}

LocalizerLoss localizer_loss(std::span<const double> beam_estimate,
                             std::span<const double> target_reference,
                             std::span<const double> p_hat,
                             std::span<const double> p, const DoaCoding& d_hat,
                             const DoaCoding& d, const LossWeights& weights,
                             DoaErrorNorm norm) {
  LocalizerLoss loss;
  loss.si_sdr_term = -si_sdr_db(beam_estimate, target_reference);
  loss.ce_term = cross_entropy(p_hat, p);
  loss.mse_term = doa_mse(d_hat, d, norm);
  loss.total = loss.si_sdr_term + weights.alpha * loss.ce_term +
               weights.beta * loss.mse_term;
  return loss;
}

ExtractionLoss extraction_loss(std::span<const double> extracted,
                               std::span<const double> target_reference,
                               std::span<const double> q_hat,
                               std::span<const double> p, double gamma) {
  ExtractionLoss loss;
  loss.si_sdr_term = -si_sdr_db(extracted, target_reference);
  loss.ce_term = cross_entropy(q_hat, p);
  loss.total = loss.si_sdr_term + gamma * loss.ce_term;
  return loss;
}

double doa_abs_error_deg(const DoaCoding& estimate, double truth_theta_deg) {
  const int est = argmax_angle(estimate);
  return angular_distance(static_cast<double>(est), truth_theta_deg);
}

}  // namespace tsel
