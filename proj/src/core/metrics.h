#pragma once

#include <span>
#include <string>

#include "core/doa.h"

namespace tsel {

inline constexpr double kSiSdrCapDb = 100.0;
inline constexpr double kLogEps = 1e-8;

// Scale-invariant signal-to-distortion ratio in dB:
// 20 log10(||a s|| / ||a s - s_hat||) with a = s_hat^T s / s^T s.
// Capped at kSiSdrCapDb; errors on a zero reference or length mismatch.
double si_sdr_db(std::span<const double> estimate, std::span<const double> reference);

// Scale-sensitive SNR-style ratio 10 log10(||s||^2 / ||s - s_hat||^2).
double sdr_db(std::span<const double> estimate, std::span<const double> reference);

// -sum_i p_i log(p_hat_i + eps); validates that p_hat is a simplex vector.
double cross_entropy(std::span<const double> predicted, std::span<const double> label);

struct LossWeights {
  double alpha = 0.5;
  double beta = 10.0;
  double gamma = 0.5;
};

struct LocalizerLoss {
  double total = 0.0;
  double si_sdr_term = 0.0;  // negated SI-SDR of the beam output
  double ce_term = 0.0;
  double mse_term = 0.0;
};

// L = -SI-SDR(beam, ref) + alpha * CE(p_hat, p) + beta * MSE(d_hat, d).
LocalizerLoss localizer_loss(std::span<const double> beam_estimate,
                             std::span<const double> target_reference,
                             std::span<const double> p_hat,
                             std::span<const double> p,
                             const DoaCoding& d_hat, const DoaCoding& d,
                             const LossWeights& weights = {},
                             DoaErrorNorm norm = DoaErrorNorm::kSquared);

struct ExtractionLoss {
  double total = 0.0;
  double si_sdr_term = 0.0;
  double ce_term = 0.0;
};

// L = -SI-SDR(extracted, ref) + gamma * CE(q_hat, p).
ExtractionLoss extraction_loss(std::span<const double> extracted,
                               std::span<const double> target_reference,
                               std::span<const double> q_hat,
                               std::span<const double> p, double gamma = 0.5);

// angular_distance(argmax(estimate), truth); propagates the all-zero error.
double doa_abs_error_deg(const DoaCoding& estimate, double truth_theta_deg);

// Per-(scenario, target-role) evaluation record.
struct MetricReport {
  double si_sdr = 0.0;
  double sdr = 0.0;
  double si_sdr_unprocessed = 0.0;
  double si_sdr_improvement = 0.0;
  double doa_error_deg = 0.0;
  double doa_mse = 0.0;
  double angle_separation = 0.0;
  std::string f0_pairing;  // "same" | "different" | "n/a"
  double rt60 = 0.0;
};

}  // namespace tsel
