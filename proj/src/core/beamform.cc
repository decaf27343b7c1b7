#include "core/beamform.h"

#include <cmath>

#include "core/error.h"

namespace tsel {
namespace {

constexpr double kDegenerateEps = 1e-8;

// Solve A X = B for X by Gaussian elimination with partial pivoting.
// A is n x n, B is n x m, both row-major, overwritten in place.
void solve_linear(std::vector<std::complex<double>>& a,
                  std::vector<std::complex<double>>& b, std::size_t n,
                  std::size_t m, std::size_t bin) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-300) {
      fail(Status::kNumeric, "degenerate SCM pair at bin " + std::to_string(bin));
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      for (std::size_t k = 0; k < m; ++k) std::swap(b[col * m + k], b[pivot * m + k]);
    }
    const std::complex<double> inv_p = 1.0 / a[col * n + col];
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const std::complex<double> factor = a[r * n + col] * inv_p;
      if (factor == std::complex<double>{0.0, 0.0}) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= factor * a[col * n + k];
      for (std::size_t k = 0; k < m; ++k) b[r * m + k] -= factor * b[col * m + k];
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    const std::complex<double> inv_p = 1.0 / a[r * n + r];
    for (std::size_t k = 0; k < m; ++k) b[r * m + k] *= inv_p;
  }
}

}  // namespace

Scm::Scm(std::size_t bins_f, std::size_t channels)
    : bins_f_(bins_f),
      channels_(channels),
      m_(bins_f * channels * channels, {0.0, 0.0}) {
  if (bins_f_ < 1 || channels_ < 1) {
    fail(Status::kInvalidArgument, "SCM needs >= 1 bin and >= 1 channel");
  }
}

Scm estimate_scm(const TfMask& mask, const Spectrogram& mixture,
                 ScmWeighting weighting, ScmDiagnostics* diagnostics) {
  if (mask.frames() != mixture.frames() || mask.bins() != mixture.bins()) {
    fail(Status::kShapeMismatch, "mask shape does not match the mixture");
  }
  const std::size_t C = mixture.channels();
  const std::size_t T = mixture.frames();
  const std::size_t F = mixture.bins();
  Scm scm(F, C);
  std::vector<std::complex<double>> y(C);

  for (std::size_t f = 0; f < F; ++f) {
    std::complex<double> weight_sum{0.0, 0.0};
    for (std::size_t t = 0; t < T; ++t) {
      const std::complex<double> mv = mask.at(t, f);
      std::complex<double> w;
      if (weighting == ScmWeighting::kMagnitudeSquared) {
        w = {std::norm(mv), 0.0};
      } else {
        w = mv;
      }
      if (w == std::complex<double>{0.0, 0.0}) continue;
      weight_sum += w;
      for (std::size_t c = 0; c < C; ++c) y[c] = mixture.at(c, t, f);
      for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
          scm.at(f, i, j) += w * y[i] * std::conj(y[j]);
        }
      }
    }
    if (std::abs(weight_sum) < kDivEps) {
      for (std::size_t i = 0; i < C; ++i) {
        for (std::size_t j = 0; j < C; ++j) {
          scm.at(f, i, j) = i == j ? std::complex<double>{kDegenerateEps, 0.0}
                                   : std::complex<double>{0.0, 0.0};
        }
      }
      if (diagnostics) diagnostics->degenerate_bins.push_back(f);
      continue;
    }
    const std::complex<double> inv = 1.0 / weight_sum;
    for (std::size_t i = 0; i < C; ++i) {
      for (std::size_t j = 0; j < C; ++j) scm.at(f, i, j) *= inv;
    }
  }
  return scm;
}

BeamformerWeights mvdr_weights(const Scm& phi_tgt, const Scm& phi_inf,
                               int reference_mic) {
  if (phi_tgt.bins() != phi_inf.bins() || phi_tgt.channels() != phi_inf.channels()) {
    fail(Status::kShapeMismatch, "SCM shapes differ");
  }
  const std::size_t C = phi_tgt.channels();
  const std::size_t F = phi_tgt.bins();
  if (reference_mic < 0 || static_cast<std::size_t>(reference_mic) >= C) {
    fail(Status::kInvalidArgument, "reference mic out of range");
  }

  BeamformerWeights out;
  out.bins = F;
  out.channels = C;
  out.reference_mic = reference_mic;
  out.w.assign(F * C, {0.0, 0.0});

  std::vector<std::complex<double>> a(C * C), b(C * C);
  for (std::size_t f = 0; f < F; ++f) {
    double diag_mean = 0.0;
    for (std::size_t i = 0; i < C; ++i) diag_mean += phi_inf.at(f, i, i).real();
    diag_mean /= static_cast<double>(C);
    const double loading = kDiagonalLoading * diag_mean;

    for (std::size_t i = 0; i < C; ++i) {
      for (std::size_t j = 0; j < C; ++j) {
        a[i * C + j] = phi_inf.at(f, i, j);
        b[i * C + j] = phi_tgt.at(f, i, j);
      }
      a[i * C + i] += loading;
    }
    solve_linear(a, b, C, C, f);  // b := Phi_inf^-1 Phi_tgt

    std::complex<double> trace{0.0, 0.0};
    for (std::size_t i = 0; i < C; ++i) trace += b[i * C + i];
    if (std::abs(trace) < kDivEps) {
      fail(Status::kNumeric, "degenerate SCM pair at bin " + std::to_string(f));
    }
    const std::complex<double> inv_trace = 1.0 / trace;
    const auto u = static_cast<std::size_t>(reference_mic);
    for (std::size_t i = 0; i < C; ++i) {
      out.at(f, i) = b[i * C + u] * inv_trace;  // (A/tr A) * u, u one-hot
    }
  }
  return out;
}

Spectrogram apply_beamformer(const BeamformerWeights& w, const Spectrogram& mixture) {
  if (w.bins != mixture.bins() || w.channels != mixture.channels()) {
    fail(Status::kShapeMismatch, "beamformer weights do not match the mixture");
  }
  Spectrogram out(1, mixture.frames(), mixture.params(), mixture.sample_rate(),
                  mixture.source_length());
  for (std::size_t t = 0; t < mixture.frames(); ++t) {
    for (std::size_t f = 0; f < mixture.bins(); ++f) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t c = 0; c < mixture.channels(); ++c) {
        acc += std::conj(w.at(f, c)) * mixture.at(c, t, f);
      }
      out.at(0, t, f) = acc;
    }
  }
  return out;
}

Waveform extract_target(const MaskPair& masks, const Spectrogram& mixture,
                        int reference_mic, ScmWeighting weighting) {
  const Scm phi_tgt = estimate_scm(masks.target, mixture, weighting);
  const Scm phi_inf = estimate_scm(masks.interferer, mixture, weighting);
  const BeamformerWeights w = mvdr_weights(phi_tgt, phi_inf, reference_mic);
  return istft(apply_beamformer(w, mixture));
}

}  // namespace tsel
