#pragma once

#include <complex>
#include <vector>

#include "core/mask.h"
#include "core/stft.h"
#include "core/waveform.h"

namespace tsel {

inline constexpr double kDiagonalLoading = 1e-6;  // relative to mean diagonal

// F x C x C spatial covariance tensor. With the default weighting every slice
// is Hermitian positive-semidefinite.
class Scm {
 public:
  Scm() = default;
  Scm(std::size_t bins_f, std::size_t channels);

  std::size_t bins() const { return bins_f_; }
  std::size_t channels() const { return channels_; }

  std::complex<double>& at(std::size_t f, std::size_t i, std::size_t j) {
    return m_[(f * channels_ + i) * channels_ + j];
  }
  const std::complex<double>& at(std::size_t f, std::size_t i, std::size_t j) const {
    return m_[(f * channels_ + i) * channels_ + j];
  }

 private:
  std::size_t bins_f_ = 0;
  std::size_t channels_ = 0;
  std::vector<std::complex<double>> m_;
};

// |cm|^2 keeps the estimate Hermitian PSD; the literal variant applies the
// complex mask value itself as the frame weight.
enum class ScmWeighting { kMagnitudeSquared, kLiteralComplex };

struct ScmDiagnostics {
  std::vector<std::size_t> degenerate_bins;  // slices replaced by eps*I
};

// Phi_f = (1/sum_t w_tf) sum_t w_tf * y_tf y_tf^H. Bins whose weights sum to
// ~zero yield eps*I and are listed in the diagnostics.
Scm estimate_scm(const TfMask& mask, const Spectrogram& mixture,
                 ScmWeighting weighting = ScmWeighting::kMagnitudeSquared,
                 ScmDiagnostics* diagnostics = nullptr);

struct BeamformerWeights {
  std::size_t bins = 0;
  std::size_t channels = 0;
  int reference_mic = 0;
  std::vector<std::complex<double>> w;  // F x C

  std::complex<double>& at(std::size_t f, std::size_t c) { return w[f * channels + c]; }
  const std::complex<double>& at(std::size_t f, std::size_t c) const {
    return w[f * channels + c];
  }
};

// w_f = (Phi_inf^-1 Phi_tgt / tr(Phi_inf^-1 Phi_tgt)) u, with Phi_inf
// diagonally loaded before inversion. Errors on degenerate SCM pairs.
BeamformerWeights mvdr_weights(const Scm& phi_tgt, const Scm& phi_inf,
                               int reference_mic);

// B_tf = w_f^H y_tf, single-channel output.
Spectrogram apply_beamformer(const BeamformerWeights& w, const Spectrogram& mixture);

// The full composition: SCMs from the mask pair, MVDR weights, beam spectrum,
// inverse transform.
Waveform extract_target(const MaskPair& masks, const Spectrogram& mixture,
                        int reference_mic,
                        ScmWeighting weighting = ScmWeighting::kMagnitudeSquared);

}  // namespace tsel
