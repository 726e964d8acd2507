#pragma once

// Coherent, rectangular-window spectral metrology. Every analysed tone must
// sit exactly on a bin; callers snap frequencies with snap_to_bin().

#include <cstddef>
#include <span>
#include <vector>

#include "awgsim/dacmodel.hpp"

namespace awgsim::analysis {

/// Magnitudes below this are reported at the floor instead of -inf.
inline constexpr double kDbFloor = -400.0;

struct Spectrum {
  double sample_rate = 0.0;
  std::size_t record_length = 0;
  double full_scale_amplitude = 1.0;
  std::vector<double> frequency_hz;  // bins 0 .. N/2
  std::vector<double> amplitude;     // single-sided peak amplitude, input units
  std::vector<double> dbfs;          // 20 log10(amplitude / full_scale_amplitude)

  double bin_width() const noexcept { return sample_rate / static_cast<double>(record_length); }
  std::size_t bins() const noexcept { return amplitude.size(); }
  /// Exact bin index of f. Throws NonCoherentTone when f is more than 1e-6
  /// bins off-grid and OutOfBandProduct outside [0, fs/2].
  std::size_t bin_of(double f) const;
  /// Mean-square power carried by bin k.
  double power(std::size_t k) const noexcept;
};

double snap_to_bin(double f, double sample_rate, std::size_t record);

/// Single-sided magnitude spectrum of the first `record` samples (a power of
/// two). Declared tones are checked for coherence before transforming.
Spectrum spectrum(std::span<const double> samples, double sample_rate, std::size_t record,
                  double full_scale_amplitude = 1.0, std::span<const double> declared_tones = {});
Spectrum spectrum(const dac::AnalogTrace& trace, std::size_t record, double full_scale_amplitude = 1.0,
                  std::span<const double> declared_tones = {});

/// Largest signal bin minus the largest non-signal, non-DC bin, dB. A non-zero
/// band_end limits the search to bins below it (e.g. the DAC Nyquist bin of an
/// oversampled trace, so hold images are not counted as spurs).
double sfdr(const Spectrum& spec, std::span<const std::size_t> signal_bins, std::size_t band_end = 0);

/// Signal power over all other non-DC power, dB, within the same band.
double sndr(const Spectrum& spec, std::span<const std::size_t> signal_bins, std::size_t band_end = 0);

/// Larger of the 2f1-f2 / 2f2-f1 products relative to the larger tone, dBc.
double im3(const Spectrum& spec, double f1, double f2);

/// sqrt(sum of harmonic powers) / fundamental, percent, over harmonic orders
/// 2 .. n_harmonics + 1. Harmonics above Nyquist are folded; a harmonic that
/// folds onto DC or the fundamental raises OutOfBandProduct.
double thd(const Spectrum& spec, double f0, int n_harmonics);

/// Folds bin index k of an N-point transform into [0, N/2].
std::size_t alias_bin(std::size_t k, std::size_t record) noexcept;

/// Index of the largest non-DC bin.
std::size_t peak_bin(const Spectrum& spec);

}  // namespace awgsim::analysis
