#include "awgsim/analysis/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "awgsim/error.hpp"

namespace awgsim::analysis {
namespace {

// FFTW's planner is not reentrant; execution on a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

double to_db(double amplitude, double full_scale) {
  const double r = amplitude / full_scale;
  return r > 1e-20 ? 20.0 * std::log10(r) : kDbFloor;
}

}  // namespace

std::size_t Spectrum::bin_of(double f) const {
  const double x = f / bin_width();
  const double k = std::round(x);
  if (std::abs(x - k) > 1e-6)
    raise(Errc::non_coherent_tone, std::to_string(f) + " Hz is " + std::to_string(x - k) + " bins off-grid");
  if (k < 0.0 || k > static_cast<double>(record_length / 2))
    raise(Errc::out_of_band_product, std::to_string(f) + " Hz lies outside [0, fs/2]");
  return static_cast<std::size_t>(k);
}

double Spectrum::power(std::size_t k) const noexcept {
  const double a = amplitude[k];
  return (k == 0 || k == record_length / 2) ? a * a : 0.5 * a * a;
}

double snap_to_bin(double f, double sample_rate, std::size_t record) {
  const double width = sample_rate / static_cast<double>(record);
  return std::round(f / width) * width;
}

Spectrum spectrum(std::span<const double> samples, double sample_rate, std::size_t record,
                  double full_scale_amplitude, std::span<const double> declared_tones) {
  if (!is_power_of_two(record)) raise(Errc::invalid_argument, "record length must be a power of two");
  if (record > samples.size())
    raise(Errc::insufficient_samples, "record of " + std::to_string(record) + " exceeds " +
                                          std::to_string(samples.size()) + " available samples");
  if (!(sample_rate > 0.0) || !(full_scale_amplitude > 0.0))
    raise(Errc::invalid_argument, "sample rate and full scale must be positive");

  Spectrum s;
  s.sample_rate = sample_rate;
  s.record_length = record;
  s.full_scale_amplitude = full_scale_amplitude;
  for (double f : declared_tones) (void)s.bin_of(f);

  const std::size_t half = record / 2;
  std::unique_ptr<double, FftwDeleter> in(static_cast<double*>(fftw_malloc(sizeof(double) * record)));
  std::unique_ptr<fftw_complex, FftwDeleter> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (half + 1))));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(record), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy_n(samples.begin(), record, in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double n = static_cast<double>(record);
  s.frequency_hz.resize(half + 1);
  s.amplitude.resize(half + 1);
  s.dbfs.resize(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double mag = std::hypot(out.get()[k][0], out.get()[k][1]) / n;
    s.frequency_hz[k] = static_cast<double>(k) * s.bin_width();
    s.amplitude[k] = (k == 0 || k == half) ? mag : 2.0 * mag;
    s.dbfs[k] = to_db(s.amplitude[k], full_scale_amplitude);
  }
  return s;
}

Spectrum spectrum(const dac::AnalogTrace& trace, std::size_t record, double full_scale_amplitude,
                  std::span<const double> declared_tones) {
  if (!(trace.sample_period > 0.0)) raise(Errc::invalid_argument, "trace has no sample period");
  return spectrum(trace.samples, 1.0 / trace.sample_period, record, full_scale_amplitude, declared_tones);
}

namespace {

std::size_t band_limit(const Spectrum& spec, std::size_t band_end) {
  return band_end == 0 ? spec.bins() : std::min(band_end, spec.bins());
}

}  // namespace

double sfdr(const Spectrum& spec, std::span<const std::size_t> signal_bins, std::size_t band_end) {
  if (signal_bins.empty()) raise(Errc::invalid_argument, "sfdr needs at least one signal bin");
  double signal = kDbFloor;
  for (std::size_t k : signal_bins) {
    if (k == 0 || k >= spec.bins()) raise(Errc::invalid_argument, "signal bin out of range");
    signal = std::max(signal, spec.dbfs[k]);
  }
  const std::set<std::size_t> sig(signal_bins.begin(), signal_bins.end());
  double spur = kDbFloor;
  const std::size_t end = band_limit(spec, band_end);
  for (std::size_t k = 1; k < end; ++k)
    if (!sig.contains(k)) spur = std::max(spur, spec.dbfs[k]);
  return signal - spur;
}

double sndr(const Spectrum& spec, std::span<const std::size_t> signal_bins, std::size_t band_end) {
  if (signal_bins.empty()) raise(Errc::invalid_argument, "sndr needs at least one signal bin");
  const std::set<std::size_t> sig(signal_bins.begin(), signal_bins.end());
  double ps = 0.0, pn = 0.0;
  const std::size_t end = band_limit(spec, band_end);
  for (std::size_t k = 1; k < end; ++k) (sig.contains(k) ? ps : pn) += spec.power(k);
  if (pn <= 0.0) return -kDbFloor;
  return 10.0 * std::log10(ps / pn);
}

double im3(const Spectrum& spec, double f1, double f2) {
  if (!(f1 < f2)) raise(Errc::invalid_argument, "im3 requires f1 < f2");
  const auto k1 = static_cast<long long>(spec.bin_of(f1));
  const auto k2 = static_cast<long long>(spec.bin_of(f2));
  const long long lo = 2 * k1 - k2;
  const long long hi = 2 * k2 - k1;
  if (k1 <= 0 || lo <= 0 || hi >= static_cast<long long>(spec.record_length / 2))
    raise(Errc::out_of_band_product, "third-order products fall outside (0, fs/2)");
  const double tone = std::max(spec.dbfs[k1], spec.dbfs[k2]);
  return std::max(spec.dbfs[lo], spec.dbfs[hi]) - tone;
}

std::size_t alias_bin(std::size_t k, std::size_t record) noexcept {
  const std::size_t m = k % record;
  return m > record / 2 ? record - m : m;
}

double thd(const Spectrum& spec, double f0, int n_harmonics) {
  if (n_harmonics < 1) raise(Errc::invalid_argument, "n_harmonics must be at least 1");
  const std::size_t k0 = spec.bin_of(f0);
  if (k0 == 0 || k0 >= spec.record_length / 2) raise(Errc::out_of_band_product, "fundamental must lie in (0, fs/2)");
  std::set<std::size_t> used;
  double p = 0.0;
  for (int h = 2; h <= n_harmonics + 1; ++h) {
    const std::size_t k = alias_bin(k0 * static_cast<std::size_t>(h), spec.record_length);
    if (k == 0 || k == k0)
      raise(Errc::out_of_band_product, "harmonic " + std::to_string(h) + " folds onto DC or the fundamental");
    if (used.insert(k).second) p += spec.amplitude[k] * spec.amplitude[k];
  }
  return 100.0 * std::sqrt(p) / spec.amplitude[k0];
}

std::size_t peak_bin(const Spectrum& spec) {
  std::size_t best = 1;
  for (std::size_t k = 1; k < spec.bins(); ++k)
    if (spec.amplitude[k] > spec.amplitude[best]) best = k;
  return best;
}

}  // namespace awgsim::analysis
