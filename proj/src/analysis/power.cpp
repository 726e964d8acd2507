#include "awgsim/analysis/power.hpp"

#include <string>

#include "awgsim/error.hpp"

namespace awgsim::analysis {
namespace {

using namespace power_cal;

// Switching activity in GHz * V^2.
double activity(double rate_hz, double supply_v) { return (rate_hz / 1e9) * supply_v * supply_v; }

double total_at(double x) {
  const double x_min = activity(kMinRateHz, kMinSupplyV);
  const double x_max = activity(kMaxRateHz, kMaxSupplyV);
  return kMinTotalMw + (kMaxTotalMw - kMinTotalMw) * ((x - x_min) / (x_max - x_min));
}

}  // namespace

PowerReport power_model(double sample_rate_hz, double supply_v) {
  if (!(sample_rate_hz >= kMinRateHz && sample_rate_hz <= kMaxRateHz))
    raise(Errc::out_of_model_range, "sample rate " + std::to_string(sample_rate_hz / 1e9) + " GHz outside 2-34 GHz");
  if (!(supply_v >= kMinSupplyV && supply_v <= kMaxSupplyV))
    raise(Errc::out_of_model_range, "supply " + std::to_string(supply_v) + " V outside 0.6-1.0 V");

  const double x = activity(sample_rate_hz, supply_v);
  const double x_cal = activity(kCalRateHz, kCalSupplyV);
  PowerReport r;
  r.total_mw = total_at(x);
  r.digital_mw = kDigitalShare * total_at(x_cal) * (x / x_cal);
  r.analog_mw = r.total_mw - r.digital_mw;
  r.per_qubit_mw = r.total_mw / kQubitsPerDrive;
  return r;
}

}  // namespace awgsim::analysis
