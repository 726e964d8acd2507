#pragma once

namespace awgsim::analysis {

struct PowerReport {
  double total_mw = 0.0;
  double analog_mw = 0.0;
  double digital_mw = 0.0;
  double per_qubit_mw = 0.0;
};

namespace power_cal {
inline constexpr double kMinRateHz = 2e9;
inline constexpr double kMaxRateHz = 34e9;
inline constexpr double kMinSupplyV = 0.6;
inline constexpr double kMaxSupplyV = 1.0;
inline constexpr double kMinTotalMw = 40.0;   // at (kMinRateHz, kMinSupplyV)
inline constexpr double kMaxTotalMw = 140.0;  // at (kMaxRateHz, kMaxSupplyV)
inline constexpr double kCalRateHz = 14e9;
inline constexpr double kCalSupplyV = 0.8;
inline constexpr double kDigitalShare = 0.20;  // at the calibration point
inline constexpr double kQubitsPerDrive = 20.0;
/// Upper sample rate of the operating sub-range used for per-qubit estimates.
inline constexpr double kOperatingMaxRateHz = 14e9;
}  // namespace power_cal

/// total = P_leak + k * f * V^2 through the 40 mW / 140 mW corners; the digital
/// part scales with f * V^2 and is 20 % of the total at 14 GHz, 0.8 V.
/// Throws OutOfModelRange outside 2-34 GHz, 0.6-1.0 V.
PowerReport power_model(double sample_rate_hz, double supply_v);

}  // namespace awgsim::analysis
