#pragma once

#include <array>
#include <cstddef>

namespace awgsim {

/// DAC output stage segmentation: three thermometer weights for the two MSBs
/// followed by six binary weights, in stream order T2, T1, T0, B5 .. B0.
inline constexpr std::size_t kSegmentCount = 9;
inline constexpr std::size_t kThermometerSegments = 3;
inline constexpr std::array<int, kSegmentCount> kNominalWeights{64, 64, 64, 32, 16, 8, 4, 2, 1};
inline constexpr int kFullScaleCode = 255;

}  // namespace awgsim
