#pragma once

// On-chip pattern source: SRAM image, sequencer with looping and byte
// rotation, and the 32:4 / 4:1 serializer chain feeding the DAC segments.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "awgsim/segments.hpp"

namespace awgsim::patgen {

inline constexpr std::size_t kBanks = 4;
inline constexpr std::size_t kWordsPerBank = 512;
inline constexpr std::size_t kWordBytes = 16;
inline constexpr std::size_t kBankBytes = kWordsPerBank * kWordBytes;
inline constexpr std::size_t kCapacity = kBanks * kBankBytes;  // 32768 samples
inline constexpr std::size_t kFrameSamples = 32;               // one C32 period, 256 bits
inline constexpr std::size_t kMaxFrames = kCapacity / kFrameSamples;
inline constexpr std::uint8_t kPadCode = 128;

using Word = std::array<std::uint8_t, kWordBytes>;
using PatternFrame = std::array<std::uint8_t, kFrameSamples>;

struct WordAddress {
  std::size_t bank;
  std::size_t word;
};

/// Frame f occupies words 2*(f/4) and 2*(f/4)+1 of bank f%4, samples in
/// ascending time order across the two words.
constexpr WordAddress frame_word(std::size_t frame, std::size_t half) noexcept {
  return {frame % kBanks, 2 * (frame / kBanks) + half};
}

constexpr std::size_t byte_offset(WordAddress a, std::size_t byte) noexcept {
  return a.bank * kBankBytes + a.word * kWordBytes + byte;
}

/// 32 KB pattern memory, stored bank-major (bank 0 word 0 byte 0 first).
/// Bytes beyond sample_count hold the padding code.
class SramImage {
 public:
  /// One frame of padding code.
  SramImage() { bytes_.fill(kPadCode); }
  /// Validates sample_count (1..32768, whole frames).
  SramImage(std::span<const std::uint8_t, kCapacity> bytes, std::size_t sample_count);

  std::span<const std::uint8_t, kCapacity> bytes() const noexcept { return bytes_; }
  std::size_t sample_count() const noexcept { return sample_count_; }
  std::size_t frame_count() const noexcept { return sample_count_ / kFrameSamples; }
  Word word(WordAddress a) const noexcept;

  friend bool operator==(const SramImage&, const SramImage&) = default;

 private:
  std::array<std::uint8_t, kCapacity> bytes_{};
  std::size_t sample_count_ = kFrameSamples;
};

/// Pads to a whole number of frames with kPadCode. Throws CapacityExceeded
/// above 32768 samples and InvalidArgument on an empty input.
SramImage pack_image(std::span<const std::uint8_t> samples);
std::vector<std::uint8_t> unpack_image(const SramImage& image);

struct SequencerConfig {
  std::size_t start_frame = 0;
  std::size_t frame_count = 0;
  std::size_t loop_count = 1;
  unsigned byte_rotation = 0;

  static SequencerConfig whole(const SramImage& image) { return {0, image.frame_count(), 1, 0}; }
};

Word rotate_word(const Word& w, unsigned rotation) noexcept;

/// Emits frame_count * loop_count frames. Each 16-byte word is rotated left
/// by byte_rotation positions before frame assembly.
std::vector<PatternFrame> run_sequencer(const SramImage& image, const SequencerConfig& cfg);

/// Nine full-rate segment streams (T2, T1, T0, B5 .. B0), one 0/1 byte per sample.
struct BitPlaneStreams {
  std::array<std::vector<std::uint8_t>, kSegmentCount> planes;

  std::size_t size() const noexcept { return planes[0].size(); }
};

/// Output of the nine 32:4 serializers: per segment, one 4-bit lane group per
/// quarter-rate cycle; bit j of a nibble is the sample played on full-rate edge 4q+j.
struct QuarterRateStreams {
  std::array<std::vector<std::uint8_t>, kSegmentCount> nibbles;

  std::size_t cycles() const noexcept { return nibbles[0].size(); }
};

QuarterRateStreams serialize_32to4(std::span<const PatternFrame> frames);
BitPlaneStreams mux_4to1(const QuarterRateStreams& quarter);

/// serialize = mux_4to1 . serialize_32to4; order of output samples equals input order.
BitPlaneStreams serialize(std::span<const PatternFrame> frames);

/// Thermometer decode of the segment streams back to 8-bit codes.
std::vector<std::uint8_t> deserialize(const BitPlaneStreams& streams);

// Image file: 16-byte header {"AWGIMG01", u32 LE sample_count, 4 zero bytes}
// followed by the 32768 raw bytes.
inline constexpr std::size_t kImageHeaderBytes = 16;
inline constexpr std::size_t kImageFileBytes = kImageHeaderBytes + kCapacity;

std::vector<std::uint8_t> encode_image_file(const SramImage& image);
SramImage decode_image_file(std::span<const std::uint8_t> file);
void write_image_file(const std::filesystem::path& path, const SramImage& image);
SramImage read_image_file(const std::filesystem::path& path);

}  // namespace awgsim::patgen
