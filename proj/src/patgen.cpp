#include "awgsim/patgen.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "awgsim/error.hpp"
#include "awgsim/simd/kernels.hpp"

namespace awgsim::patgen {
namespace {

constexpr char kMagic[8] = {'A', 'W', 'G', 'I', 'M', 'G', '0', '1'};

}  // namespace

SramImage::SramImage(std::span<const std::uint8_t, kCapacity> bytes, std::size_t sample_count)
    : sample_count_(sample_count) {
  if (sample_count == 0 || sample_count > kCapacity || sample_count % kFrameSamples != 0)
    raise(Errc::invalid_range, "sample_count " + std::to_string(sample_count) +
                                   " must be a whole number of 32-sample frames in [32, 32768]");
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
}

Word SramImage::word(WordAddress a) const noexcept {
  Word w;
  std::memcpy(w.data(), bytes_.data() + byte_offset(a, 0), kWordBytes);
  return w;
}

SramImage pack_image(std::span<const std::uint8_t> samples) {
  if (samples.empty()) raise(Errc::invalid_argument, "cannot pack an empty sample sequence");
  if (samples.size() > kCapacity)
    raise(Errc::capacity_exceeded, std::to_string(samples.size()) + " samples exceed the " +
                                       std::to_string(kCapacity) + "-sample pattern memory");
  const std::size_t frames = (samples.size() + kFrameSamples - 1) / kFrameSamples;

  std::array<std::uint8_t, kCapacity> bytes;
  bytes.fill(kPadCode);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t half = 0; half < 2; ++half) {
      const std::size_t base = byte_offset(frame_word(f, half), 0);
      for (std::size_t b = 0; b < kWordBytes; ++b) {
        const std::size_t n = f * kFrameSamples + half * kWordBytes + b;
        if (n < samples.size()) bytes[base + b] = samples[n];
      }
    }
  }
  return SramImage(bytes, frames * kFrameSamples);
}

std::vector<std::uint8_t> unpack_image(const SramImage& image) {
  std::vector<std::uint8_t> out;
  out.reserve(image.sample_count());
  const auto bytes = image.bytes();
  for (std::size_t f = 0; f < image.frame_count(); ++f)
    for (std::size_t half = 0; half < 2; ++half) {
      const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(byte_offset(frame_word(f, half), 0));
      out.insert(out.end(), first, first + kWordBytes);
    }
  return out;
}

Word rotate_word(const Word& w, unsigned rotation) noexcept {
  Word out;
  std::rotate_copy(w.begin(), w.begin() + (rotation % kWordBytes), w.end(), out.begin());
  return out;
}

std::vector<PatternFrame> run_sequencer(const SramImage& image, const SequencerConfig& cfg) {
  if (cfg.byte_rotation >= kWordBytes)
    raise(Errc::invalid_range, "byte_rotation " + std::to_string(cfg.byte_rotation) + " outside 0..15");
  if (cfg.frame_count == 0 || cfg.start_frame >= image.frame_count() ||
      cfg.frame_count > image.frame_count() - cfg.start_frame)
    raise(Errc::invalid_range, "frames [" + std::to_string(cfg.start_frame) + ", +" +
                                   std::to_string(cfg.frame_count) + ") overflow an image of " +
                                   std::to_string(image.frame_count()) + " frames");
  if (cfg.loop_count < 1) raise(Errc::invalid_loop, "loop_count must be at least 1");

  std::vector<PatternFrame> range(cfg.frame_count);
  for (std::size_t i = 0; i < cfg.frame_count; ++i) {
    const std::size_t f = cfg.start_frame + i;
    for (std::size_t half = 0; half < 2; ++half) {
      const Word w = rotate_word(image.word(frame_word(f, half)), cfg.byte_rotation);
      std::copy(w.begin(), w.end(), range[i].begin() + static_cast<std::ptrdiff_t>(half * kWordBytes));
    }
  }

  std::vector<PatternFrame> out;
  out.reserve(range.size() * cfg.loop_count);
  for (std::size_t l = 0; l < cfg.loop_count; ++l) out.insert(out.end(), range.begin(), range.end());
  return out;
}

QuarterRateStreams serialize_32to4(std::span<const PatternFrame> frames) {
  if (frames.empty()) raise(Errc::invalid_argument, "serializer needs at least one frame");
  constexpr std::size_t kCyclesPerFrame = kFrameSamples / 4;

  QuarterRateStreams out;
  for (auto& lane : out.nibbles) lane.resize(frames.size() * kCyclesPerFrame);

  std::array<std::array<std::uint8_t, kFrameSamples>, kSegmentCount> bits;
  simd::PlanePtrs planes;
  for (std::size_t s = 0; s < kSegmentCount; ++s) planes[s] = bits[s].data();

  for (std::size_t f = 0; f < frames.size(); ++f) {
    simd::encode_planes(frames[f], planes);
    for (std::size_t s = 0; s < kSegmentCount; ++s)
      for (std::size_t q = 0; q < kCyclesPerFrame; ++q) {
        const std::uint8_t* b = bits[s].data() + 4 * q;
        out.nibbles[s][f * kCyclesPerFrame + q] =
            static_cast<std::uint8_t>(b[0] | (b[1] << 1) | (b[2] << 2) | (b[3] << 3));
      }
  }
  return out;
}

BitPlaneStreams mux_4to1(const QuarterRateStreams& quarter) {
  BitPlaneStreams out;
  for (std::size_t s = 0; s < kSegmentCount; ++s) {
    const auto& in = quarter.nibbles[s];
    auto& plane = out.planes[s];
    plane.resize(in.size() * 4);
    for (std::size_t q = 0; q < in.size(); ++q)
      for (std::size_t lane = 0; lane < 4; ++lane) plane[4 * q + lane] = (in[q] >> lane) & 1u;
  }
  return out;
}

BitPlaneStreams serialize(std::span<const PatternFrame> frames) {
  return mux_4to1(serialize_32to4(frames));
}

std::vector<std::uint8_t> deserialize(const BitPlaneStreams& streams) {
  const std::size_t n = streams.size();
  simd::ConstPlanePtrs planes;
  for (std::size_t s = 0; s < kSegmentCount; ++s) {
    if (streams.planes[s].size() != n) raise(Errc::invalid_argument, "segment streams differ in length");
    planes[s] = streams.planes[s].data();
  }
  std::vector<std::uint8_t> codes(n);
  simd::decode_planes(planes, codes);
  return codes;
}

std::vector<std::uint8_t> encode_image_file(const SramImage& image) {
  std::vector<std::uint8_t> out(kImageFileBytes, 0);
  std::memcpy(out.data(), kMagic, sizeof kMagic);
  const auto count = static_cast<std::uint32_t>(image.sample_count());
  for (int i = 0; i < 4; ++i) out[8 + i] = static_cast<std::uint8_t>(count >> (8 * i));
  std::copy(image.bytes().begin(), image.bytes().end(), out.begin() + kImageHeaderBytes);
  return out;
}

SramImage decode_image_file(std::span<const std::uint8_t> file) {
  if (file.size() != kImageFileBytes)
    raise(Errc::format_error, "image file must be " + std::to_string(kImageFileBytes) + " bytes, got " +
                                  std::to_string(file.size()));
  if (std::memcmp(file.data(), kMagic, sizeof kMagic) != 0)
    raise(Errc::format_error, "bad image magic (expected AWGIMG01)");
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i) count |= static_cast<std::uint32_t>(file[8 + i]) << (8 * i);
  for (int i = 12; i < 16; ++i)
    if (file[i] != 0) raise(Errc::format_error, "reserved header bytes must be zero");
  try {
    return SramImage(file.subspan<kImageHeaderBytes, kCapacity>(), count);
  } catch (const Error& e) {
    raise(Errc::format_error, e.what());
  }
}

void write_image_file(const std::filesystem::path& path, const SramImage& image) {
  const auto bytes = encode_image_file(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(Errc::io_error, "short write to " + path.string());
}

SramImage read_image_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_image_file(bytes);
}

}  // namespace awgsim::patgen
