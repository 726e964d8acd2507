#include "awgsim/error.hpp"

namespace awgsim {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::capacity_exceeded: return "CapacityExceeded";
    case Errc::invalid_range: return "InvalidRange";
    case Errc::invalid_loop: return "InvalidLoop";
    case Errc::non_monotonic_edges: return "NonMonotonicEdges";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::invalid_divisor: return "InvalidDivisor";
    case Errc::program_too_long: return "ProgramTooLong";
    case Errc::aliased_carrier: return "AliasedCarrier";
    case Errc::invalid_program: return "InvalidProgram";
    case Errc::zero_seed: return "ZeroSeed";
    case Errc::singular_system: return "SingularSystem";
    case Errc::non_coherent_tone: return "NonCoherentTone";
    case Errc::out_of_band_product: return "OutOfBandProduct";
    case Errc::degenerate_table: return "DegenerateTable";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::out_of_model_range: return "OutOfModelRange";
    case Errc::format_error: return "FormatError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

void raise(Errc code, const std::string& detail) { throw Error(code, detail); }

}  // namespace awgsim
