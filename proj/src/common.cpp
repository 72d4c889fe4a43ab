#include "vtrack/error.hpp"
#include "vtrack/exec.hpp"

namespace vtrack {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MissingFile: return "MissingFile";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::OutOfRangeValue: return "OutOfRangeValue";
        case ErrorKind::IoFailure: return "IoFailure";
        case ErrorKind::OutOfBounds: return "OutOfBounds";
        case ErrorKind::DegenerateLine: return "DegenerateLine";
        case ErrorKind::DegenerateSeed: return "DegenerateSeed";
        case ErrorKind::DegenerateDirection: return "DegenerateDirection";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::SpecOutOfBounds: return "SpecOutOfBounds";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Rng make_stream(std::uint64_t master_seed, StreamKind kind, std::uint64_t stream_id,
                std::uint64_t index) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    const auto k = static_cast<std::uint64_t>(kind);
    std::seed_seq seq{lo(master_seed), hi(master_seed), lo(k), lo(stream_id),
                      hi(stream_id),   lo(index),       hi(index)};
    return Rng(seq);
}

}  // namespace vtrack
