#pragma once

#include <cstdint>
#include <random>

namespace vtrack {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both paths produce bit-identical results.
enum class Exec { serial, parallel };

using Rng = std::mt19937_64;

/// Stream families; keeps particle, resampling and noise streams disjoint.
enum class StreamKind : std::uint64_t {
    particle = 1,
    resample = 2,
    phantom_noise = 3,
};

/// Independent engine keyed by (master seed, family, stream id, index).
Rng make_stream(std::uint64_t master_seed, StreamKind kind, std::uint64_t stream_id,
                std::uint64_t index);

}  // namespace vtrack
