#pragma once

#include "vtrack/exec.hpp"
#include "vtrack/vec2.hpp"

namespace vtrack {

/// Smallest admissible half-width, in pixels.
inline constexpr double kMinHalfWidth = 0.5;

/// One vessel hypothesis: unit direction, interior anchor point and the
/// distances from the anchor to the left and right edges.
struct VesselState {
    Vec2 dir{1.0, 0.0};
    Vec2 anchor{};
    double wl = kMinHalfWidth;
    double wr = kMinHalfWidth;

    bool valid() const;

    friend bool operator==(const VesselState&, const VesselState&) = default;
};

/// Per-step motion noise. Sigmas may be zero; step must be positive.
struct NoiseConfig {
    double sigma_theta = 0.15;  // direction rotation, radians
    double sigma_a = 0.5;       // lateral anchor jitter, pixels
    double sigma_w = 0.3;       // half-width jitter, pixels
    double step = 2.0;          // pixels

    /// Throws InvalidArgument on negative sigmas or non-positive step.
    void validate() const;
};

struct EdgePair {
    Vec2 left;
    Vec2 right;
};

/// (x, y) -> (-y, x).
constexpr Vec2 perpendicular(const Vec2& v) { return {-v.y, v.x}; }

/// Draws the successor of `s` under the motion model: rotate the direction by
/// a Gaussian angle, advance the anchor one step along it plus lateral jitter,
/// and jitter both half-widths (floored at kMinHalfWidth). Always consumes
/// exactly four normal variates from `rng`.
VesselState propagate(const VesselState& s, const NoiseConfig& cfg, Rng& rng);

/// Left edge at anchor + wl * perp(dir), right edge at anchor - wr * perp(dir).
EdgePair edges_of(const VesselState& s);

}  // namespace vtrack
