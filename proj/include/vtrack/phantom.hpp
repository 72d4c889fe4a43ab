#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "vtrack/exec.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/raster.hpp"
#include "vtrack/vec2.hpp"

namespace vtrack {

/// Centerline through the given points, in pixel coordinates.
struct Polyline {
    std::vector<Vec2> points;
};

/// Sinusoid around a straight axis: start + axis * t + perp(axis) * amplitude *
/// sin(2 pi t / period + phase), for t in [0, length].
struct SineCurve {
    Vec2 start;
    Vec2 axis{0.0, 1.0};
    double length = 100.0;
    double amplitude = 0.0;
    double period = 100.0;
    double phase = 0.0;
};

using CenterlineSpec = std::variant<Polyline, SineCurve>;

/// Total vessel width as a function of arc length s over a vessel of length L.
struct WidthProfile {
    enum class Kind { constant, taper, bump };
    Kind kind = Kind::constant;
    double start = 6.0;   // constant value, taper start, or bump baseline
    double end = 6.0;     // taper end
    double peak = 6.0;    // bump maximum
    double centre = 0.5;  // bump position as a fraction of L
    double spread = 10.0; // bump standard deviation, pixels

    double at(double s, double length) const;
};

struct VesselSpec {
    CenterlineSpec centerline;
    WidthProfile width;
};

struct PhantomSpec {
    std::size_t width = 128;
    std::size_t height = 128;
    std::vector<VesselSpec> vessels;
    double ridge_sigma_c = 2.0;
    double ridge_sigma_e = 0.75;
    double interior_softness = 1.0;
    double noise_level = 0.0;
    double reflex_depth = 0.0;  // central light reflex; 0 disables it
    double reflex_sigma = 1.0;

    /// Structural checks (positive sizes and scales, well-formed curves).
    /// Throws InvalidArgument. Canvas containment is checked during rendering.
    void validate() const;

    /// Reflection about the vertical image axis, x -> (width - 1) - x.
    PhantomSpec mirrored() const;
};

struct TruthSample {
    double arc_length = 0.0;
    Vec2 center;
    Vec2 tangent;
    Vec2 left;
    Vec2 right;
    double width = 0.0;
};

struct VesselTruth {
    std::vector<TruthSample> samples;

    double length() const { return samples.empty() ? 0.0 : samples.back().arc_length; }
};

struct GroundTruth {
    std::vector<VesselTruth> vessels;
};

/// Arc-length spacing of ground-truth samples, pixels.
inline constexpr double kTruthSpacing = 0.5;

/// Dense ground truth for every vessel. Throws SpecOutOfBounds naming the
/// vessel index when a centerline comes closer to the border than the
/// vessel's maximum width, and InvalidArgument when a width falls below
/// 2 * kMinHalfWidth.
GroundTruth sample_ground_truth(const PhantomSpec& spec);

struct Phantom {
    MapTriple maps;
    GroundTruth truth;
};

/// Renders interior (smoothstep of signed distance to the tube wall),
/// centerline and edge (Gaussian ridges) maps. `seed` drives the optional
/// pixel noise only.
Phantom render_phantom(const PhantomSpec& spec, std::uint64_t seed, Exec exec = Exec::parallel);

/// Two parallel vertical vessels, 4 px apart, and three hypotheses on the
/// left one: a cross-section between its own edges, a line joining edges of
/// the two vessels, and a line inside it running parallel to its axis.
struct ProximityScene {
    Phantom phantom;
    VesselState within;
    VesselState between;
    VesselState parallel;
};

ProximityScene proximity_scene();

}  // namespace vtrack
