#pragma once

#include <vector>

#include "vtrack/exec.hpp"
#include "vtrack/raster.hpp"
#include "vtrack/vec2.hpp"

namespace vtrack {

struct TensorConfig {
    double grad_sigma = 1.5;    // Gaussian-derivative scale, pixels
    double window_sigma = 3.0;  // tensor averaging scale, pixels
    double aniso_eps = 0.05;    // minimum (l1 - l2) / (l1 + l2)

    void validate() const;
};

/// Components of a symmetric 2x2 structure tensor.
struct Tensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// Along-ridge direction of `t`: eigenvector of the smaller eigenvalue, signed
/// so that result . hint >= 0. Returns `hint` when the tensor is isotropic
/// (gap ratio below aniso_eps) or numerically vanishes.
Vec2 minor_eigenvector(const Tensor2& t, const Vec2& hint, double aniso_eps);

/// Structure tensor at an arbitrary point, computed directly: Gaussian-derivative
/// gradients on every texel within 4 window sigmas of `p`, weighted by a
/// Gaussian centred on `p`. Zero padding outside the map.
Tensor2 structure_tensor_at(const ProbMap& interior, const Vec2& p, const TensorConfig& cfg);

/// Reference orientation estimate. Throws OutOfBounds if `p` is off the map.
Vec2 orientation_at(const ProbMap& interior, const Vec2& p, const TensorConfig& cfg, const Vec2& hint);

/// Precomputed per-texel tensor field; orientation queries interpolate it
/// bilinearly. Immutable after construction.
class TensorField {
public:
    TensorField(const ProbMap& interior, const TensorConfig& cfg, Exec exec = Exec::parallel);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    const TensorConfig& config() const noexcept { return cfg_; }

    Tensor2 at(std::size_t x, std::size_t y) const noexcept { return field_[y * width_ + x]; }
    Tensor2 interpolate(const Vec2& p) const;

    /// Throws OutOfBounds if `p` is off the map.
    Vec2 orientation(const Vec2& p, const Vec2& hint) const;

    friend bool operator==(const TensorField& a, const TensorField& b);

private:
    std::size_t width_;
    std::size_t height_;
    TensorConfig cfg_;
    std::vector<Tensor2> field_;
};

/// Sampled Gaussian truncated at 4 sigma, normalised to unit sum.
std::vector<double> gaussian_kernel(double sigma);
/// Sampled Gaussian derivative truncated at 4 sigma, scaled so a unit ramp
/// yields a unit response.
std::vector<double> gaussian_derivative_kernel(double sigma);

}  // namespace vtrack
