#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "vtrack/vec2.hpp"

namespace vtrack {

/// Immutable W x H raster of probabilities in [0, 1], row-major, top row first.
class ProbMap {
public:
    /// Throws DimensionMismatch if data.size() != width * height, OutOfRangeValue
    /// for values outside [0, 1] (including NaN / Inf).
    ProbMap(std::size_t width, std::size_t height, std::vector<float> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::span<const float> data() const noexcept { return data_; }

    float at(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }

    bool contains(const Vec2& p) const noexcept {
        return p.x >= 0.0 && p.y >= 0.0 && p.x <= static_cast<double>(width_ - 1) &&
               p.y <= static_cast<double>(height_ - 1);
    }

    friend bool operator==(const ProbMap&, const ProbMap&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<float> data_;
};

/// Interior, centerline and edge maps of identical size.
class MapTriple {
public:
    /// Throws DimensionMismatch unless all three maps share width and height.
    MapTriple(ProbMap interior, ProbMap centerline, ProbMap edge);

    const ProbMap& interior() const noexcept { return interior_; }
    const ProbMap& centerline() const noexcept { return centerline_; }
    const ProbMap& edge() const noexcept { return edge_; }

    std::size_t width() const noexcept { return interior_.width(); }
    std::size_t height() const noexcept { return interior_.height(); }

private:
    ProbMap interior_;
    ProbMap centerline_;
    ProbMap edge_;
};

/// Reads a VMAP file: "VMAP <w> <h>\n" followed by w*h little-endian binary32.
ProbMap load_vmap(const std::filesystem::path& path);

/// Writes `map` in VMAP format via a temporary file and an atomic rename.
void save_vmap(const ProbMap& map, const std::filesystem::path& path);

/// Bilinear interpolation; 0 for any point outside [0, W-1] x [0, H-1].
double sample_bilinear(const ProbMap& map, const Vec2& p) noexcept;

}  // namespace vtrack
