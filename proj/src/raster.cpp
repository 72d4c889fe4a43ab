#include "vtrack/raster.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>

#include "vtrack/error.hpp"
#include "vtrack/io.hpp"

namespace vtrack {

namespace {

constexpr std::size_t kMaxHeader = 64;

bool in_unit_interval(float v) { return std::isfinite(v) && v >= 0.0f && v <= 1.0f; }

// Strict decimal: no sign, no leading zeros, non-empty.
bool parse_dimension(std::string_view text, std::size_t& out) {
    if (text.empty() || text.size() > 10 || (text.size() > 1 && text.front() == '0')) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && out > 0;
}

}  // namespace

ProbMap::ProbMap(std::size_t width, std::size_t height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width_ == 0 || height_ == 0)
        throw Error(ErrorKind::DimensionMismatch, "map dimensions must be positive");
    if (data_.size() != width_ * height_)
        throw Error(ErrorKind::DimensionMismatch,
                    "expected " + std::to_string(width_ * height_) + " values, got " +
                        std::to_string(data_.size()));
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!in_unit_interval(data_[i]))
            throw Error(ErrorKind::OutOfRangeValue,
                        "value " + std::to_string(data_[i]) + " at index " + std::to_string(i));
    }
}

MapTriple::MapTriple(ProbMap interior, ProbMap centerline, ProbMap edge)
    : interior_(std::move(interior)), centerline_(std::move(centerline)), edge_(std::move(edge)) {
    auto same = [](const ProbMap& a, const ProbMap& b) {
        return a.width() == b.width() && a.height() == b.height();
    };
    if (!same(interior_, centerline_) || !same(interior_, edge_))
        throw Error(ErrorKind::DimensionMismatch, "interior, centerline and edge maps differ in size");
}

ProbMap load_vmap(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingFile, path.string());
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

    const auto eol = bytes.find('\n');
    if (eol == std::string::npos || eol > kMaxHeader)
        throw Error(ErrorKind::MalformedHeader, path.string() + ": no header line");
    const std::string_view header(bytes.data(), eol);
    if (!header.starts_with("VMAP "))
        throw Error(ErrorKind::MalformedHeader, path.string() + ": bad magic");
    const auto fields = header.substr(5);
    const auto space = fields.find(' ');
    std::size_t width = 0;
    std::size_t height = 0;
    if (space == std::string_view::npos || !parse_dimension(fields.substr(0, space), width) ||
        !parse_dimension(fields.substr(space + 1), height))
        throw Error(ErrorKind::MalformedHeader, path.string() + ": bad dimensions");

    const std::size_t payload = bytes.size() - eol - 1;
    if (payload != width * height * 4)
        throw Error(ErrorKind::DimensionMismatch,
                    path.string() + ": payload of " + std::to_string(payload) + " bytes for " +
                        std::to_string(width) + "x" + std::to_string(height));

    std::vector<float> data(width * height);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + eol + 1);
    for (std::size_t i = 0; i < data.size(); ++i, p += 4) {
        const std::uint32_t bits = std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
                                   (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
        data[i] = std::bit_cast<float>(bits);
    }
    return ProbMap(width, height, std::move(data));
}

void save_vmap(const ProbMap& map, const std::filesystem::path& path) {
    std::string bytes = "VMAP " + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n";
    bytes.reserve(bytes.size() + map.data().size() * 4);
    for (float v : map.data()) {
        const auto bits = std::bit_cast<std::uint32_t>(v);
        for (int shift = 0; shift < 32; shift += 8) bytes.push_back(static_cast<char>((bits >> shift) & 0xffu));
    }
    write_atomic(path, bytes);
}

double sample_bilinear(const ProbMap& map, const Vec2& p) noexcept {
    if (!map.contains(p)) return 0.0;  // also rejects NaN
    const std::size_t w = map.width();
    const std::size_t h = map.height();
    auto x0 = static_cast<std::size_t>(p.x);
    auto y0 = static_cast<std::size_t>(p.y);
    if (x0 + 1 >= w) x0 = w >= 2 ? w - 2 : 0;
    if (y0 + 1 >= h) y0 = h >= 2 ? h - 2 : 0;
    const std::size_t x1 = std::min(x0 + 1, w - 1);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double fx = p.x - static_cast<double>(x0);
    const double fy = p.y - static_cast<double>(y0);

    const double top = (1.0 - fx) * map.at(x0, y0) + fx * map.at(x1, y0);
    const double bottom = (1.0 - fx) * map.at(x0, y1) + fx * map.at(x1, y1);
    // Rounding can push a convex combination of 1.0 values one ulp above 1.
    return std::clamp((1.0 - fy) * top + fy * bottom, 0.0, 1.0);
}

}  // namespace vtrack
