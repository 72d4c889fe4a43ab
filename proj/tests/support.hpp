#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "vtrack/filter.hpp"
#include "vtrack/phantom.hpp"
#include "vtrack/raster.hpp"

namespace support {

inline constexpr double kPi = 3.14159265358979323846;

inline vtrack::ProbMap random_map(std::size_t w, std::size_t h, std::mt19937_64& rng) {
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> v(w * h);
    for (auto& x : v) x = u(rng);
    if (!v.empty()) v[0] = 0.0f;
    if (v.size() > 1) v[1] = 1.0f;
    return {w, h, std::move(v)};
}

inline vtrack::PhantomSpec tube(std::size_t w, std::size_t h, vtrack::Vec2 a, vtrack::Vec2 b, double width) {
    vtrack::PhantomSpec s;
    s.width = w;
    s.height = h;
    vtrack::WidthProfile wp;
    wp.start = wp.end = width;
    s.vessels.push_back({vtrack::Polyline{{a, b}}, wp});
    return s;
}

// Straight tube through the canvas centre at `deg` degrees from +x.
inline vtrack::PhantomSpec rotated_tube(double deg, std::size_t size = 96, double half_len = 30, double width = 6) {
    const double c = static_cast<double>(size) / 2.0;
    const vtrack::Vec2 d{std::cos(deg * kPi / 180.0), std::sin(deg * kPi / 180.0)};
    return tube(size, size, {c - half_len * d.x, c - half_len * d.y}, {c + half_len * d.x, c + half_len * d.y}, width);
}

inline vtrack::PhantomSpec straight_spec() { return tube(64, 440, {32, 20}, {32, 420}, 6.0); }

inline vtrack::PhantomSpec sine_spec() {
    vtrack::PhantomSpec s;
    s.width = 128;
    s.height = 460;
    vtrack::SineCurve c;
    c.start = {64, 20};
    c.axis = {0, 1};
    c.length = 420;
    c.amplitude = 20;
    c.period = 150;
    vtrack::WidthProfile wp;
    wp.start = wp.end = 5.0;
    s.vessels.push_back({c, wp});
    return s;
}

inline vtrack::PhantomSpec taper_spec() {
    auto s = tube(64, 440, {32, 20}, {32, 420}, 8.0);
    s.vessels[0].width.kind = vtrack::WidthProfile::Kind::taper;
    s.vessels[0].width.end = 4.0;
    return s;
}

// Two vertical vessels of width 5 whose facing edges are 4 px apart.
inline vtrack::PhantomSpec two_vessel_spec() {
    auto s = tube(96, 440, {43.5, 20}, {43.5, 420}, 5.0);
    s.vessels.push_back(tube(96, 440, {52.5, 20}, {52.5, 420}, 5.0).vessels[0]);
    return s;
}

struct Seeded {
    vtrack::VesselState seed;
    vtrack::Vec2 endpoint;
};

inline Seeded seed_for(const vtrack::VesselTruth& t, double step = 2.0) {
    const auto& s = t.samples;
    std::size_t j = 0;
    while (j + 1 < s.size() && s[j].arc_length - s[0].arc_length < step) ++j;
    return {vtrack::seed_from_profiles(s[0].center, s[j].center, s[0].width / 2, s[0].width / 2), s.back().center};
}

inline vtrack::TrackerConfig config(std::uint64_t seed) {
    vtrack::TrackerConfig c;
    c.master_seed = seed;
    return c;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("vtrack_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline double angle_deg(vtrack::Vec2 a, vtrack::Vec2 b) {
    const double c = std::abs(a.x * b.x + a.y * b.y) / (std::hypot(a.x, a.y) * std::hypot(b.x, b.y));
    return std::acos(std::min(1.0, c)) * 180.0 / kPi;
}

}  // namespace support
