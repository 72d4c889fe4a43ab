#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"
#include "vtrack/direction.hpp"
#include "vtrack/error.hpp"

using namespace vtrack;
using support::angle_deg;

TEST(Kernels, GaussianSumsToOne) {
    for (double s : {0.7, 1.5, 3.0}) {
        const auto k = gaussian_kernel(s);
        EXPECT_EQ(k.size(), 2 * static_cast<std::size_t>(std::ceil(4 * s)) + 1);
        EXPECT_NEAR(std::accumulate(k.begin(), k.end(), 0.0), 1.0, 1e-12);
    }
}

TEST(Kernels, DerivativeHasUnitRampResponse) {
    const auto d = gaussian_derivative_kernel(1.5);
    const int r = static_cast<int>(d.size() / 2);
    double resp = 0, sum = 0;
    // Correlating the kernel with f(x) = x around 0: sum d[i] * (r - i) or (i - r) depending on orientation.
    for (int i = 0; i < static_cast<int>(d.size()); ++i) {
        resp += d[static_cast<std::size_t>(i)] * (i - r);
        sum += d[static_cast<std::size_t>(i)];
    }
    EXPECT_NEAR(std::abs(resp), 1.0, 1e-12);
    EXPECT_NEAR(sum, 0.0, 1e-12);
}

TEST(MinorEigenvector, Basics) {
    // Strong x-gradient -> ridge runs along y.
    const auto v = minor_eigenvector({4, 0, 0.1}, {0, 1}, 0.05);
    EXPECT_NEAR(std::abs(v.y), 1.0, 1e-12);
    EXPECT_GE(dot(v, Vec2{0, 1}), 0.0);
    const auto flipped = minor_eigenvector({4, 0, 0.1}, {0, -1}, 0.05);
    EXPECT_EQ(flipped, -v);
    // Isotropic and zero tensors fall back to the hint.
    EXPECT_EQ(minor_eigenvector({1, 0, 1}, {1, 0}, 0.05), (Vec2{1, 0}));
    EXPECT_EQ(minor_eigenvector({0, 0, 0}, {0.6, 0.8}, 0.05), (Vec2{0.6, 0.8}));
}

TEST(Orientation, UniformMapReturnsHint) {
    // Far enough from the border that zero padding stays outside the window.
    ProbMap m(64, 64, std::vector<float>(64 * 64, 0.5f));
    const TensorConfig cfg;
    for (Vec2 p : {Vec2{32, 32}, Vec2{31.5, 30.25}, Vec2{25, 38}}) {
        EXPECT_EQ(orientation_at(m, p, cfg, {1, 0}), (Vec2{1, 0}));
        EXPECT_EQ(orientation_at(m, p, cfg, {0.6, -0.8}), (Vec2{0.6, -0.8}));
    }
    const TensorField f(m, cfg);
    EXPECT_EQ(f.orientation({32, 32}, {1, 0}), (Vec2{1, 0}));
}

TEST(Orientation, OffMapThrows) {
    ProbMap m(8, 8, std::vector<float>(64, 0.f));
    EXPECT_THROW(orientation_at(m, {-1, 2}, {}, {1, 0}), Error);
    EXPECT_THROW(TensorField(m, {}).orientation({2, 8.5}, {1, 0}), Error);
}

TEST(Orientation, AxisAlignedTubes) {
    const auto v = render_phantom(support::tube(64, 96, {32, 10}, {32, 86}, 6), 0);
    const auto h = render_phantom(support::tube(96, 64, {10, 32}, {86, 32}, 6), 0);
    for (double t : {20.0, 48.0, 70.0}) {
        EXPECT_LT(angle_deg(orientation_at(v.maps.interior(), {32, t}, {}, {0, 1}), {0, 1}), 3.0);
        EXPECT_LT(angle_deg(orientation_at(h.maps.interior(), {t, 32}, {}, {1, 0}), {1, 0}), 3.0);
    }
}

class RotatedTube : public ::testing::TestWithParam<double> {};

TEST_P(RotatedTube, DirectionWithinThreeDegrees) {
    const double deg = GetParam();
    const auto ph = render_phantom(support::rotated_tube(deg), 0);
    const Vec2 axis{std::cos(deg * support::kPi / 180), std::sin(deg * support::kPi / 180)};
    const TensorField field(ph.maps.interior(), {});
    for (double t : {-12.0, 0.0, 12.0}) {
        const Vec2 p = Vec2{48, 48} + axis * t;
        EXPECT_LT(angle_deg(orientation_at(ph.maps.interior(), p, {}, axis), axis), 3.0) << deg << " @ " << t;
        EXPECT_LT(angle_deg(field.orientation(p, axis), axis), 3.0) << deg << " @ " << t;
    }
}

INSTANTIATE_TEST_SUITE_P(Angles, RotatedTube, ::testing::Values(0.0, 15.0, 30.0, 45.0, 60.0, 90.0, 120.0, 165.0));

TEST(TensorField, MatchesDirectTensorAtTexels) {
    std::mt19937_64 rng(8);
    const auto m = support::random_map(24, 20, rng);
    const TensorConfig cfg;
    const TensorField f(m, cfg, Exec::serial);
    for (std::size_t y : {0u, 5u, 19u})
        for (std::size_t x : {0u, 11u, 23u}) {
            const auto a = f.at(x, y);
            const auto b = structure_tensor_at(m, {static_cast<double>(x), static_cast<double>(y)}, cfg);
            EXPECT_NEAR(a.xx, b.xx, 1e-9);
            EXPECT_NEAR(a.xy, b.xy, 1e-9);
            EXPECT_NEAR(a.yy, b.yy, 1e-9);
        }
}

TEST(TensorField, SerialAndParallelIdentical) {
    std::mt19937_64 rng(8);
    const auto m = support::random_map(70, 45, rng);
    EXPECT_TRUE(TensorField(m, {}, Exec::serial) == TensorField(m, {}, Exec::parallel));
}

TEST(TensorConfig, Validation) {
    EXPECT_THROW((TensorConfig{0, 3, 0.05}.validate()), Error);
    EXPECT_THROW((TensorConfig{1, -3, 0.05}.validate()), Error);
    EXPECT_NO_THROW(TensorConfig{}.validate());
}
