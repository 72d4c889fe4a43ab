#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "vtrack/error.hpp"
#include "vtrack/geometry.hpp"

using namespace vtrack;

TEST(Perpendicular, AxisRotations) {
    EXPECT_EQ(perpendicular({1, 0}), (Vec2{0, 1}));
    EXPECT_EQ(perpendicular({0, 1}), (Vec2{-1, 0}));
    const Vec2 v = normalized(Vec2{0.3, -0.7});
    EXPECT_NEAR(norm(perpendicular(v)), 1.0, 1e-15);
    EXPECT_NEAR(dot(v, perpendicular(v)), 0.0, 1e-15);
}

TEST(EdgesOf, CounterClockwiseConvention) {
    const auto [l, r] = edges_of({{0, 1}, {5, 5}, 2, 3});
    EXPECT_EQ(l, (Vec2{3, 5}));
    EXPECT_EQ(r, (Vec2{8, 5}));
}

TEST(EdgesOf, SymmetricWidths) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1), w(0.5, 6);
    for (int i = 0; i < 50; ++i) {
        VesselState s{normalized(Vec2{u(rng), u(rng)}), {u(rng) * 50, u(rng) * 50}, 0, 0};
        s.wl = s.wr = w(rng);
        const auto [l, r] = edges_of(s);
        EXPECT_NEAR(distance(l, r), 2 * s.wl, 1e-12);
        EXPECT_NEAR(distance((l + r) / 2.0, s.anchor), 0.0, 1e-12);
    }
}

TEST(Propagate, NoiselessMotion) {
    NoiseConfig cfg{0, 0, 0, 2};
    Rng rng(1);
    const VesselState s{{1, 0}, {0, 0}, 1.5, 2.5};
    const auto n = propagate(s, cfg, rng);
    EXPECT_EQ(n.anchor, (Vec2{2, 0}));
    EXPECT_EQ(n.dir, s.dir);
    EXPECT_EQ(n.wl, s.wl);
    EXPECT_EQ(n.wr, s.wr);
}

TEST(Propagate, KeepsInvariants) {
    NoiseConfig cfg{0.5, 1.0, 2.0, 2};
    Rng rng(9);
    VesselState s{{0, 1}, {10, 10}, 0.6, 0.6};
    for (int i = 0; i < 2000; ++i) {
        s = propagate(s, cfg, rng);
        ASSERT_TRUE(s.valid());
        ASSERT_NEAR(norm(s.dir), 1.0, 1e-12);
        ASSERT_GE(s.wl, kMinHalfWidth);
        ASSERT_GE(s.wr, kMinHalfWidth);
    }
}

TEST(Propagate, ConsumesFourVariates) {
    NoiseConfig cfg;
    Rng a(4), b(4);
    (void)propagate({{1, 0}, {0, 0}, 2, 2}, cfg, a);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 4; ++i) (void)nd(b);
    EXPECT_EQ(a(), b());
}

TEST(Propagate, StepLengthAlongNewDirection) {
    NoiseConfig cfg{0.3, 0.0, 0.0, 2};
    Rng rng(2);
    const VesselState s{{1, 0}, {0, 0}, 2, 2};
    for (int i = 0; i < 100; ++i) {
        const auto n = propagate(s, cfg, rng);
        EXPECT_NEAR(distance(n.anchor, s.anchor), 2.0, 1e-12);
        EXPECT_NEAR(norm(n.anchor - s.anchor - n.dir * 2.0), 0.0, 1e-12);
    }
}

TEST(NoiseConfig, Validation) {
    EXPECT_THROW((NoiseConfig{-0.1, 0, 0, 2}.validate()), Error);
    EXPECT_THROW((NoiseConfig{0, 0, 0, 0}.validate()), Error);
    EXPECT_NO_THROW((NoiseConfig{0, 0, 0, 1}.validate()));
}
