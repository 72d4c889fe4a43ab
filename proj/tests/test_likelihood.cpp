#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "vtrack/error.hpp"
#include "vtrack/likelihood.hpp"

using namespace vtrack;

namespace {

// 13 x 11 maps whose values vary only along x, so that a vertical state with
// its cross-section on row 5 reads texel values exactly.
MapTriple column_maps(const std::vector<float>& interior, const std::vector<float>& centre,
                      const std::vector<float>& edge) {
    auto expand = [](const std::vector<float>& row) {
        std::vector<float> v;
        for (int y = 0; y < 11; ++y) v.insert(v.end(), row.begin(), row.end());
        return ProbMap(row.size(), 11, v);
    };
    return {expand(interior), expand(centre), expand(edge)};
}

}  // namespace

TEST(ChiPoints, QuarterPoints) {
    const auto c = chi_points({0, 0}, {4, 0});
    EXPECT_EQ(c.chi1, (Vec2{1, 0}));
    EXPECT_EQ(c.chi2, (Vec2{2, 0}));
    EXPECT_EQ(c.chi3, (Vec2{3, 0}));
}

TEST(ChiPoints, DegenerateLine) {
    try {
        chi_points({1, 2}, {1, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateLine);
    }
}

TEST(ChiPoints, MatchesOracle) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int i = 0; i < 100; ++i) {
        const Vec2 l{u(rng), u(rng)}, r{u(rng), u(rng)};
        const auto c = chi_points(l, r);
        const auto o = oracle::chi(l.x, l.y, r.x, r.y);
        const Vec2 got[3] = {c.chi1, c.chi2, c.chi3};
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(got[j].x, o.x[j], 1e-9);
            EXPECT_NEAR(got[j].y, o.y[j], 1e-9);
        }
    }
}

TEST(Likelihood, IdealProfileIsOne) {
    // State: anchor (6,5), dir (0,1), wl = wr = 2 -> El = (4,5), Er = (8,5), chi at x = 5, 6, 7.
    std::vector<float> in(13, 0.f), pc(13, 0.f), pe(13, 0.f);
    for (int x = 4; x <= 8; ++x) in[static_cast<std::size_t>(x)] = 1.f;
    for (int x = 5; x <= 7; ++x) pc[static_cast<std::size_t>(x)] = 1.f;
    pe[4] = pe[8] = 1.f;
    const auto maps = column_maps(in, pc, pe);
    const VesselState s{{0, 1}, {6, 5}, 2, 2};
    EXPECT_DOUBLE_EQ(likelihood(s, maps, {}, false), 1.0);
    EXPECT_NEAR(likelihood(s, maps, {}, true), 1.0, 1e-9);
    const ObservationModel model(maps, {}, true);
    EXPECT_NEAR(model(s), 1.0, 1e-9);
}

TEST(Likelihood, HandProfileProduct) {
    // anchor (5,5), dir (0,1), wl = 3, wr = 5 -> El = (2,5), Er = (10,5), chi at x = 4, 6, 8.
    std::vector<float> in(13, 0.5f), pc(13, 0.f), pe(13, 0.f);
    pe[2] = 0.9f, pc[2] = 0.1f;
    pe[10] = 0.8f, pc[10] = 0.2f;
    for (std::size_t x : {4u, 6u, 8u}) pc[x] = 0.9f, pe[x] = 0.1f;
    pc[5] = 0.95f;
    const auto maps = column_maps(in, pc, pe);
    const VesselState s{{0, 1}, {5, 5}, 3, 5};
    const double f = 0.9f, g = 0.1f, e = 0.8f, h = 0.2f, a = 0.95f;
    const double expected = f * (1 - g) * e * (1 - h) * std::pow(f * (1 - g), 3) * a;
    EXPECT_NEAR(likelihood(s, maps, {}, false), expected, 1e-12);
    EXPECT_NEAR(expected, 0.2616, 1e-3);

    const auto t = profile_terms(s, maps);
    EXPECT_NEAR(t.anchor, a, 1e-12);
    EXPECT_EQ(t.orientation, 1.0);
}

TEST(Likelihood, OffImageCollapses) {
    const auto ph = render_phantom(support::straight_spec(), 0);
    const VesselState s{{1, 0}, {62, 200}, 3, 3};
    EXPECT_EQ(likelihood(s, ph.maps, {}, true), 0.0);
    const VesselState far{{0, 1}, {-10, -10}, 3, 3};
    EXPECT_EQ(likelihood(far, ph.maps, {}, false), 0.0);
}

TEST(Likelihood, RangeAndModelAgreement) {
    const auto ph = render_phantom(support::sine_spec(), 0);
    const ObservationModel model(ph.maps, {}, true);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ux(40, 90), uy(20, 440), ua(-3.2, 3.2), uw(0.5, 5);
    for (int i = 0; i < 200; ++i) {
        const double th = ua(rng);
        const VesselState s{{std::cos(th), std::sin(th)}, {ux(rng), uy(rng)}, uw(rng), uw(rng)};
        const double ref = likelihood(s, ph.maps, {}, true);
        ASSERT_GE(ref, 0.0);
        ASSERT_LE(ref, 1.0);
        // The cached field interpolates the tensor; only the orientation factor may differ slightly.
        EXPECT_NEAR(model(s), ref, 2e-2 * std::max(ref, 1e-300) + 1e-12);
        EXPECT_NEAR(likelihood(s, ph.maps, {}, false), profile_terms(s, ph.maps).value(), 1e-15);
    }
}

TEST(Likelihood, StrongVersusWeakHypothesis) {
    const auto ph = render_phantom(support::straight_spec(), 0);
    const VesselState strong{{0, 1}, {32, 200}, 3, 3};
    const double ls = likelihood(strong, ph.maps, {}, true);
    // Clearly wrong lines: shifted onto the wall, or edges well outside the vessel.
    for (const VesselState& weak : {VesselState{{0, 1}, {34, 200}, 3, 3}, VesselState{{0, 1}, {32, 200}, 5, 5}})
        EXPECT_GE(ls / std::max(likelihood(weak, ph.maps, {}, true), 1e-300), 1e3);
    // Milder perturbations still rank below the true cross-section.
    for (const VesselState& near : {VesselState{{0, 1}, {33, 200}, 3, 3}, VesselState{{0, 1}, {32, 200}, 2, 2},
                                    VesselState{{0, 1}, {32, 200}, 1.5, 1.5}, VesselState{{0.5, 0.8660254037844386}, {32, 200}, 3, 3}})
        EXPECT_GT(ls, likelihood(near, ph.maps, {}, true));
}

TEST(ProximityScene, Ordering) {
    const auto scene = proximity_scene();
    const auto& maps = scene.phantom.maps;
    const double within = likelihood(scene.within, maps, {}, false);
    const double parallel = likelihood(scene.parallel, maps, {}, false);
    const double between = likelihood(scene.between, maps, {}, false);
    EXPECT_GT(within, parallel);
    EXPECT_GT(parallel, between);
    EXPECT_GE(within / between, 1e3);
}

TEST(ProximityScene, Deterministic) {
    const auto a = proximity_scene(), b = proximity_scene();
    EXPECT_EQ(a.phantom.maps.interior(), b.phantom.maps.interior());
    EXPECT_EQ(a.phantom.maps.centerline(), b.phantom.maps.centerline());
    EXPECT_EQ(a.phantom.maps.edge(), b.phantom.maps.edge());
    EXPECT_EQ(a.within, b.within);
    EXPECT_EQ(a.between, b.between);
    EXPECT_EQ(a.parallel, b.parallel);
}
