#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <limits>

#include "oracles.hpp"
#include "support.hpp"
#include "vtrack/error.hpp"
#include "vtrack/io.hpp"
#include "vtrack/raster.hpp"

using namespace vtrack;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no vtrack::Error thrown";
    return ErrorKind::InvalidArgument;
}

std::string vmap_bytes(const std::string& header, std::initializer_list<float> values) {
    std::string s = header;
    for (float v : values) {
        char b[4];
        std::memcpy(b, &v, 4);
        s.append(b, 4);
    }
    return s;
}

}  // namespace

TEST(ProbMap, RejectsBadConstruction) {
    EXPECT_EQ(kind_of([] { ProbMap(2, 2, {0.f, 0.f, 0.f}); }), ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { ProbMap(0, 0, {}); }), ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { ProbMap(1, 1, {1.5f}); }), ErrorKind::OutOfRangeValue);
    EXPECT_EQ(kind_of([] { ProbMap(1, 1, {-0.01f}); }), ErrorKind::OutOfRangeValue);
    EXPECT_EQ(kind_of([] { ProbMap(1, 1, {std::numeric_limits<float>::quiet_NaN()}); }), ErrorKind::OutOfRangeValue);
    EXPECT_EQ(kind_of([] { ProbMap(1, 1, {std::numeric_limits<float>::infinity()}); }), ErrorKind::OutOfRangeValue);
}

TEST(MapTriple, RequiresEqualSizes) {
    ProbMap a(2, 2, {0, 0, 0, 0}), b(4, 1, {0, 0, 0, 0});
    EXPECT_EQ(kind_of([&] { MapTriple(a, a, b); }), ErrorKind::DimensionMismatch);
    EXPECT_NO_THROW(MapTriple(a, a, a));
}

TEST(Vmap, LoadsTwoByOne) {
    support::TempDir dir("vmap");
    write_atomic(dir.path / "m.vmap", vmap_bytes("VMAP 2 1\n", {0.0f, 1.0f}));
    const auto m = load_vmap(dir.path / "m.vmap");
    EXPECT_EQ(m, ProbMap(2, 1, {0.0f, 1.0f}));
}

TEST(Vmap, SmallestFileLayout) {
    support::TempDir dir("vmap");
    save_vmap(ProbMap(1, 1, {0.5f}), dir.path / "m.vmap");
    const auto bytes = read_file(dir.path / "m.vmap");
    // "VMAP 1 1\n" is 9 bytes, then one binary32.
    ASSERT_EQ(bytes.size(), 9u + 4u);
    EXPECT_EQ(bytes.substr(0, 9), "VMAP 1 1\n");
    float v;
    std::memcpy(&v, bytes.data() + 9, 4);
    EXPECT_EQ(v, 0.5f);
}

TEST(Vmap, ErrorPaths) {
    support::TempDir dir("vmap");
    const auto p = dir.path / "m.vmap";
    EXPECT_EQ(kind_of([&] { load_vmap(dir.path / "absent.vmap"); }), ErrorKind::MissingFile);

    write_atomic(p, vmap_bytes("VMAP 1 1\n", {1.5f}));
    EXPECT_EQ(kind_of([&] { load_vmap(p); }), ErrorKind::OutOfRangeValue);

    write_atomic(p, vmap_bytes("VMAP 2 2\n", {0.f, 0.f, 0.f}));
    EXPECT_EQ(kind_of([&] { load_vmap(p); }), ErrorKind::DimensionMismatch);

    write_atomic(p, vmap_bytes("VMAP 1 1\n", {0.f, 0.f}));
    EXPECT_EQ(kind_of([&] { load_vmap(p); }), ErrorKind::DimensionMismatch);

    for (const char* bad : {"VMAQ 1 1\n", "VMAP 1\n", "VMAP -1 1\n", "VMAP 01 1\n", "VMAP 1 1", "VMAP a b\n",
                            "VMAP 0 1\n"}) {
        write_atomic(p, vmap_bytes(bad, {0.f}));
        const auto k = kind_of([&] { load_vmap(p); });
        EXPECT_TRUE(k == ErrorKind::MalformedHeader || k == ErrorKind::DimensionMismatch) << bad;
    }
}

TEST(Vmap, UnwritablePathIsIoFailure) {
    support::TempDir dir("vmap");
    EXPECT_EQ(kind_of([&] { save_vmap(ProbMap(1, 1, {0.f}), dir.path / "no" / "such" / "dir" / "m.vmap"); }),
              ErrorKind::IoFailure);
}

TEST(Vmap, RoundTripRandomShapes) {
    support::TempDir dir("vmap");
    std::mt19937_64 rng(11);
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 37}, {53, 1}, {64, 64}, {7, 13}}) {
        const auto m = support::random_map(w, h, rng);
        save_vmap(m, dir.path / "m.vmap");
        EXPECT_EQ(load_vmap(dir.path / "m.vmap"), m);
    }
    EXPECT_FALSE(std::filesystem::exists(dir.path / "m.vmap.tmp"));
}

TEST(Bilinear, NodesAndMidpoints) {
    ProbMap m(2, 1, {0.0f, 1.0f});
    EXPECT_DOUBLE_EQ(sample_bilinear(m, {0.5, 0.0}), 0.5);
    EXPECT_DOUBLE_EQ(sample_bilinear(m, {1.0, 0.0}), 1.0);

    std::mt19937_64 rng(3);
    const auto r = support::random_map(6, 7, rng);
    EXPECT_DOUBLE_EQ(sample_bilinear(r, {3, 4}), r.at(3, 4));
    EXPECT_DOUBLE_EQ(sample_bilinear(r, {5, 6}), r.at(5, 6));
}

TEST(Bilinear, OutsideReadsZero) {
    ProbMap m(2, 2, {1, 1, 1, 1});
    EXPECT_EQ(sample_bilinear(m, {-0.01, 0.5}), 0.0);
    EXPECT_EQ(sample_bilinear(m, {0.5, 1.01}), 0.0);
    EXPECT_EQ(sample_bilinear(m, {std::nan(""), 0.5}), 0.0);
    EXPECT_DOUBLE_EQ(sample_bilinear(m, {1.0, 1.0}), 1.0);
}

TEST(Bilinear, MatchesBruteForceOracle) {
    std::mt19937_64 rng(5);
    const auto m = support::random_map(12, 9, rng);
    std::uniform_real_distribution<double> ux(-0.5, 11.5), uy(-0.5, 8.5);
    for (int i = 0; i < 200; ++i) {
        const double x = ux(rng), y = uy(rng);
        EXPECT_NEAR(sample_bilinear(m, {x, y}), oracle::bilinear(m, x, y), 1e-12) << x << "," << y;
    }
}
