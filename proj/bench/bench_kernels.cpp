// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "vtrack/filter.hpp"
#include "vtrack/phantom.hpp"

using namespace vtrack;

namespace {

PhantomSpec sine_spec(std::size_t height) {
    PhantomSpec s;
    s.width = 256;
    s.height = height;
    SineCurve c;
    c.start = {128, 20};
    c.length = static_cast<double>(height) - 40;
    c.amplitude = 40;
    c.period = 150;
    WidthProfile w;
    w.start = w.end = 6;
    s.vessels.push_back({c, w});
    s.noise_level = 0.05;
    return s;
}

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

const Phantom& scene() {
    static const Phantom ph = render_phantom(sine_spec(512), 1);
    return ph;
}

}  // namespace

static void BM_RenderPhantom(benchmark::State& st) {
    const auto spec = sine_spec(512);
    for (auto _ : st) benchmark::DoNotOptimize(render_phantom(spec, 1, exec_of(st)));
}
BENCHMARK(BM_RenderPhantom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_TensorField(benchmark::State& st) {
    const auto& interior = scene().maps.interior();
    for (auto _ : st) benchmark::DoNotOptimize(TensorField(interior, {}, exec_of(st)));
}
BENCHMARK(BM_TensorField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_AdvanceParticles(benchmark::State& st) {
    const auto& ph = scene();
    const ObservationModel model(ph.maps, {}, true);
    const std::size_t n = 700;
    const VesselState seed{{0, 1}, ph.truth.vessels[0].samples[200].center, 3, 3};
    std::vector<VesselState> states(n, seed);
    std::vector<Rng> engines;
    for (std::size_t i = 0; i < n; ++i) engines.push_back(make_stream(1, StreamKind::particle, 0, i));
    std::vector<double> lik(n);
    for (auto _ : st) {
        std::fill(states.begin(), states.end(), seed);
        if (st.range(0))
            kernels::advance_parallel(states, engines, NoiseConfig{}, model, lik);
        else
            kernels::advance_serial(states, engines, NoiseConfig{}, model, lik);
        benchmark::DoNotOptimize(lik.data());
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * n));
}
BENCHMARK(BM_AdvanceParticles)->Arg(0)->Arg(1);

static void BM_TrackSegment(benchmark::State& st) {
    const auto& ph = scene();
    const auto& s = ph.truth.vessels[0].samples;
    const auto seed = seed_from_profiles(s[0].center, s[4].center, 3, 3);
    TrackerConfig cfg;
    cfg.master_seed = 1;
    const SegmentTracker tracker(ph.maps, cfg, exec_of(st));
    for (auto _ : st) benchmark::DoNotOptimize(tracker.run(seed, s.back().center));
}
BENCHMARK(BM_TrackSegment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
