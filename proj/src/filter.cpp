#include "vtrack/filter.hpp"

#include <cmath>
#include <string>

#include "vtrack/error.hpp"

namespace vtrack {

void TrackerConfig::validate() const {
    if (n_particles < 1) throw Error(ErrorKind::InvalidArgument, "n_particles must be at least 1");
    if (!(stop_pc_threshold >= 0.0 && stop_pc_threshold <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "stop_pc_threshold must lie in [0, 1]");
    if (max_steps < 1) throw Error(ErrorKind::InvalidArgument, "max_steps must be at least 1");
    if (stop_patience < 1) throw Error(ErrorKind::InvalidArgument, "stop_patience must be at least 1");
    noise.validate();
    tensor.validate();
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::ReachedEndpoint: return "ReachedEndpoint";
        case Termination::LowConfidence: return "LowConfidence";
        case Termination::LeftImage: return "LeftImage";
        case Termination::MaxSteps: return "MaxSteps";
        case Termination::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

Termination termination_from_string(std::string_view name) {
    for (auto t : {Termination::ReachedEndpoint, Termination::LowConfidence, Termination::LeftImage,
                   Termination::MaxSteps, Termination::Degenerate})
        if (to_string(t) == name) return t;
    throw Error(ErrorKind::ParseError, "unknown termination '" + std::string(name) + "'");
}

ParticleSet init_particles(const VesselState& seed, std::size_t n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "particle count must be at least 1");
    return {std::vector<VesselState>(n, seed), std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

VesselState seed_from_profiles(const Vec2& c1, const Vec2& c2, double wl, double wr) {
    if (c1 == c2) throw Error(ErrorKind::DegenerateSeed, "reference centerline points coincide");
    if (!(wl >= kMinHalfWidth && wr >= kMinHalfWidth))
        throw Error(ErrorKind::InvalidArgument, "seed half-widths below the width floor");
    return {normalized(c2 - c1), c1, wl, wr};
}

std::optional<std::vector<double>> normalize_weights(std::span<const double> likelihoods) {
    double total = 0.0;
    for (double l : likelihoods) total += l;
    if (!(total > 0.0)) return std::nullopt;
    std::vector<double> w(likelihoods.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = likelihoods[i] / total;
    return w;
}

bool reweight(ParticleSet& ps, const ObservationModel& model, Exec exec) {
    std::vector<double> lik(ps.size());
    if (exec == Exec::parallel)
        kernels::evaluate_parallel(ps.states, model, lik);
    else
        kernels::evaluate_serial(ps.states, model, lik);
    auto w = normalize_weights(lik);
    if (!w) return false;
    ps.weights = std::move(*w);
    return true;
}

VesselState expectation(const ParticleSet& ps) {
    Vec2 dir;
    Vec2 anchor;
    double wl = 0.0;
    double wr = 0.0;
    for (std::size_t n = 0; n < ps.size(); ++n) {
        const double w = ps.weights[n];
        const VesselState& s = ps.states[n];
        dir += w * s.dir;
        anchor += w * s.anchor;
        wl += w * s.wl;
        wr += w * s.wr;
    }
    const double len = norm(dir);
    if (!(len >= 1e-9)) throw Error(ErrorKind::DegenerateDirection, "weighted directions cancel");
    return {dir / len, anchor, std::max(kMinHalfWidth, wl), std::max(kMinHalfWidth, wr)};
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, Rng& rng) {
    const std::size_t n = weights.size();
    std::vector<std::size_t> idx(n);
    if (n == 0) return idx;
    const double spacing = 1.0 / static_cast<double>(n);
    const double offset = std::uniform_real_distribution<double>(0.0, spacing)(rng);

    std::size_t j = 0;
    double cumulative = weights[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double u = offset + static_cast<double>(i) * spacing;
        while (u >= cumulative && j + 1 < n) cumulative += weights[++j];
        idx[i] = j;
    }
    return idx;
}

namespace kernels {

void advance_serial(std::span<VesselState> states, std::span<Rng> engines, const NoiseConfig& noise,
                    const ObservationModel& model, std::span<double> likelihoods) {
    for (std::size_t n = 0; n < states.size(); ++n) {
        states[n] = propagate(states[n], noise, engines[n]);
        likelihoods[n] = model(states[n]);
    }
}

void advance_parallel(std::span<VesselState> states, std::span<Rng> engines, const NoiseConfig& noise,
                      const ObservationModel& model, std::span<double> likelihoods) {
    const auto count = static_cast<long>(states.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) {
        const auto n = static_cast<std::size_t>(i);
        states[n] = propagate(states[n], noise, engines[n]);
        likelihoods[n] = model(states[n]);
    }
}

void evaluate_serial(std::span<const VesselState> states, const ObservationModel& model,
                     std::span<double> likelihoods) {
    for (std::size_t n = 0; n < states.size(); ++n) likelihoods[n] = model(states[n]);
}

void evaluate_parallel(std::span<const VesselState> states, const ObservationModel& model,
                       std::span<double> likelihoods) {
    const auto count = static_cast<long>(states.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) likelihoods[static_cast<std::size_t>(i)] = model(states[static_cast<std::size_t>(i)]);
}

}  // namespace kernels

SegmentTracker::SegmentTracker(const MapTriple& maps, TrackerConfig cfg, Exec exec)
    : maps_(&maps), cfg_((cfg.validate(), cfg)), exec_(exec), model_(maps, cfg_.tensor, cfg_.use_ps, exec) {}

namespace {

bool reached(const VesselState& est, const Vec2& endpoint, double step) {
    const Vec2 rel = endpoint - est.anchor;
    const double along = dot(rel, est.dir);
    const double lateral = std::abs(cross(est.dir, rel));
    return along <= step && lateral <= est.wl + est.wr + step;
}

}  // namespace

Track SegmentTracker::run(const VesselState& seed, std::optional<Vec2> endpoint, std::uint64_t stream_id,
                          StepObserver* observer) const {
    if (!seed.valid()) throw Error(ErrorKind::InvalidArgument, "seed state violates state invariants");
    if (!maps_->centerline().contains(seed.anchor))
        throw Error(ErrorKind::OutOfBounds, "seed anchor outside the image");

    const std::size_t n = cfg_.n_particles;
    ParticleSet ps = init_particles(seed, n);
    std::vector<Rng> engines;
    engines.reserve(n);
    for (std::size_t i = 0; i < n; ++i) engines.push_back(make_stream(cfg_.master_seed, StreamKind::particle, stream_id, i));
    Rng resampler = make_stream(cfg_.master_seed, StreamKind::resample, stream_id, 0);

    std::vector<double> lik(n);
    std::size_t low_streak = 0;
    Track track;
    for (std::size_t k = 1; k <= cfg_.max_steps; ++k) {
        if (exec_ == Exec::parallel)
            kernels::advance_parallel(ps.states, engines, cfg_.noise, model_, lik);
        else
            kernels::advance_serial(ps.states, engines, cfg_.noise, model_, lik);

        auto w = normalize_weights(lik);
        if (!w) {
            // Collapse caused by the cloud stepping off the map is reported as such.
            Vec2 mean{};
            for (const auto& st : ps.states) mean += st.anchor;
            mean = mean / static_cast<double>(n);
            track.termination = maps_->centerline().contains(mean) ? Termination::Degenerate : Termination::LeftImage;
            return track;
        }
        ps.weights = std::move(*w);
        if (observer) observer->on_weighted(k, ps);

        VesselState est;
        try {
            est = expectation(ps);
        } catch (const Error&) {
            track.termination = Termination::Degenerate;
            return track;
        }
        double lik_sum = 0.0;
        for (double l : lik) lik_sum += l;
        const auto [el, er] = edges_of(est);
        track.steps.push_back({k, est, el, er, lik_sum / static_cast<double>(n)});

        if (!maps_->centerline().contains(est.anchor)) {
            track.termination = Termination::LeftImage;
            return track;
        }
        if (endpoint && reached(est, *endpoint, cfg_.noise.step)) {
            track.termination = Termination::ReachedEndpoint;
            return track;
        }
        low_streak = sample_bilinear(maps_->centerline(), est.anchor) < cfg_.stop_pc_threshold ? low_streak + 1 : 0;
        if (low_streak >= cfg_.stop_patience) {
            track.termination = Termination::LowConfidence;
            return track;
        }
        if (k == cfg_.max_steps) break;

        const auto idx = systematic_resample(ps.weights, resampler);
        std::vector<VesselState> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = ps.states[idx[i]];
        ps.states = std::move(next);
        std::fill(ps.weights.begin(), ps.weights.end(), 1.0 / static_cast<double>(n));
    }
    track.termination = Termination::MaxSteps;
    return track;
}

Track track_segment(const MapTriple& maps, const VesselState& seed, std::optional<Vec2> endpoint,
                    const TrackerConfig& cfg, Exec exec) {
    return SegmentTracker(maps, cfg, exec).run(seed, endpoint);
}

}  // namespace vtrack
