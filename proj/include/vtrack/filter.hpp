#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vtrack/direction.hpp"
#include "vtrack/exec.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/likelihood.hpp"
#include "vtrack/raster.hpp"

namespace vtrack {

struct ParticleSet {
    std::vector<VesselState> states;
    std::vector<double> weights;

    std::size_t size() const noexcept { return states.size(); }
};

struct TrackerConfig {
    std::size_t n_particles = 700;
    NoiseConfig noise{};
    TensorConfig tensor{};
    double stop_pc_threshold = 0.05;
    std::size_t stop_patience = 3;
    std::size_t max_steps = 2000;
    std::uint64_t master_seed = 0;
    bool use_ps = true;

    void validate() const;
};

enum class Termination { ReachedEndpoint, LowConfidence, LeftImage, MaxSteps, Degenerate };

std::string_view to_string(Termination t);
/// Throws ParseError for unknown names.
Termination termination_from_string(std::string_view name);

struct TrackStep {
    std::size_t k = 0;
    VesselState estimate;
    Vec2 el;
    Vec2 er;
    double mean_likelihood = 0.0;

    friend bool operator==(const TrackStep&, const TrackStep&) = default;
};

struct Track {
    std::vector<TrackStep> steps;
    Termination termination = Termination::MaxSteps;

    friend bool operator==(const Track&, const Track&) = default;
};

/// `n` copies of `seed`, each weighted 1/n.
ParticleSet init_particles(const VesselState& seed, std::size_t n);

/// Anchor at c1, direction towards c2. Throws DegenerateSeed if c1 == c2 and
/// InvalidArgument if a half-width is below kMinHalfWidth.
VesselState seed_from_profiles(const Vec2& c1, const Vec2& c2, double wl, double wr);

/// Likelihoods divided by their fixed-order sum; nullopt when all are zero.
std::optional<std::vector<double>> normalize_weights(std::span<const double> likelihoods);

/// Replaces the weights of `ps` by normalised likelihoods of its states.
/// Returns false (weights untouched) when every likelihood is zero.
bool reweight(ParticleSet& ps, const ObservationModel& model, Exec exec = Exec::parallel);

/// Weighted posterior mean. Throws DegenerateDirection when the weighted
/// direction sum nearly cancels.
VesselState expectation(const ParticleSet& ps);

/// Low-variance resampling with a single uniform offset in [0, 1/N).
std::vector<std::size_t> systematic_resample(std::span<const double> weights, Rng& rng);

namespace kernels {

/// Propagates every particle with its own engine and stores its likelihood.
/// Reference loop.
void advance_serial(std::span<VesselState> states, std::span<Rng> engines, const NoiseConfig& noise,
                    const ObservationModel& model, std::span<double> likelihoods);

/// OpenMP version of advance_serial; bit-identical output.
void advance_parallel(std::span<VesselState> states, std::span<Rng> engines, const NoiseConfig& noise,
                      const ObservationModel& model, std::span<double> likelihoods);

void evaluate_serial(std::span<const VesselState> states, const ObservationModel& model,
                     std::span<double> likelihoods);
void evaluate_parallel(std::span<const VesselState> states, const ObservationModel& model,
                       std::span<double> likelihoods);

}  // namespace kernels

/// Optional per-step probe for diagnostics and tests; sees the weighted set
/// before resampling.
struct StepObserver {
    virtual ~StepObserver() = default;
    virtual void on_weighted(std::size_t k, const ParticleSet& ps) = 0;
};

/// Tracks one vessel segment through a map triple.
class SegmentTracker {
public:
    /// Builds the observation model (including the orientation field) once.
    SegmentTracker(const MapTriple& maps, TrackerConfig cfg, Exec exec = Exec::parallel);

    /// Runs predict, weight, estimate, record, resample until a stopping rule
    /// fires. `stream_id` separates the random streams of different segments
    /// sharing one master seed.
    Track run(const VesselState& seed, std::optional<Vec2> endpoint, std::uint64_t stream_id = 0,
              StepObserver* observer = nullptr) const;

    const TrackerConfig& config() const noexcept { return cfg_; }
    const ObservationModel& model() const noexcept { return model_; }

private:
    const MapTriple* maps_;
    TrackerConfig cfg_;
    Exec exec_;
    ObservationModel model_;
};

/// Convenience wrapper: builds a SegmentTracker and runs it with stream 0.
Track track_segment(const MapTriple& maps, const VesselState& seed, std::optional<Vec2> endpoint,
                    const TrackerConfig& cfg, Exec exec = Exec::parallel);

}  // namespace vtrack
