#pragma once

#include "vtrack/direction.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/raster.hpp"

namespace vtrack {

/// Quarter, half and three-quarter points of a hypothesised cross-section line.
struct ChiPoints {
    Vec2 chi1;
    Vec2 chi2;
    Vec2 chi3;
};

/// Throws DegenerateLine when left == right.
ChiPoints chi_points(const Vec2& left, const Vec2& right);

/// Individual factors of the observation model for one hypothesis.
struct LikelihoodTerms {
    double edge = 0.0;         // prod over both edges of Pe * (1 - Pc)
    double centre = 0.0;       // prod over chi points of Pc * (1 - Pe)
    double anchor = 0.0;       // Pc at the anchor
    double orientation = 1.0;  // |dir . eigenvector|, or 1 when disabled

    double value() const { return edge * centre * anchor * orientation; }
};

/// Map-profile factors for `state`; the orientation factor is left at 1. All map
/// reads go through sample_bilinear, so samples off the image read as 0. When
/// Pc at the anchor is 0 the remaining factors are not evaluated.
LikelihoodTerms profile_terms(const VesselState& state, const MapTriple& maps);

/// Reference evaluation: orientation is computed directly from the interior map.
double likelihood(const VesselState& state, const MapTriple& maps, const TensorConfig& tensor_cfg,
                  bool use_ps);

/// Likelihood evaluator bound to one map triple, with the orientation field
/// precomputed once. Thread-safe for concurrent evaluation.
class ObservationModel {
public:
    ObservationModel(const MapTriple& maps, const TensorConfig& tensor_cfg, bool use_ps,
                     Exec exec = Exec::parallel);

    LikelihoodTerms terms(const VesselState& state) const;
    double operator()(const VesselState& state) const { return terms(state).value(); }

    const MapTriple& maps() const noexcept { return *maps_; }
    const TensorField& field() const noexcept { return field_; }
    bool use_ps() const noexcept { return use_ps_; }

private:
    const MapTriple* maps_;
    TensorField field_;
    bool use_ps_;
};

}  // namespace vtrack
