#include "vtrack/likelihood.hpp"

#include <cmath>

#include "vtrack/error.hpp"

namespace vtrack {

ChiPoints chi_points(const Vec2& left, const Vec2& right) {
    if (left == right) throw Error(ErrorKind::DegenerateLine, "hypothesised edges coincide");
    return {(3.0 * left + right) / 4.0, (left + right) / 2.0, (left + 3.0 * right) / 4.0};
}

LikelihoodTerms profile_terms(const VesselState& state, const MapTriple& maps) {
    const ProbMap& pc = maps.centerline();
    const ProbMap& pe = maps.edge();

    LikelihoodTerms t;
    t.anchor = sample_bilinear(pc, state.anchor);
    if (t.anchor == 0.0) return t;

    const auto [left, right] = edges_of(state);
    t.edge = 1.0;
    for (const Vec2& e : {left, right}) t.edge *= sample_bilinear(pe, e) * (1.0 - sample_bilinear(pc, e));

    const auto chi = chi_points(left, right);
    t.centre = 1.0;
    for (const Vec2& c : {chi.chi1, chi.chi2, chi.chi3})
        t.centre *= sample_bilinear(pc, c) * (1.0 - sample_bilinear(pe, c));
    return t;
}

double likelihood(const VesselState& state, const MapTriple& maps, const TensorConfig& tensor_cfg,
                  bool use_ps) {
    auto t = profile_terms(state, maps);
    if (use_ps && t.anchor > 0.0)
        t.orientation = std::abs(dot(state.dir, orientation_at(maps.interior(), state.anchor, tensor_cfg, state.dir)));
    return t.value();
}

ObservationModel::ObservationModel(const MapTriple& maps, const TensorConfig& tensor_cfg, bool use_ps,
                                   Exec exec)
    : maps_(&maps), field_(maps.interior(), tensor_cfg, exec), use_ps_(use_ps) {}

LikelihoodTerms ObservationModel::terms(const VesselState& state) const {
    auto t = profile_terms(state, *maps_);
    if (use_ps_ && t.anchor > 0.0)
        t.orientation = std::abs(dot(state.dir, field_.orientation(state.anchor, state.dir)));
    return t;
}

}  // namespace vtrack
