#include "vtrack/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vtrack/error.hpp"

namespace vtrack {

bool VesselState::valid() const {
    return std::abs(norm(dir) - 1.0) <= 1e-9 && std::isfinite(anchor.x) && std::isfinite(anchor.y) &&
           wl >= kMinHalfWidth && wr >= kMinHalfWidth;
}

void NoiseConfig::validate() const {
    if (!(sigma_theta >= 0.0 && sigma_a >= 0.0 && sigma_w >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "noise sigmas must be non-negative");
    if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
}

VesselState propagate(const VesselState& s, const NoiseConfig& cfg, Rng& rng) {
    std::normal_distribution<double> unit(0.0, 1.0);
    const double theta = cfg.sigma_theta * unit(rng);
    const double lateral = cfg.sigma_a * unit(rng);
    const double dwl = cfg.sigma_w * unit(rng);
    const double dwr = cfg.sigma_w * unit(rng);

    VesselState next;
    next.dir = theta == 0.0 ? s.dir : normalized(rotated(s.dir, theta));
    next.anchor = s.anchor + next.dir * cfg.step + perpendicular(next.dir) * lateral;
    next.wl = std::max(kMinHalfWidth, s.wl + dwl);
    next.wr = std::max(kMinHalfWidth, s.wr + dwr);
    return next;
}

EdgePair edges_of(const VesselState& s) {
    const Vec2 n = perpendicular(s.dir);
    return {s.anchor + n * s.wl, s.anchor - n * s.wr};
}

}  // namespace vtrack
