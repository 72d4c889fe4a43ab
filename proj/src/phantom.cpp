#include "vtrack/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vtrack/error.hpp"

namespace vtrack {

namespace {

constexpr double kSineGrid = 0.05;  // parameter spacing for arc-length tables

struct CurvePoint {
    double s;
    Vec2 p;  // centred coordinates
    Vec2 t;  // unit tangent
};

// Samples every kTruthSpacing of arc length, plus the final point.
std::vector<CurvePoint> sample_polyline(const Polyline& line, const Vec2& origin) {
    std::vector<Vec2> pts;
    for (const auto& p : line.points) pts.push_back(p - origin);
    std::vector<double> starts{0.0};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) starts.push_back(starts.back() + distance(pts[i], pts[i + 1]));
    const double total = starts.back();

    std::vector<CurvePoint> out;
    std::size_t seg = 0;
    for (std::size_t k = 0;; ++k) {
        const double s = std::min(total, kTruthSpacing * static_cast<double>(k));
        while (seg + 2 < pts.size() && s > starts[seg + 1]) ++seg;
        const Vec2 ab = pts[seg + 1] - pts[seg];
        const double len = starts[seg + 1] - starts[seg];
        const double u = std::clamp((s - starts[seg]) / len, 0.0, 1.0);
        out.push_back({s, pts[seg] + ab * u, ab / len});
        if (s >= total) break;
    }
    return out;
}

struct SineEval {
    const SineCurve& c;
    Vec2 start;
    Vec2 axis;
    Vec2 normal;

    double angle(double t) const { return 2.0 * std::numbers::pi * t / c.period + c.phase; }
    Vec2 at(double t) const {
        const double offset = c.amplitude * std::sin(angle(t));
        return start + axis * t + normal * offset;
    }
    Vec2 tangent(double t) const {
        const double slope = c.amplitude * (2.0 * std::numbers::pi / c.period) * std::cos(angle(t));
        return normalized(axis + normal * slope);
    }
};

std::vector<CurvePoint> sample_sine(const SineCurve& curve, const Vec2& origin) {
    const Vec2 axis = normalized(curve.axis);
    const SineEval f{curve, curve.start - origin, axis, perpendicular(axis)};
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(curve.length / kSineGrid)));
    std::vector<double> param(m + 1), cum(m + 1, 0.0);
    Vec2 prev = f.at(0.0);
    for (std::size_t j = 0; j <= m; ++j) {
        param[j] = curve.length * static_cast<double>(j) / static_cast<double>(m);
        const Vec2 cur = f.at(param[j]);
        if (j > 0) cum[j] = cum[j - 1] + distance(prev, cur);
        prev = cur;
    }
    const double total = cum[m];

    std::vector<CurvePoint> out;
    std::size_t j = 0;
    for (std::size_t k = 0;; ++k) {
        const double s = std::min(total, kTruthSpacing * static_cast<double>(k));
        while (j + 1 < m && s > cum[j + 1]) ++j;
        const double u = std::clamp((s - cum[j]) / (cum[j + 1] - cum[j]), 0.0, 1.0);
        const double t = param[j] + u * (param[j + 1] - param[j]);
        out.push_back({s, f.at(t), f.tangent(t)});
        if (s >= total) break;
    }
    return out;
}

std::vector<CurvePoint> sample_centerline(const CenterlineSpec& c, const Vec2& origin) {
    return std::visit(
        [&](const auto& curve) {
            if constexpr (std::is_same_v<std::decay_t<decltype(curve)>, Polyline>)
                return sample_polyline(curve, origin);
            else
                return sample_sine(curve, origin);
        },
        c);
}

Vec2 image_origin(const PhantomSpec& spec) {
    return {0.5 * static_cast<double>(spec.width - 1), 0.5 * static_cast<double>(spec.height - 1)};
}

// Ground truth in centred coordinates.
GroundTruth centred_truth(const PhantomSpec& spec) {
    spec.validate();
    const Vec2 origin = image_origin(spec);
    GroundTruth truth;
    for (std::size_t v = 0; v < spec.vessels.size(); ++v) {
        const auto& vessel = spec.vessels[v];
        const auto curve = sample_centerline(vessel.centerline, origin);
        const double length = curve.back().s;
        VesselTruth vt;
        double max_width = 0.0;
        for (const auto& cp : curve) {
            const double w = vessel.width.at(cp.s, length);
            if (!(w >= 2.0 * kMinHalfWidth))
                throw Error(ErrorKind::InvalidArgument,
                            "vessel " + std::to_string(v) + ": width " + std::to_string(w) + " below " +
                                std::to_string(2.0 * kMinHalfWidth) + " px");
            max_width = std::max(max_width, w);
            const Vec2 n = perpendicular(cp.t) * (0.5 * w);
            vt.samples.push_back({cp.s, cp.p, cp.t, cp.p + n, cp.p - n, w});
        }
        for (const auto& s : vt.samples) {
            if (std::abs(s.center.x) > origin.x - max_width || std::abs(s.center.y) > origin.y - max_width)
                throw Error(ErrorKind::SpecOutOfBounds,
                            "vessel " + std::to_string(v) + " leaves the canvas near (" +
                                std::to_string(s.center.x + origin.x) + ", " +
                                std::to_string(s.center.y + origin.y) + ")");
        }
        truth.vessels.push_back(std::move(vt));
    }
    return truth;
}

struct Segment {
    Vec2 a;
    Vec2 b;
    double wa;
    double wb;
    std::size_t vessel;
};

struct SegmentSet {
    std::vector<Segment> centre;  // grouped by vessel, in order
    std::vector<Segment> edge;
    std::size_t vessels = 0;
};

SegmentSet build_segments(const GroundTruth& truth) {
    SegmentSet set;
    set.vessels = truth.vessels.size();
    for (std::size_t v = 0; v < truth.vessels.size(); ++v) {
        const auto& s = truth.vessels[v].samples;
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            set.centre.push_back({s[i].center, s[i + 1].center, s[i].width, s[i + 1].width, v});
        for (std::size_t i = 0; i + 1 < s.size(); ++i) set.edge.push_back({s[i].left, s[i + 1].left, 0, 0, v});
        for (std::size_t i = 0; i + 1 < s.size(); ++i) set.edge.push_back({s[i].right, s[i + 1].right, 0, 0, v});
    }
    return set;
}

double segment_distance(const Vec2& q, const Segment& seg, double& u) {
    const Vec2 ab = seg.b - seg.a;
    const double len2 = dot(ab, ab);
    u = len2 > 0.0 ? std::clamp(dot(q - seg.a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(q - (seg.a + ab * u));
}

double smoothstep_profile(double signed_dist, double softness) {
    const double t = std::clamp((signed_dist + softness) / (2.0 * softness), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

struct PixelValues {
    double interior;
    double centre;
    double edge;
};

struct RenderParams {
    double cutoff;
    double sigma_c;
    double sigma_e;
    double softness;
    double reflex_depth;
    double reflex_sigma;
};

// Maps at centred point q, considering the candidate segments given by index.
// Distances at or beyond the cutoff count as "no structure".
template <class CentreIdx, class EdgeIdx>
PixelValues evaluate_pixel(const Vec2& q, const SegmentSet& set, const CentreIdx& centre_idx,
                           const EdgeIdx& edge_idx, const RenderParams& rp, std::vector<double>& best,
                           std::vector<double>& best_w) {
    std::fill(best.begin(), best.end(), rp.cutoff);
    std::fill(best_w.begin(), best_w.end(), 0.0);
    double dc = rp.cutoff;
    for (std::size_t i : centre_idx) {
        const Segment& seg = set.centre[i];
        double u = 0.0;
        const double d = segment_distance(q, seg, u);
        if (d < best[seg.vessel]) {
            best[seg.vessel] = d;
            best_w[seg.vessel] = seg.wa + u * (seg.wb - seg.wa);
        }
        dc = std::min(dc, d);
    }
    double de = rp.cutoff;
    for (std::size_t i : edge_idx) {
        double u = 0.0;
        de = std::min(de, segment_distance(q, set.edge[i], u));
    }

    PixelValues px{0.0, 0.0, 0.0};
    for (std::size_t v = 0; v < best.size(); ++v)
        if (best[v] < rp.cutoff) px.interior = std::max(px.interior, smoothstep_profile(0.5 * best_w[v] - best[v], rp.softness));
    if (dc < rp.cutoff) {
        px.centre = std::exp(-0.5 * dc * dc / (rp.sigma_c * rp.sigma_c));
        if (rp.reflex_depth > 0.0)
            px.interior *= 1.0 - rp.reflex_depth * std::exp(-0.5 * dc * dc / (rp.reflex_sigma * rp.reflex_sigma));
    }
    if (de < rp.cutoff) px.edge = std::exp(-0.5 * de * de / (rp.sigma_e * rp.sigma_e));
    return px;
}

struct Planes {
    std::vector<double> interior, centre, edge;
};

// Reference renderer: every pixel tests every segment.
Planes render_serial(const PhantomSpec& spec, const SegmentSet& set, const RenderParams& rp) {
    const std::size_t w = spec.width, h = spec.height;
    const Vec2 origin = image_origin(spec);
    Planes out{std::vector<double>(w * h), std::vector<double>(w * h), std::vector<double>(w * h)};
    std::vector<std::size_t> all_c(set.centre.size()), all_e(set.edge.size());
    for (std::size_t i = 0; i < all_c.size(); ++i) all_c[i] = i;
    for (std::size_t i = 0; i < all_e.size(); ++i) all_e[i] = i;
    std::vector<double> best(set.vessels), best_w(set.vessels);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const Vec2 q{static_cast<double>(x) - origin.x, static_cast<double>(y) - origin.y};
            const auto px = evaluate_pixel(q, set, all_c, all_e, rp, best, best_w);
            out.interior[y * w + x] = px.interior;
            out.centre[y * w + x] = px.centre;
            out.edge[y * w + x] = px.edge;
        }
    }
    return out;
}

// Uniform grid of cell size `cutoff` (in pixel units). Each segment is listed in
// every cell its cutoff-dilated bounding box touches, in global order, so a
// pixel's own cell holds every segment that can be nearer than the cutoff.
class SegmentGrid {
public:
    SegmentGrid(const std::vector<Segment>& segs, const Vec2& origin, std::size_t w, std::size_t h, double cell)
        : cell_(cell),
          nx_(static_cast<std::size_t>(std::ceil(static_cast<double>(w) / cell)) + 1),
          ny_(static_cast<std::size_t>(std::ceil(static_cast<double>(h) / cell)) + 1),
          cells_(nx_ * ny_) {
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const Vec2 a = segs[i].a + origin, b = segs[i].b + origin;
            const auto lo_x = clamp_cell(std::min(a.x, b.x) - cell, nx_);
            const auto hi_x = clamp_cell(std::max(a.x, b.x) + cell, nx_);
            const auto lo_y = clamp_cell(std::min(a.y, b.y) - cell, ny_);
            const auto hi_y = clamp_cell(std::max(a.y, b.y) + cell, ny_);
            for (std::size_t cy = lo_y; cy <= hi_y; ++cy)
                for (std::size_t cx = lo_x; cx <= hi_x; ++cx) cells_[cy * nx_ + cx].push_back(i);
        }
    }

    const std::vector<std::size_t>& at(std::size_t x, std::size_t y) const {
        return cells_[static_cast<std::size_t>(static_cast<double>(y) / cell_) * nx_ +
                      static_cast<std::size_t>(static_cast<double>(x) / cell_)];
    }

private:
    std::size_t clamp_cell(double coord, std::size_t n) const {
        const double c = std::floor(coord / cell_);
        return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(n - 1)));
    }

    double cell_;
    std::size_t nx_, ny_;
    std::vector<std::vector<std::size_t>> cells_;
};

Planes render_parallel(const PhantomSpec& spec, const SegmentSet& set, const RenderParams& rp) {
    const std::size_t w = spec.width, h = spec.height;
    const Vec2 origin = image_origin(spec);
    const SegmentGrid centre_grid(set.centre, origin, w, h, rp.cutoff);
    const SegmentGrid edge_grid(set.edge, origin, w, h, rp.cutoff);
    Planes out{std::vector<double>(w * h), std::vector<double>(w * h), std::vector<double>(w * h)};
    const auto rows = static_cast<long>(h);
#pragma omp parallel
    {
        std::vector<double> best(set.vessels), best_w(set.vessels);
#pragma omp for schedule(dynamic, 4)
        for (long row = 0; row < rows; ++row) {
            const auto y = static_cast<std::size_t>(row);
            for (std::size_t x = 0; x < w; ++x) {
                const Vec2 q{static_cast<double>(x) - origin.x, static_cast<double>(y) - origin.y};
                const auto px = evaluate_pixel(q, set, centre_grid.at(x, y), edge_grid.at(x, y), rp, best, best_w);
                out.interior[y * w + x] = px.interior;
                out.centre[y * w + x] = px.centre;
                out.edge[y * w + x] = px.edge;
            }
        }
    }
    return out;
}

ProbMap finish_plane(const std::vector<double>& plane, const PhantomSpec& spec, std::uint64_t seed,
                     std::uint64_t plane_id, Exec exec) {
    std::vector<float> data(plane.size());
    const std::size_t w = spec.width;
    const auto rows = static_cast<long>(spec.height);
    const bool parallel = exec == Exec::parallel;
#pragma omp parallel for if (parallel) schedule(static)
    for (long row = 0; row < rows; ++row) {
        const auto y = static_cast<std::size_t>(row);
        Rng rng = make_stream(seed, StreamKind::phantom_noise, plane_id, y);
        std::normal_distribution<double> noise(0.0, 1.0);
        for (std::size_t x = 0; x < w; ++x) {
            double v = plane[y * w + x];
            if (spec.noise_level > 0.0) v += spec.noise_level * noise(rng);
            data[y * w + x] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
    }
    return ProbMap(spec.width, spec.height, std::move(data));
}

}  // namespace

double WidthProfile::at(double s, double length) const {
    switch (kind) {
        case Kind::constant: return start;
        case Kind::taper: return length > 0.0 ? start + (end - start) * (s / length) : start;
        case Kind::bump: {
            const double d = s - centre * length;
            return start + (peak - start) * std::exp(-0.5 * d * d / (spread * spread));
        }
    }
    return start;
}

void PhantomSpec::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
    if (width < 2 || height < 2) fail("phantom canvas must be at least 2x2");
    if (!(ridge_sigma_c > 0.0) || !(ridge_sigma_e > 0.0)) fail("ridge sigmas must be positive");
    if (!(interior_softness > 0.0)) fail("interior_softness must be positive");
    if (!(noise_level >= 0.0)) fail("noise_level must be non-negative");
    if (!(reflex_depth >= 0.0 && reflex_depth <= 1.0) || !(reflex_sigma > 0.0)) fail("invalid light reflex");
    for (std::size_t v = 0; v < vessels.size(); ++v) {
        const std::string tag = "vessel " + std::to_string(v) + ": ";
        if (const auto* line = std::get_if<Polyline>(&vessels[v].centerline)) {
            if (line->points.size() < 2) fail(tag + "polyline needs at least two points");
            for (std::size_t i = 0; i + 1 < line->points.size(); ++i)
                if (line->points[i] == line->points[i + 1]) fail(tag + "repeated polyline point");
        } else {
            const auto& sine = std::get<SineCurve>(vessels[v].centerline);
            if (!(sine.length > 0.0) || !(sine.period > 0.0)) fail(tag + "sine length and period must be positive");
            if (!(norm(sine.axis) > 0.0)) fail(tag + "sine axis must be non-zero");
        }
        const auto& wp = vessels[v].width;
        if (wp.kind == WidthProfile::Kind::bump && !(wp.spread > 0.0)) fail(tag + "bump spread must be positive");
    }
}

PhantomSpec PhantomSpec::mirrored() const {
    PhantomSpec m = *this;
    const double span = static_cast<double>(width - 1);
    for (auto& v : m.vessels) {
        if (auto* line = std::get_if<Polyline>(&v.centerline)) {
            for (auto& p : line->points) p.x = span - p.x;
        } else {
            auto& sine = std::get<SineCurve>(v.centerline);
            sine.start.x = span - sine.start.x;
            sine.axis.x = -sine.axis.x;
            sine.amplitude = -sine.amplitude;  // the axis normal flips orientation too
        }
    }
    return m;
}

GroundTruth sample_ground_truth(const PhantomSpec& spec) {
    GroundTruth truth = centred_truth(spec);
    const Vec2 origin = image_origin(spec);
    for (auto& v : truth.vessels)
        for (auto& s : v.samples) {
            s.center += origin;
            s.left += origin;
            s.right += origin;
        }
    return truth;
}

Phantom render_phantom(const PhantomSpec& spec, std::uint64_t seed, Exec exec) {
    const GroundTruth centred = centred_truth(spec);
    const SegmentSet set = build_segments(centred);

    double max_half = 0.0;
    for (const auto& v : centred.vessels)
        for (const auto& s : v.samples) max_half = std::max(max_half, 0.5 * s.width);
    const RenderParams rp{std::max({8.0 * spec.ridge_sigma_c, 8.0 * spec.ridge_sigma_e,
                                    max_half + 2.0 * spec.interior_softness,
                                    spec.reflex_depth > 0.0 ? 8.0 * spec.reflex_sigma : 0.0}),
                          spec.ridge_sigma_c,
                          spec.ridge_sigma_e,
                          spec.interior_softness,
                          spec.reflex_depth,
                          spec.reflex_sigma};

    const Planes planes = exec == Exec::parallel ? render_parallel(spec, set, rp) : render_serial(spec, set, rp);
    MapTriple maps(finish_plane(planes.interior, spec, seed, 0, exec), finish_plane(planes.centre, spec, seed, 1, exec),
                   finish_plane(planes.edge, spec, seed, 2, exec));
    return {std::move(maps), sample_ground_truth(spec)};
}

ProximityScene proximity_scene() {
    PhantomSpec spec;
    spec.width = 64;
    spec.height = 64;
    WidthProfile w;
    w.start = 6.0;
    spec.vessels.push_back({Polyline{{{25.0, 8.0}, {25.0, 55.0}}}, w});
    spec.vessels.push_back({Polyline{{{35.0, 8.0}, {35.0, 55.0}}}, w});

    ProximityScene scene{render_phantom(spec, 0, Exec::serial), {}, {}, {}};
    // Cross-section spanning the left vessel's own edges (x = 22 .. 28).
    scene.within = {{0.0, 1.0}, {25.0, 32.0}, 3.0, 3.0};
    // Line from the left vessel's right edge (x = 28) to the right vessel's left edge (x = 32).
    scene.between = {{0.0, 1.0}, {30.0, 32.0}, 2.0, 2.0};
    // Inside the left vessel, 1.5 px off its axis, oriented along the axis.
    scene.parallel = {{1.0, 0.0}, {26.5, 32.0}, 3.0, 3.0};
    return scene;
}

}  // namespace vtrack
