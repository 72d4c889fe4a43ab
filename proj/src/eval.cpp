#include "vtrack/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vtrack/error.hpp"

namespace vtrack {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::LengthMismatch,
                    "series of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    if (a.empty()) throw Error(ErrorKind::EmptyInput, "empty width series");
}

// Second derivatives of the natural cubic spline (Thomas algorithm).
std::vector<double> spline_moments(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    std::vector<double> diag(n - 2), upper(n - 2), rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        diag[i - 1] = 2.0 * (h0 + h1);
        upper[i - 1] = h1;
        rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    // forward sweep; sub-diagonal entry of row r is h_{r} = x[r+1] - x[r]
    for (std::size_t r = 1; r < diag.size(); ++r) {
        const double sub = x[r + 1] - x[r];
        const double f = sub / diag[r - 1];
        diag[r] -= f * upper[r - 1];
        rhs[r] -= f * rhs[r - 1];
    }
    for (std::size_t r = diag.size(); r-- > 0;) {
        const double next = r + 1 < diag.size() ? m[r + 2] : 0.0;
        m[r + 1] = (rhs[r] - upper[r] * next) / diag[r];
    }
    return m;
}

}  // namespace

void WidthSeries::validate() const {
    if (arc_lengths.size() != widths.size())
        throw Error(ErrorKind::LengthMismatch, "arc_lengths and widths differ in length");
    for (std::size_t i = 1; i < arc_lengths.size(); ++i)
        if (!(arc_lengths[i] > arc_lengths[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "arc lengths must be strictly increasing");
}

std::vector<double> resample_to_100(const WidthSeries& series) {
    series.validate();
    const auto& x = series.arc_lengths;
    const auto& y = series.widths;
    if (x.size() < 4)
        throw Error(ErrorKind::TooFewSamples, std::to_string(x.size()) + " knots; a cubic spline needs 4");
    const auto m = spline_moments(x, y);

    std::vector<double> out(kProfileCount);
    const double first = x.front();
    const double span = x.back() - first;
    std::size_t seg = 0;
    for (std::size_t j = 0; j < kProfileCount; ++j) {
        const double at = first + span * static_cast<double>(j) / static_cast<double>(kProfileCount - 1);
        while (seg + 2 < x.size() && at > x[seg + 1]) ++seg;
        const double h = x[seg + 1] - x[seg];
        const double a = x[seg + 1] - at;
        const double b = at - x[seg];
        out[j] = (m[seg] * a * a * a + m[seg + 1] * b * b * b) / (6.0 * h) + (y[seg] / h - m[seg] * h / 6.0) * a +
                 (y[seg + 1] / h - m[seg + 1] * h / 6.0) * b;
    }
    out.front() = y.front();
    out.back() = y.back();
    return out;
}

double precision(std::span<const double> reference, std::span<const double> estimate) {
    require_same_length(reference, estimate);
    const std::size_t n = reference.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += reference[i] - estimate[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = reference[i] - estimate[i] - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double accuracy(std::span<const double> reference, std::span<const double> estimate) {
    require_same_length(reference, estimate);
    double sum = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) sum += std::abs(reference[i] - estimate[i]);
    return sum / static_cast<double>(reference.size());
}

double quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw Error(ErrorKind::EmptyInput, "quantile of an empty set");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DistributionStats distribution_stats(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "no values to summarise");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DistributionStats st;
    st.median = quantile(sorted, 0.5);
    st.q1 = quantile(sorted, 0.25);
    st.q3 = quantile(sorted, 0.75);
    const double iqr = st.q3 - st.q1;
    const double lo_fence = st.q1 - 1.5 * iqr;
    const double hi_fence = st.q3 + 1.5 * iqr;
    st.whisker_low = std::numeric_limits<double>::infinity();
    st.whisker_high = -std::numeric_limits<double>::infinity();
    for (double v : sorted) {
        if (v < lo_fence || v > hi_fence) {
            st.outliers.push_back(v);
        } else {
            st.whisker_low = std::min(st.whisker_low, v);
            st.whisker_high = std::max(st.whisker_high, v);
        }
    }
    return st;
}

WidthSeries track_widths(const Track& track) {
    WidthSeries ws;
    double s = 0.0;
    for (std::size_t i = 0; i < track.steps.size(); ++i) {
        const auto& est = track.steps[i].estimate;
        if (i > 0) {
            const double ds = distance(est.anchor, track.steps[i - 1].estimate.anchor);
            if (!(ds > 0.0)) continue;
            s += ds;
        }
        ws.arc_lengths.push_back(s);
        ws.widths.push_back(est.wl + est.wr);
    }
    return ws;
}

namespace {

std::size_t nearest_sample(const VesselTruth& truth, const Vec2& p) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < truth.samples.size(); ++i) {
        const double d = distance(truth.samples[i].center, p);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

WidthSeries truth_widths(const VesselTruth& truth, const Track& track) {
    if (truth.samples.empty()) throw Error(ErrorKind::EmptyInput, "empty ground truth");
    std::size_t from = 0;
    std::size_t to = truth.samples.size() - 1;
    if (!track.steps.empty()) {
        from = nearest_sample(truth, track.steps.front().estimate.anchor);
        to = nearest_sample(truth, track.steps.back().estimate.anchor);
    }
    const std::size_t count = (from <= to ? to - from : from - to) + 1;
    if (count < 4) {
        from = 0;
        to = truth.samples.size() - 1;
    }

    WidthSeries ws;
    const double s0 = truth.samples[from].arc_length;
    const bool forward = from <= to;
    for (std::size_t i = from;; forward ? ++i : --i) {
        ws.arc_lengths.push_back(std::abs(truth.samples[i].arc_length - s0));
        ws.widths.push_back(truth.samples[i].width);
        if (i == to) break;
    }
    return ws;
}

SegmentReport evaluate_segment(const Track& track, const VesselTruth& truth) {
    const auto est = resample_to_100(track_widths(track));
    const auto ref = resample_to_100(truth_widths(truth, track));
    return {precision(ref, est), accuracy(ref, est), track.steps.size()};
}

double distance_to_centerline(const VesselTruth& truth, const Vec2& p) {
    const auto& s = truth.samples;
    if (s.size() == 1) return distance(s.front().center, p);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const Vec2 ab = s[i + 1].center - s[i].center;
        const double len2 = dot(ab, ab);
        const double u = len2 > 0.0 ? std::clamp(dot(p - s[i].center, ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, distance(p, s[i].center + ab * u));
    }
    return best;
}

}  // namespace vtrack
