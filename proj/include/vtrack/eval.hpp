#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vtrack/filter.hpp"
#include "vtrack/phantom.hpp"

namespace vtrack {

/// Widths along a vessel; arc lengths strictly increasing.
struct WidthSeries {
    std::vector<double> arc_lengths;
    std::vector<double> widths;

    /// Throws LengthMismatch or InvalidArgument (non-increasing arc lengths).
    void validate() const;
};

inline constexpr std::size_t kProfileCount = 100;

/// Natural cubic spline through the series, evaluated at kProfileCount equally
/// spaced arc lengths from the first to the last knot inclusive. Throws
/// TooFewSamples below four knots.
std::vector<double> resample_to_100(const WidthSeries& series);

/// Sample (n - 1) standard deviation of reference - estimate.
double precision(std::span<const double> reference, std::span<const double> estimate);

/// Mean absolute difference.
double accuracy(std::span<const double> reference, std::span<const double> estimate);

struct DistributionStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

/// Linear-interpolation quantile at position p * (n - 1) of the sorted values.
double quantile(std::span<const double> sorted, double p);

/// Box-plot summary with whiskers at 1.5 IQR. Throws EmptyInput.
DistributionStats distribution_stats(std::span<const double> values);

struct SegmentReport {
    double precision = 0.0;
    double accuracy = 0.0;
    std::size_t n_samples = 0;
};

/// Width series of a track: cumulative anchor path length vs wl + wr.
WidthSeries track_widths(const Track& track);

/// Truth widths restricted to the stretch the track covers: from the truth
/// sample nearest the first estimated anchor to the one nearest the last.
WidthSeries truth_widths(const VesselTruth& truth, const Track& track);

/// Both series resampled over their own normalised arc length, then compared.
SegmentReport evaluate_segment(const Track& track, const VesselTruth& truth);

/// Distance from `p` to the truth centerline polyline.
double distance_to_centerline(const VesselTruth& truth, const Vec2& p);

}  // namespace vtrack
