#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vtrack::cli {

struct BoxSeries {
    std::string label;
    std::vector<double> values;
};

/// Box-and-whisker chart (1.5 IQR whiskers, outliers as dots), one box per series.
std::string boxplot_svg(std::span<const BoxSeries> series, const std::string& title);

/// Estimated vs reference widths over normalised arc length.
std::string width_overlay_svg(std::span<const double> reference, std::span<const double> estimate,
                              std::uint64_t segment_id);

}  // namespace vtrack::cli
