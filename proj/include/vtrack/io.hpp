#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vtrack/filter.hpp"
#include "vtrack/phantom.hpp"

namespace vtrack {

/// Writes `bytes` to a sibling temporary file, then renames it over `path`.
/// Throws IoFailure; never leaves a partial file at `path`.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Whole file as bytes. Throws MissingFile.
std::string read_file(const std::filesystem::path& path);

// --- run configuration -------------------------------------------------------

struct RunConfig {
    TrackerConfig tracker;
    std::optional<PhantomSpec> phantom;
    std::optional<std::uint64_t> phantom_seed;
};

/// Parses a run-config document. `master_seed` is mandatory. Throws ParseError.
RunConfig parse_run_config(std::string_view json_text);
std::string run_config_to_json(const RunConfig& cfg);

/// Parses a phantom spec document; its optional "seed" is returned separately.
/// Throws ParseError.
PhantomSpec parse_phantom_spec(std::string_view json_text, std::uint64_t* seed = nullptr);
std::string phantom_spec_to_json(const PhantomSpec& spec, std::uint64_t seed);

// --- tracks ------------------------------------------------------------------

struct SegmentTrack {
    std::uint64_t segment_id = 0;
    Track track;
};

/// {"segment_id", "termination", "steps": [{k, anchor, dir, wl, wr, el, er}]}
std::string track_to_json(const SegmentTrack& t);
/// Throws ParseError.
SegmentTrack parse_track_json(std::string_view json_text);

/// File name used for a segment's track inside an output directory.
std::string track_file_name(std::uint64_t segment_id);

// --- ground truth CSV ----------------------------------------------------------

/// Header: segment_id,arc_length,cx,cy,tx,ty,elx,ely,erx,ery,width (6 decimals).
std::string truth_to_csv(const GroundTruth& truth);

struct TruthTable {
    std::vector<std::uint64_t> ids;
    std::vector<VesselTruth> vessels;

    const VesselTruth* find(std::uint64_t id) const;
};

/// Throws ParseError.
TruthTable parse_truth_csv(std::string_view text);

// --- seeds CSV -----------------------------------------------------------------

struct SeedRow {
    std::uint64_t segment_id = 0;
    Vec2 c1;
    Vec2 c2;
    double wl = 0.0;
    double wr = 0.0;
    std::optional<Vec2> endpoint;
};

/// Rows of segment_id,c1x,c1y,c2x,c2y,wl,wr[,ex,ey]; an optional header line and
/// blank lines are skipped. Throws ParseError.
std::vector<SeedRow> parse_seeds_csv(std::string_view text);
std::string seeds_to_csv(const std::vector<SeedRow>& rows);

/// Seeds taken from ground truth: c1 is the first sample, c2 the sample one
/// `step` further along, the endpoint is the last sample.
std::vector<SeedRow> seeds_from_truth(const GroundTruth& truth, double step);

}  // namespace vtrack
