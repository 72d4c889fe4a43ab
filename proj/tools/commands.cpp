#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plot.hpp"
#include "vtrack/error.hpp"
#include "vtrack/eval.hpp"
#include "vtrack/filter.hpp"
#include "vtrack/io.hpp"
#include "vtrack/phantom.hpp"
#include "vtrack/raster.hpp"

namespace vtrack::cli {

namespace fs = std::filesystem;

namespace {

int exit_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::MissingFile:
        case ErrorKind::IoFailure: return kIo;
        default: return kValidation;
    }
}

class Diag {
public:
    Diag(std::ostream& os, bool quiet) : os_(os), quiet_(quiet) {}
    void info(const std::string& msg) const {
        if (!quiet_) os_ << msg << '\n';
    }
    void warn(const std::string& msg) const { os_ << "warning: " << msg << '\n'; }
    int fail(const Error& e) const {
        os_ << "error: " << e.what() << '\n';
        return exit_for(e);
    }

private:
    std::ostream& os_;
    bool quiet_;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::IoFailure, "cannot create directory " + dir.string());
}

RunConfig load_config(const Common& opts) {
    RunConfig cfg;
    if (opts.config) {
        cfg = parse_run_config(read_file(*opts.config));
    } else if (!opts.seed) {
        throw Error(ErrorKind::InvalidArgument, "no master seed: pass --config <file> or --seed <u64>");
    }
    if (opts.seed) cfg.tracker.master_seed = *opts.seed;
    return cfg;
}

std::vector<SegmentTrack> load_tracks(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::MissingFile, dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("track_") && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::vector<SegmentTrack> tracks;
    for (const auto& f : files) {
        try {
            tracks.push_back(parse_track_json(read_file(f)));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::ParseError) throw Error(ErrorKind::ParseError, f.string() + ": " + e.what());
            throw;
        }
    }
    std::sort(tracks.begin(), tracks.end(),
              [](const SegmentTrack& a, const SegmentTrack& b) { return a.segment_id < b.segment_id; });
    return tracks;
}

struct Evaluated {
    std::uint64_t id;
    SegmentReport report;
    std::vector<double> reference;
    std::vector<double> estimate;
};

// Throws InvalidArgument naming the first track id absent from the truth.
std::vector<Evaluated> evaluate_all(const std::vector<SegmentTrack>& tracks, const TruthTable& truth,
                                    const Diag& diag) {
    for (const auto& t : tracks)
        if (!truth.find(t.segment_id))
            throw Error(ErrorKind::InvalidArgument,
                        "segment id " + std::to_string(t.segment_id) + " has no ground truth");
    for (auto id : truth.ids) {
        const bool tracked = std::any_of(tracks.begin(), tracks.end(),
                                         [id](const SegmentTrack& t) { return t.segment_id == id; });
        if (!tracked) diag.warn("ground-truth segment " + std::to_string(id) + " has no track");
    }
    std::vector<Evaluated> out;
    for (const auto& t : tracks) {
        const VesselTruth& vt = *truth.find(t.segment_id);
        try {
            Evaluated e{t.segment_id, {}, resample_to_100(truth_widths(vt, t.track)),
                        resample_to_100(track_widths(t.track))};
            e.report = {precision(e.reference, e.estimate), accuracy(e.reference, e.estimate), t.track.steps.size()};
            out.push_back(std::move(e));
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::TooFewSamples) throw;
            diag.warn("segment " + std::to_string(t.segment_id) + " skipped: " + err.what());
        }
    }
    return out;
}

nlohmann::json stats_json(const std::vector<double>& values) {
    if (values.empty()) return nullptr;
    const auto st = distribution_stats(values);
    return {{"median", st.median},           {"q1", st.q1},
            {"q3", st.q3},                   {"whisker_low", st.whisker_low},
            {"whisker_high", st.whisker_high}, {"outliers", st.outliers}};
}

}  // namespace

int cmd_phantom(const std::optional<fs::path>& spec_path, bool emit_seeds, const Common& opts, std::ostream& os) {
    const Diag diag(os, opts.quiet);
    try {
        PhantomSpec spec;
        std::uint64_t seed = 0;
        if (spec_path) {
            spec = parse_phantom_spec(read_file(*spec_path), &seed);
        } else if (opts.config) {
            const auto cfg = parse_run_config(read_file(*opts.config));
            if (!cfg.phantom) throw Error(ErrorKind::ParseError, opts.config->string() + " has no 'phantom' section");
            spec = *cfg.phantom;
            seed = cfg.phantom_seed.value_or(0);
        } else {
            throw Error(ErrorKind::InvalidArgument, "phantom needs a spec file or --config with a phantom section");
        }
        if (opts.seed) seed = *opts.seed;

        const Phantom ph = render_phantom(spec, seed);
        ensure_dir(opts.out);
        save_vmap(ph.maps.interior(), opts.out / "interior.vmap");
        save_vmap(ph.maps.centerline(), opts.out / "centerline.vmap");
        save_vmap(ph.maps.edge(), opts.out / "edge.vmap");
        write_atomic(opts.out / "truth.csv", truth_to_csv(ph.truth));
        if (emit_seeds) write_atomic(opts.out / "seeds.csv", seeds_to_csv(seeds_from_truth(ph.truth, 2.0)));
        diag.info("phantom: " + std::to_string(spec.vessels.size()) + " vessel(s), " + std::to_string(spec.width) +
                  "x" + std::to_string(spec.height) + " -> " + opts.out.string());
        return kOk;
    } catch (const Error& e) {
        return diag.fail(e);
    }
}

int cmd_track(const fs::path& maps_dir, const fs::path& seeds_path, const Common& opts, std::ostream& os) {
    const Diag diag(os, opts.quiet);
    try {
        const RunConfig cfg = load_config(opts);
        const MapTriple maps(load_vmap(maps_dir / "interior.vmap"), load_vmap(maps_dir / "centerline.vmap"),
                             load_vmap(maps_dir / "edge.vmap"));
        const auto rows = parse_seeds_csv(read_file(seeds_path));

        std::vector<VesselState> seeds;
        std::map<std::uint64_t, int> seen;
        for (const auto& r : rows) {
            if (seen[r.segment_id]++)
                throw Error(ErrorKind::InvalidArgument, "duplicate segment id " + std::to_string(r.segment_id));
            seeds.push_back(seed_from_profiles(r.c1, r.c2, r.wl, r.wr));
            if (!maps.centerline().contains(r.c1))
                throw Error(ErrorKind::OutOfBounds,
                            "seed for segment " + std::to_string(r.segment_id) + " lies outside the maps");
        }
        ensure_dir(opts.out);
        if (rows.empty()) {
            diag.warn("seeds file " + seeds_path.string() + " lists no segments; nothing tracked");
            return kOk;
        }

        const SegmentTracker tracker(maps, cfg.tracker);
        std::vector<Track> tracks(rows.size());
        const auto count = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < count; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)];
            tracks[static_cast<std::size_t>(i)] = tracker.run(seeds[static_cast<std::size_t>(i)], r.endpoint, r.segment_id);
        }

        bool degenerate = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            write_atomic(opts.out / track_file_name(rows[i].segment_id), track_to_json({rows[i].segment_id, tracks[i]}));
            degenerate |= tracks[i].termination == Termination::Degenerate;
            diag.info("segment " + std::to_string(rows[i].segment_id) + ": " + std::to_string(tracks[i].steps.size()) +
                      " steps, " + std::string(to_string(tracks[i].termination)));
        }
        return degenerate ? kDegenerate : kOk;
    } catch (const Error& e) {
        return diag.fail(e);
    }
}

int cmd_eval(const fs::path& tracks_dir, const fs::path& truth_path, const Common& opts, std::ostream& os) {
    const Diag diag(os, opts.quiet);
    try {
        const TruthTable truth = parse_truth_csv(read_file(truth_path));
        const auto tracks = load_tracks(tracks_dir);
        const auto results = evaluate_all(tracks, truth, diag);

        std::string csv = "segment_id,precision,accuracy\n";
        std::vector<double> precisions, accuracies;
        char buf[128];
        for (const auto& r : results) {
            std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f\n", static_cast<unsigned long long>(r.id),
                          r.report.precision, r.report.accuracy);
            csv += buf;
            precisions.push_back(r.report.precision);
            accuracies.push_back(r.report.accuracy);
        }
        const nlohmann::json summary = {{"n_segments", results.size()},
                                        {"precision", stats_json(precisions)},
                                        {"accuracy", stats_json(accuracies)}};
        ensure_dir(opts.out);
        write_atomic(opts.out / "segments.csv", csv);
        write_atomic(opts.out / "summary.json", summary.dump(2) + "\n");
        diag.info("eval: " + std::to_string(results.size()) + " segment(s) -> " + opts.out.string());
        return kOk;
    } catch (const Error& e) {
        return diag.fail(e);
    }
}

int cmd_plot(const fs::path& tracks_dir, const fs::path& truth_path, const Common& opts, std::ostream& os) {
    const Diag diag(os, opts.quiet);
    try {
        const TruthTable truth = parse_truth_csv(read_file(truth_path));
        const auto results = evaluate_all(load_tracks(tracks_dir), truth, diag);
        std::vector<BoxSeries> boxes{{"precision", {}}, {"accuracy", {}}};
        for (const auto& r : results) {
            boxes[0].values.push_back(r.report.precision);
            boxes[1].values.push_back(r.report.accuracy);
        }
        ensure_dir(opts.out);
        write_atomic(opts.out / "boxplot.svg", boxplot_svg(boxes, "per-segment width error (px)"));
        for (const auto& r : results)
            write_atomic(opts.out / ("widths_" + std::to_string(r.id) + ".svg"),
                         width_overlay_svg(r.reference, r.estimate, r.id));
        diag.info("plot: " + std::to_string(results.size() + 1) + " SVG file(s) -> " + opts.out.string());
        return kOk;
    } catch (const Error& e) {
        return diag.fail(e);
    }
}

}  // namespace vtrack::cli
