#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace vtrack::cli;
    namespace fs = std::filesystem;

    CLI::App app{"vtrack: particle-filter vessel tracking on probability maps"};
    app.require_subcommand(1);

    Common opts;
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "Run-config JSON");
        sub->add_option("--seed", seed, "Master seed (overrides the config)");
        sub->add_option("--out", out, "Output directory");
        sub->add_flag("--quiet", opts.quiet, "Only print warnings and errors");
    };

    std::optional<std::string> spec_path;
    bool emit_seeds = false;
    auto* phantom = app.add_subcommand("phantom", "Render probability maps and ground truth from a phantom spec");
    phantom->add_option("spec", spec_path, "Phantom spec JSON");
    phantom->add_flag("--emit-seeds", emit_seeds, "Also write seeds.csv derived from the ground truth");
    add_common(phantom);

    std::string maps_dir, seeds_path;
    auto* track = app.add_subcommand("track", "Track every seeded segment through a map triple");
    track->add_option("maps", maps_dir, "Directory with interior.vmap, centerline.vmap, edge.vmap")->required();
    track->add_option("seeds", seeds_path, "Seeds CSV")->required();
    add_common(track);

    std::string tracks_dir, truth_path;
    auto* eval = app.add_subcommand("eval", "Per-segment precision/accuracy against ground truth");
    eval->add_option("tracks", tracks_dir, "Directory of track_<id>.json files")->required();
    eval->add_option("truth", truth_path, "Ground-truth CSV")->required();
    add_common(eval);

    auto* plot = app.add_subcommand("plot", "Box plot and width overlays as SVG");
    plot->add_option("tracks", tracks_dir, "Directory of track_<id>.json files")->required();
    plot->add_option("truth", truth_path, "Ground-truth CSV")->required();
    add_common(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidation;
    }

    if (config) opts.config = fs::path(*config);
    opts.seed = seed;
    opts.out = out;

    if (phantom->parsed()) {
        std::optional<fs::path> spec;
        if (spec_path) spec = fs::path(*spec_path);
        return cmd_phantom(spec, emit_seeds, opts, std::cerr);
    }
    if (track->parsed()) return cmd_track(maps_dir, seeds_path, opts, std::cerr);
    if (eval->parsed()) return cmd_eval(tracks_dir, truth_path, opts, std::cerr);
    return cmd_plot(tracks_dir, truth_path, opts, std::cerr);
}
