#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace vtrack::cli {

enum ExitCode : int {
    kOk = 0,
    kDegenerate = 1,
    kValidation = 2,
    kIo = 3,
};

struct Common {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out = ".";
    bool quiet = false;
};

/// Diagnostics go to `diag`; informational lines are dropped when quiet.
int cmd_phantom(const std::optional<std::filesystem::path>& spec_path, bool emit_seeds, const Common& opts,
                std::ostream& diag);

int cmd_track(const std::filesystem::path& maps_dir, const std::filesystem::path& seeds_path, const Common& opts,
              std::ostream& diag);

int cmd_eval(const std::filesystem::path& tracks_dir, const std::filesystem::path& truth_path, const Common& opts,
             std::ostream& diag);

int cmd_plot(const std::filesystem::path& tracks_dir, const std::filesystem::path& truth_path, const Common& opts,
             std::ostream& diag);

}  // namespace vtrack::cli
