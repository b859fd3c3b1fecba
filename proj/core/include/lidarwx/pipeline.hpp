#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lidarwx/eval.hpp"
#include "lidarwx/filters.hpp"
#include "lidarwx/io.hpp"
#include "lidarwx/weather.hpp"

namespace lidarwx {

/// Per-frame failures are reported and skipped; a command "fails" (nonzero
/// exit) iff at least one frame failed, with partial progress preserved.
struct CommandResult {
    std::size_t processed = 0;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

struct SimulateOptions {
    WeatherType weather = WeatherType::snow;
    /// Fixed severity level; absent -> drawn uniformly per frame.
    std::optional<SeverityLevel> level;
    /// Explicit parameter value; overrides level sampling entirely.
    std::optional<double> param;
    SensorModel sensor;
    ScanLayout layout = ScanLayout::kitti4;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out_dir;
};

/// Writes corrupted scans + labels under out_dir/<sequence>/<frame>.{bin,label}
/// and a "sidecar.txt" logging (frame, level, drawn parameter, stream seed,
/// relocated count), sorted by frame key for thread-count independence.
CommandResult cmd_simulate(const FrameManifest& manifest, const SimulateOptions& options);

struct DenoiseOptions {
    std::string filter = "dsor";  // sor | ror | dror | dsor
    filters::SorParams sor;
    filters::RorParams ror;
    filters::DrorParams dror;
    filters::DsorParams dsor;
    ScanLayout layout = ScanLayout::kitti4;
    bool write_clouds = false;
    unsigned threads = 1;
    std::string out_dir;
};

/// Writes each mask as a label file (code 110 for flagged points, 0
/// otherwise) and, optionally, the filtered cloud.
CommandResult cmd_denoise(const FrameManifest& manifest, const DenoiseOptions& options);

struct EvalResult {
    CommandResult command;
    MetricsReport report;
};

/// Compares *.label files under pred_dir against the same relative paths
/// under gt_dir. A point counts as noise when its code is in {110,111,112}.
EvalResult cmd_eval(const std::string& pred_dir, const std::string& gt_dir);

struct StatsResult {
    CommandResult command;
    std::map<std::uint16_t, std::uint64_t> counts_by_code;
    std::uint64_t total_points = 0;
};

StatsResult cmd_stats(const FrameManifest& manifest);

/// Named sequence lists for the published dataset splits, e.g.
/// "wads-train" or "weather-kitti-snow-test".
const std::vector<std::string>& builtin_split(const std::string& name);
std::vector<std::string> builtin_split_names();

/// Builds a manifest for root/<sequence>/velodyne/*.bin with labels at
/// root/<sequence>/labels/*.label.
FrameManifest manifest_from_split(const std::string& data_root,
                                  const std::vector<std::string>& sequences);

/// Runs fn(i) for i in [0, count) on `threads` workers; returns per-item
/// error strings (empty string = success).
std::vector<std::string> run_parallel(std::size_t count, unsigned threads,
                                      const std::function<void(std::size_t)>& fn);

}  // namespace lidarwx
