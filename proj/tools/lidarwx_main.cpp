// lidarwx: adverse-weather corruption, classical denoising, and evaluation
// for LiDAR scans. See README.md for the file formats and config keys.

#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "lidarwx/config.hpp"
#include "lidarwx/pipeline.hpp"
#include "lidarwx/rng.hpp"
#include "lidarwx/wavelet.hpp"

using namespace lidarwx;

namespace {

const std::set<std::string> kConfigKeys = {
    "weather.type",         "weather.level",         "weather.param",
    "filter.name",          "filter.k",              "filter.s",
    "filter.radius",        "filter.min_neighbors",  "filter.angular_res",
    "filter.multiplier",    "filter.radius_min",     "filter.range_multiplier",
    "wavelet.levels",       "wavelet.predict",       "wavelet.update",
    "wavelet.lambda1",      "wavelet.lambda2",
    "projection.res_x",     "projection.res_y",      "projection.res_z",
    "projection.bounds_lo", "projection.bounds_hi",
    "sensor.preset",        "sensor.r_max",          "sensor.tau_h",
    "sensor.f_s",           "sensor.f_o",            "sensor.i_max",
    "sensor.beam_divergence", "sensor.exit_diameter",
};

FrameManifest load_manifest(const std::string& manifest_path, const std::string& split,
                            const std::string& data_root) {
    if (!split.empty()) {
        if (data_root.empty()) {
            throw InvalidArgument("--split requires --data-root");
        }
        return manifest_from_split(data_root, builtin_split(split));
    }
    if (manifest_path.empty()) {
        throw InvalidArgument("either a manifest path or --split is required");
    }
    return read_manifest(manifest_path);
}

SensorModel sensor_from_config(const Config& cfg, const std::string& preset_flag) {
    std::string preset = preset_flag;
    if (preset.empty()) preset = cfg.get_or("sensor.preset", "hdl64-like");
    SensorModel sensor = sensor_preset(preset);
    if (auto v = cfg.get_double("sensor.r_max")) sensor.r_max = *v;
    if (auto v = cfg.get_double("sensor.tau_h")) sensor.tau_h = *v;
    if (auto v = cfg.get_double("sensor.f_s")) sensor.f_s = *v;
    if (auto v = cfg.get_double("sensor.f_o")) sensor.f_o = *v;
    if (auto v = cfg.get_double("sensor.i_max")) sensor.i_max = *v;
    if (auto v = cfg.get_double("sensor.beam_divergence")) sensor.beam_divergence = *v;
    if (auto v = cfg.get_double("sensor.exit_diameter")) sensor.exit_diameter = *v;
    return sensor;
}

int report_outcome(const CommandResult& result, const char* verb) {
    std::cout << verb << ": " << result.processed << " frame(s) processed";
    if (!result.ok()) std::cout << ", " << result.errors.size() << " failed";
    std::cout << '\n';
    for (const auto& err : result.errors) std::cerr << "error: " << err << '\n';
    return result.ok() ? 0 : 1;
}

int run_wavelet_selftest(std::size_t h, std::size_t v, long long levels_flag,
                         std::uint64_t seed) {
    Grid grid(h, v, 1);
    Rng rng(seed);
    for (auto& value : grid.data) value = rng.uniform(-10.0, 10.0);

    const std::size_t allowed = max_levels(h, v);
    std::size_t levels = allowed;
    if (levels_flag >= 0) {
        if (static_cast<std::size_t>(levels_flag) > allowed || levels_flag == 0) {
            std::cerr << "error: requested " << levels_flag << " level(s), but a " << h
                      << "x" << v << " grid supports 1.." << allowed << '\n';
            return 1;
        }
        levels = static_cast<std::size_t>(levels_flag);
    }
    if (levels == 0) {
        std::cerr << "error: grid too small for any decomposition (min dim < 8)\n";
        return 1;
    }

    const WaveletPyramid pyramid = wavelet_pyramid(grid, LiftingOperators{}, levels);
    const Grid back = wavelet_reconstruct(pyramid);
    double max_err = 0.0;
    for (std::size_t i = 0; i < grid.data.size(); ++i) {
        max_err = std::max(max_err, std::abs(grid.data[i] - back.data[i]));
    }
    std::printf("wavelet-selftest: %zux%zu grid, %zu level(s), max reconstruction error %.3e\n",
                h, v, levels, max_err);
    if (max_err >= 1e-9) {
        std::cerr << "error: reconstruction not exact\n";
        return 1;
    }
    std::cout << "wavelet-selftest: OK\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LiDAR adverse-weather simulation, denoising, and evaluation"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string layout_name = "kitti4";
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--layout", layout_name, "scan layout")
        ->check(CLI::IsMember({"kitti4", "nuscenes5"}));

    std::string manifest_path, split, data_root, out_dir, sensor_flag;

    auto* sim = app.add_subcommand("simulate", "corrupt scans with synthetic weather");
    std::string weather_flag = "snow", level_flag;
    double param_flag = -1.0;
    sim->add_option("manifest", manifest_path, "frame manifest file");
    sim->add_option("--split", split, "built-in split name");
    sim->add_option("--data-root", data_root, "dataset root for --split");
    sim->add_option("--weather", weather_flag, "weather type")
        ->check(CLI::IsMember({"snow", "fog", "rain"}));
    sim->add_option("--level", level_flag, "fixed severity level")
        ->check(CLI::IsMember({"light", "moderate", "heavy"}));
    sim->add_option("--param", param_flag,
                    "explicit rate (mm/h) or fog beta; overrides --level");
    sim->add_option("--sensor", sensor_flag, "sensor preset")
        ->check(CLI::IsMember({"hdl64-like", "vlp32-like"}));
    sim->add_option("--out", out_dir, "output directory")->required();

    auto* den = app.add_subcommand("denoise", "flag weather points with a classical filter");
    std::string filter_flag;
    bool write_clouds = false;
    den->add_option("manifest", manifest_path, "frame manifest file");
    den->add_option("--split", split, "built-in split name");
    den->add_option("--data-root", data_root, "dataset root for --split");
    den->add_option("--filter", filter_flag, "filter name")
        ->check(CLI::IsMember({"sor", "ror", "dror", "dsor"}));
    den->add_flag("--write-clouds", write_clouds, "also write the filtered clouds");
    den->add_option("--out", out_dir, "output directory")->required();

    auto* ev = app.add_subcommand("eval", "score predicted masks against ground truth");
    std::string pred_dir, gt_dir, csv_path;
    ev->add_option("pred", pred_dir, "directory of predicted .label files")->required();
    ev->add_option("gt", gt_dir, "directory of ground-truth .label files")->required();
    ev->add_option("--csv", csv_path, "also write the report as CSV");

    auto* st = app.add_subcommand("stats", "per-code point counts over a manifest");
    st->add_option("manifest", manifest_path, "frame manifest file");
    st->add_option("--split", split, "built-in split name");
    st->add_option("--data-root", data_root, "dataset root for --split");

    auto* wst = app.add_subcommand("wavelet-selftest",
                                   "verify lifting decomposition invertibility");
    std::size_t grid_h = 64, grid_v = 64;
    long long levels_flag = -1;
    wst->add_option("--height", grid_h, "grid height")->check(CLI::PositiveNumber);
    wst->add_option("--width", grid_v, "grid width")->check(CLI::PositiveNumber);
    wst->add_option("--levels", levels_flag, "decomposition levels (default: max)");

    auto* spl = app.add_subcommand("splits", "list built-in split names");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg;
        if (!config_path.empty()) {
            cfg = Config::parse_file(config_path);
            cfg.validate_keys(kConfigKeys);
        }
        const ScanLayout layout = parse_layout(layout_name);

        if (spl->parsed()) {
            for (const auto& name : builtin_split_names()) std::cout << name << '\n';
            return 0;
        }
        if (wst->parsed()) {
            return run_wavelet_selftest(grid_h, grid_v, levels_flag, seed);
        }
        if (ev->parsed()) {
            const EvalResult result = cmd_eval(pred_dir, gt_dir);
            std::cout << report_text(result.report);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path, std::ios::trunc);
                csv << report_csv(result.report);
            }
            return report_outcome(result.command, "eval");
        }

        const FrameManifest manifest = load_manifest(manifest_path, split, data_root);

        if (st->parsed()) {
            const StatsResult result = cmd_stats(manifest);
            for (const auto& [code, count] : result.counts_by_code) {
                std::cout << "code " << code << ": " << count << '\n';
            }
            std::cout << "total: " << result.total_points << '\n';
            return report_outcome(result.command, "stats");
        }
        if (sim->parsed()) {
            SimulateOptions opts;
            opts.weather = parse_weather(
                sim->count("--weather") ? weather_flag : cfg.get_or("weather.type", weather_flag));
            std::string level = level_flag;
            if (level.empty()) level = cfg.get_or("weather.level", "");
            if (!level.empty()) opts.level = parse_level(level);
            if (sim->count("--param")) {
                opts.param = param_flag;
            } else if (auto v = cfg.get_double("weather.param")) {
                opts.param = *v;
            }
            opts.sensor = sensor_from_config(cfg, sensor_flag);
            opts.layout = layout;
            opts.seed = seed;
            opts.threads = threads;
            opts.out_dir = out_dir;
            return report_outcome(cmd_simulate(manifest, opts), "simulate");
        }
        if (den->parsed()) {
            DenoiseOptions opts;
            opts.filter = filter_flag.empty() ? cfg.get_or("filter.name", "dsor") : filter_flag;
            if (auto v = cfg.get_int("filter.k")) {
                opts.sor.k = static_cast<std::size_t>(*v);
                opts.dsor.k = static_cast<std::size_t>(*v);
            }
            if (auto v = cfg.get_double("filter.s")) {
                opts.sor.s = *v;
                opts.dsor.s = *v;
            }
            if (auto v = cfg.get_double("filter.radius")) opts.ror.radius = *v;
            if (auto v = cfg.get_int("filter.min_neighbors")) {
                opts.ror.min_neighbors = static_cast<std::size_t>(*v);
                opts.dror.min_neighbors = static_cast<std::size_t>(*v);
            }
            if (auto v = cfg.get_double("filter.angular_res")) opts.dror.angular_res = *v;
            if (auto v = cfg.get_double("filter.multiplier")) opts.dror.multiplier = *v;
            if (auto v = cfg.get_double("filter.radius_min")) opts.dror.radius_min = *v;
            if (auto v = cfg.get_double("filter.range_multiplier")) {
                opts.dsor.range_multiplier = *v;
            }
            opts.layout = layout;
            opts.write_clouds = write_clouds;
            opts.threads = threads;
            opts.out_dir = out_dir;
            return report_outcome(cmd_denoise(manifest, opts), "denoise");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
