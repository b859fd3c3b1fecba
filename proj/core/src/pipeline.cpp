#include "lidarwx/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "lidarwx/rng.hpp"

namespace fs = std::filesystem;

namespace lidarwx {

std::vector<std::string> run_parallel(std::size_t count, unsigned threads,
                                      const std::function<void(std::size_t)>& fn) {
    std::vector<std::string> errors(count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
        return errors;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return errors;
}

namespace {

std::string frame_key(const FrameRef& f) { return f.sequence + "/" + f.frame; }

void collect_errors(CommandResult& result, const FrameManifest& manifest,
                    const std::vector<std::string>& per_item) {
    for (std::size_t i = 0; i < per_item.size(); ++i) {
        if (per_item[i].empty()) {
            ++result.processed;
        } else {
            result.errors.push_back(frame_key(manifest[i]) + ": " + per_item[i]);
        }
    }
}

std::string scan_extension(ScanLayout) { return ".bin"; }

}  // namespace

CommandResult cmd_simulate(const FrameManifest& manifest, const SimulateOptions& options) {
    CommandResult result;
    fs::create_directories(options.out_dir);

    struct SidecarLine {
        std::string key;
        std::string text;
    };
    std::vector<SidecarLine> sidecar(manifest.size());

    const auto per_item = run_parallel(
        manifest.size(), options.threads, [&](std::size_t i) {
            const FrameRef& frame = manifest[i];
            const std::uint64_t stream =
                derive_stream_seed(options.seed, frame.sequence, frame.frame);
            Rng rng(stream);

            SeverityLevel level = SeverityLevel::light;
            std::string level_text;
            double param = 0.0;
            if (options.param) {
                param = *options.param;
                level_text = "fixed";
            } else {
                level = options.level
                            ? *options.level
                            : static_cast<SeverityLevel>(rng.next_u64() % 3);
                level_text = level_name(level);
                const auto [lo, hi] = severity_interval(options.weather, level);
                param = rng.uniform(lo, hi);
            }

            const PointCloud pc = read_point_cloud(frame.scan_path, options.layout);
            LabelSet labels;
            if (fs::exists(frame.label_path)) {
                labels = read_labels(frame.label_path);
                require(labels.size() == pc.size(),
                        "label count does not match point count");
            } else {
                labels.resize(pc.size());
            }

            SimResult sim;
            switch (options.weather) {
                case WeatherType::snow:
                    sim = simulate_snow(pc, labels, SnowParams{param}, options.sensor, rng);
                    break;
                case WeatherType::fog:
                    sim = simulate_fog(pc, labels, fog_params_from_beta(param),
                                       options.sensor, rng);
                    break;
                case WeatherType::rain: {
                    RainParams rp;
                    rp.rate_mm_h = param;
                    sim = simulate_rain(pc, labels, rp, options.sensor, rng);
                    break;
                }
            }

            const fs::path seq_dir = fs::path(options.out_dir) / frame.sequence;
            fs::create_directories(seq_dir);
            const std::string stem = frame.frame;
            write_point_cloud(sim.cloud, (seq_dir / (stem + scan_extension(options.layout))).string(),
                              options.layout);
            write_labels(sim.labels, (seq_dir / (stem + ".label")).string());

            std::ostringstream line;
            line << frame_key(frame) << ' ' << weather_name(options.weather) << ' '
                 << level_text << " param=" << param << " seed=" << stream
                 << " relocated=" << sim.relocated;
            sidecar[i] = {frame_key(frame), line.str()};
        });
    collect_errors(result, manifest, per_item);

    std::sort(sidecar.begin(), sidecar.end(),
              [](const SidecarLine& a, const SidecarLine& b) { return a.key < b.key; });
    std::ofstream out(fs::path(options.out_dir) / "sidecar.txt", std::ios::trunc);
    for (const auto& line : sidecar) {
        if (!line.text.empty()) out << line.text << '\n';
    }
    return result;
}

CommandResult cmd_denoise(const FrameManifest& manifest, const DenoiseOptions& options) {
    CommandResult result;
    fs::create_directories(options.out_dir);

    const auto per_item = run_parallel(
        manifest.size(), options.threads, [&](std::size_t i) {
            const FrameRef& frame = manifest[i];
            const PointCloud pc = read_point_cloud(frame.scan_path, options.layout);
            if (pc.empty()) throw IoError("empty scan");
            const SpatialIndex index(pc);

            BinaryMask mask;
            if (options.filter == "sor") {
                mask = filters::sor_filter(pc, index, options.sor.k, options.sor.s);
            } else if (options.filter == "ror") {
                mask = filters::ror_filter(pc, index, options.ror.radius,
                                           options.ror.min_neighbors);
            } else if (options.filter == "dror") {
                mask = filters::dror_filter(pc, index, options.dror.angular_res,
                                            options.dror.multiplier, options.dror.radius_min,
                                            options.dror.min_neighbors);
            } else if (options.filter == "dsor") {
                mask = filters::dsor_filter(pc, index, options.dsor.k, options.dsor.s,
                                            options.dsor.range_multiplier);
            } else {
                throw InvalidArgument("unknown filter: " + options.filter);
            }

            LabelSet mask_labels;
            mask_labels.resize(mask.size());
            for (std::size_t j = 0; j < mask.size(); ++j) {
                mask_labels.codes[j] = mask[j] ? kSnowCode : 0;
            }

            const fs::path seq_dir = fs::path(options.out_dir) / frame.sequence;
            fs::create_directories(seq_dir);
            write_labels(mask_labels, (seq_dir / (frame.frame + ".label")).string());
            if (options.write_clouds) {
                LabelSet labels;
                if (fs::exists(frame.label_path)) {
                    labels = read_labels(frame.label_path);
                } else {
                    labels.resize(pc.size());
                }
                const auto [clean_pc, clean_labels] = apply_mask(pc, labels, mask);
                write_point_cloud(clean_pc,
                                  (seq_dir / (frame.frame + scan_extension(options.layout))).string(),
                                  options.layout);
                write_labels(clean_labels,
                             (seq_dir / (frame.frame + ".clean.label")).string());
            }
        });
    collect_errors(result, manifest, per_item);
    return result;
}

EvalResult cmd_eval(const std::string& pred_dir, const std::string& gt_dir) {
    EvalResult result;

    std::vector<fs::path> gt_files;
    for (const auto& entry : fs::recursive_directory_iterator(gt_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".label") {
            gt_files.push_back(fs::relative(entry.path(), gt_dir));
        }
    }
    std::sort(gt_files.begin(), gt_files.end());
    if (gt_files.empty()) {
        result.command.errors.push_back("no .label files under " + gt_dir);
        return result;
    }

    std::vector<std::string> missing;
    std::vector<MetricsEntry> entries;
    for (const auto& rel : gt_files) {
        const fs::path pred_path = fs::path(pred_dir) / rel;
        if (!fs::exists(pred_path)) {
            missing.push_back(rel.string());
            continue;
        }
        try {
            const LabelSet gt = read_labels((fs::path(gt_dir) / rel).string());
            const LabelSet pred = read_labels(pred_path.string());
            require(gt.size() == pred.size(), "prediction/ground-truth length mismatch");
            const ConfusionCounts counts = confusion(to_noise_mask(pred), to_noise_mask(gt));
            entries.push_back(metrics(counts, rel.string()));
            ++result.command.processed;
        } catch (const std::exception& e) {
            result.command.errors.push_back(rel.string() + ": " + e.what());
        }
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "missing prediction frames:";
        for (const auto& m : missing) msg << ' ' << m;
        result.command.errors.push_back(msg.str());
    }
    if (!entries.empty()) result.report = aggregate(entries);
    return result;
}

StatsResult cmd_stats(const FrameManifest& manifest) {
    StatsResult result;
    std::mutex merge_mutex;

    const auto per_item = run_parallel(manifest.size(), 1, [&](std::size_t i) {
        const LabelSet labels = read_labels(manifest[i].label_path);
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (const auto code : labels.codes) result.counts_by_code[code]++;
        result.total_points += labels.size();
    });
    collect_errors(result.command, manifest, per_item);
    return result;
}

namespace {

const std::map<std::string, std::vector<std::string>>& split_table() {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"wads-train", {"14", "15", "18", "20", "24", "28", "34", "36", "37"}},
        {"wads-val", {"11", "16"}},
        {"wads-test", {"12", "13", "17", "22", "23", "26", "30", "35", "76"}},
        {"weather-kitti-snow-train", {"00", "02", "08", "17", "19"}},
        {"weather-kitti-snow-val", {"04", "11", "12", "16"}},
        {"weather-kitti-snow-test",
         {"01", "03", "05", "06", "07", "09", "10", "13", "14", "15", "18", "20", "21"}},
        {"weather-kitti-fog-train", {"02", "03", "04", "16", "17", "18", "19", "20"}},
        {"weather-kitti-fog-val", {"06", "07", "09", "11"}},
        {"weather-kitti-fog-test",
         {"00", "01", "05", "08", "10", "12", "13", "14", "15", "21"}},
        {"weather-kitti-rain-train",
         {"01", "02", "03", "04", "06", "12", "16", "17", "21"}},
        {"weather-kitti-rain-val", {"09", "19"}},
        {"weather-kitti-rain-test",
         {"00", "05", "07", "08", "10", "13", "14", "15", "18", "20"}},
        {"weather-nuscenes-snow-train", {"01", "02", "07", "08"}},
        {"weather-nuscenes-snow-val", {"04"}},
        {"weather-nuscenes-snow-test", {"00", "03", "05", "06", "09"}},
        {"weather-nuscenes-fog-train", {"01", "02", "03", "07"}},
        {"weather-nuscenes-fog-val", {"04"}},
        {"weather-nuscenes-fog-test", {"00", "05", "06", "08", "09"}},
        {"weather-nuscenes-rain-train", {"04", "05", "07", "09"}},
        {"weather-nuscenes-rain-val", {"08"}},
        {"weather-nuscenes-rain-test", {"00", "01", "02", "03", "06"}},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& builtin_split(const std::string& name) {
    const auto& table = split_table();
    const auto it = table.find(name);
    if (it == table.end()) throw InvalidArgument("unknown split: " + name);
    return it->second;
}

std::vector<std::string> builtin_split_names() {
    std::vector<std::string> names;
    for (const auto& [name, sequences] : split_table()) names.push_back(name);
    return names;
}

FrameManifest manifest_from_split(const std::string& data_root,
                                  const std::vector<std::string>& sequences) {
    FrameManifest manifest;
    for (const auto& sequence : sequences) {
        const fs::path scan_dir = fs::path(data_root) / sequence / "velodyne";
        const fs::path label_dir = fs::path(data_root) / sequence / "labels";
        if (!fs::is_directory(scan_dir)) {
            throw IoError("missing scan directory " + scan_dir.string());
        }
        std::vector<fs::path> scans;
        for (const auto& entry : fs::directory_iterator(scan_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".bin") {
                scans.push_back(entry.path());
            }
        }
        std::sort(scans.begin(), scans.end());
        for (const auto& scan : scans) {
            const std::string stem = scan.stem().string();
            manifest.push_back({sequence, stem, scan.string(),
                                (label_dir / (stem + ".label")).string()});
        }
    }
    return manifest;
}

}  // namespace lidarwx
