#include "lidarwx/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lidarwx {

ScanLayout parse_layout(const std::string& name) {
    if (name == "kitti4") return ScanLayout::kitti4;
    if (name == "nuscenes5") return ScanLayout::nuscenes5;
    throw InvalidArgument("unknown scan layout: " + name);
}

std::size_t layout_stride(ScanLayout layout) {
    return layout == ScanLayout::kitti4 ? 16 : 20;
}

namespace {

std::vector<char> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<char> bytes(static_cast<std::size_t>(size));
    if (size > 0 && !in.read(bytes.data(), size)) throw IoError("read failed: " + path);
    return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (!bytes.empty()) out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

float load_f32(const char* p) {
    float v;
    std::memcpy(&v, p, 4);
    return v;
}

void store_f32(char* p, float v) { std::memcpy(p, &v, 4); }

}  // namespace

PointCloud read_point_cloud(const std::string& path, ScanLayout layout) {
    const auto bytes = read_file_bytes(path);
    const std::size_t stride = layout_stride(layout);
    if (bytes.size() % stride != 0) {
        std::ostringstream msg;
        msg << path << ": size " << bytes.size() << " bytes is not a multiple of the "
            << stride << "-byte point stride";
        throw IoError(msg.str());
    }
    const std::size_t n = bytes.size() / stride;
    PointCloud pc;
    pc.resize(n);
    if (layout == ScanLayout::nuscenes5) pc.ring.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const char* p = bytes.data() + i * stride;
        pc.x[i] = load_f32(p);
        pc.y[i] = load_f32(p + 4);
        pc.z[i] = load_f32(p + 8);
        pc.intensity[i] = load_f32(p + 12);
        if (layout == ScanLayout::nuscenes5) pc.ring[i] = load_f32(p + 16);
    }
    return compute_ranges(std::move(pc));
}

void write_point_cloud(const PointCloud& pc, const std::string& path, ScanLayout layout) {
    const std::size_t stride = layout_stride(layout);
    const std::size_t n = pc.size();
    std::vector<char> bytes(n * stride);
    for (std::size_t i = 0; i < n; ++i) {
        char* p = bytes.data() + i * stride;
        store_f32(p, static_cast<float>(pc.x[i]));
        store_f32(p + 4, static_cast<float>(pc.y[i]));
        store_f32(p + 8, static_cast<float>(pc.z[i]));
        store_f32(p + 12, static_cast<float>(pc.intensity[i]));
        if (layout == ScanLayout::nuscenes5) {
            const float ring = i < pc.ring.size() ? static_cast<float>(pc.ring[i]) : 0.0f;
            store_f32(p + 16, ring);
        }
    }
    write_file_bytes(path, bytes);
}

LabelSet read_labels(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    if (bytes.size() % 4 != 0) {
        std::ostringstream msg;
        msg << path << ": size " << bytes.size() << " bytes is not a multiple of 4";
        throw IoError(msg.str());
    }
    const std::size_t n = bytes.size() / 4;
    LabelSet labels;
    labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t word;
        std::memcpy(&word, bytes.data() + i * 4, 4);
        labels.codes[i] = static_cast<std::uint16_t>(word & 0xFFFFu);
        labels.instance[i] = static_cast<std::uint16_t>(word >> 16);
    }
    return labels;
}

void write_labels(const LabelSet& labels, const std::string& path) {
    const std::size_t n = labels.size();
    std::vector<char> bytes(n * 4);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t word =
            static_cast<std::uint32_t>(labels.codes[i]) |
            (static_cast<std::uint32_t>(labels.instance[i]) << 16);
        std::memcpy(bytes.data() + i * 4, &word, 4);
    }
    write_file_bytes(path, bytes);
}

PointCloud compute_ranges(PointCloud pc) {
    const std::size_t n = pc.size();
    pc.range.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pc.range[i] = std::sqrt(pc.x[i] * pc.x[i] + pc.y[i] * pc.y[i] + pc.z[i] * pc.z[i]);
    }
    return pc;
}

BinaryMask to_noise_mask(const LabelSet& labels, const std::set<std::uint16_t>& noise_codes) {
    BinaryMask mask(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        mask[i] = noise_codes.count(labels.codes[i]) > 0;
    }
    return mask;
}

FrameManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path);
    FrameManifest manifest;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key, scan, label;
        if (!(ss >> key >> scan >> label)) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected 'sequence/frame scan_path label_path'";
            throw IoError(msg.str());
        }
        const auto slash = key.find('/');
        if (slash == std::string::npos) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": frame key '" << key << "' lacks 'sequence/frame'";
            throw IoError(msg.str());
        }
        manifest.push_back({key.substr(0, slash), key.substr(slash + 1), scan, label});
    }
    return manifest;
}

void write_manifest(const FrameManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (const auto& f : manifest) {
        out << f.sequence << '/' << f.frame << ' ' << f.scan_path << ' ' << f.label_path << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace lidarwx
