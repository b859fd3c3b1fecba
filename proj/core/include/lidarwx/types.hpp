#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lidarwx {

/// Weather label codes shared across the whole pipeline.
inline constexpr std::uint16_t kSnowCode = 110;
inline constexpr std::uint16_t kFogCode = 111;
inline constexpr std::uint16_t kRainCode = 112;

/// Columnar LiDAR frame. All per-point arrays have identical length.
/// Coordinates are meters relative to the sensor, intensity stays in raw
/// file units, range is the Euclidean distance to the sensor center.
struct PointCloud {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
    std::vector<double> intensity;
    std::vector<double> range;
    /// Ring index from nuscenes5 files; empty for kitti4. Preserved on
    /// round-trip, ignored by algorithms.
    std::vector<double> ring;

    std::size_t size() const { return x.size(); }
    bool empty() const { return x.empty(); }

    void resize(std::size_t n) {
        x.resize(n);
        y.resize(n);
        z.resize(n);
        intensity.resize(n);
        range.resize(n);
    }
};

/// Per-point semantic codes and instance ids (SemanticKITTI 32-bit split:
/// low 16 bits code, high 16 bits instance).
struct LabelSet {
    std::vector<std::uint16_t> codes;
    std::vector<std::uint16_t> instance;

    std::size_t size() const { return codes.size(); }

    void resize(std::size_t n) {
        codes.resize(n, 0);
        instance.resize(n, 0);
    }
};

/// Per-point boolean mask, true = noise.
using BinaryMask = std::vector<bool>;

struct FrameRef {
    std::string sequence;
    std::string frame;
    std::string scan_path;
    std::string label_path;
};

/// Plain-text manifest: one "sequence/frame scan_path label_path" per line.
using FrameManifest = std::vector<FrameRef>;

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

}  // namespace lidarwx
