#pragma once

#include <set>
#include <string>

#include "lidarwx/types.hpp"

namespace lidarwx {

enum class ScanLayout { kitti4, nuscenes5 };

ScanLayout parse_layout(const std::string& name);
std::size_t layout_stride(ScanLayout layout);

/// Reads a binary scan file (little-endian float32, stride 16 or 20 bytes
/// per point). Ranges are computed from the coordinates.
PointCloud read_point_cloud(const std::string& path, ScanLayout layout);

/// Writes a scan bit-exactly in the given layout. For nuscenes5 a missing
/// ring column is written as zeros.
void write_point_cloud(const PointCloud& pc, const std::string& path, ScanLayout layout);

/// Label files: one little-endian uint32 per point, low 16 bits semantic
/// code, high 16 bits instance id.
LabelSet read_labels(const std::string& path);
void write_labels(const LabelSet& labels, const std::string& path);

/// Fills range[i] with the Euclidean norm of (x, y, z)[i].
PointCloud compute_ranges(PointCloud pc);

/// flags[i] = codes[i] is in noise_codes. Default set is {110, 111, 112}.
BinaryMask to_noise_mask(const LabelSet& labels,
                         const std::set<std::uint16_t>& noise_codes = {kSnowCode, kFogCode,
                                                                       kRainCode});

FrameManifest read_manifest(const std::string& path);
void write_manifest(const FrameManifest& manifest, const std::string& path);

}  // namespace lidarwx
