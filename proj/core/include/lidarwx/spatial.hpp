#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lidarwx/types.hpp"

namespace lidarwx {

/// Exact nearest-neighbor queries over a fixed 3D cloud. Immutable after
/// construction; concurrent read queries are safe. k-NN ties are broken by
/// ascending point id so results are reproducible across platforms.
class SpatialIndex {
  public:
    explicit SpatialIndex(const PointCloud& pc);

    std::size_t size() const { return n_; }

    /// Exactly k results, ascending (distance, id). Self is included at
    /// distance 0 when the query id indexes the same cloud.
    std::vector<std::pair<std::size_t, double>> knn(std::size_t query_id, std::size_t k) const;

    /// Count of points with distance <= r, excluding the query point itself.
    std::size_t radius_count(std::size_t query_id, double r) const;

    /// Same queries against an arbitrary position (used internally and by
    /// tests); self-exclusion is by id, pass npos to keep every point.
    std::vector<std::pair<std::size_t, double>> knn_at(double qx, double qy, double qz,
                                                       std::size_t k) const;
    std::size_t radius_count_at(double qx, double qy, double qz, double r,
                                std::size_t exclude_id) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  private:
    struct Node {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t begin = 0;  // leaf payload range in ids_
        std::int32_t end = 0;
        double split = 0.0;
        std::int8_t axis = -1;  // -1 marks a leaf
    };

    std::int32_t build(std::int32_t begin, std::int32_t end);

    std::size_t n_ = 0;
    std::vector<double> px_, py_, pz_;
    std::vector<std::uint32_t> ids_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

/// Mean-per-voxel downsampling. Voxel keys are floor(coord / voxel_size)
/// anchored at the origin. Output label is the majority code among members
/// (ties -> smallest code); range is recomputed from the mean position.
/// mapping[i] gives the output id of source point i. Output voxels appear
/// in first-member order, so results are deterministic.
struct DownsampleResult {
    PointCloud cloud;
    LabelSet labels;
    std::vector<std::size_t> mapping;
};

DownsampleResult voxel_downsample(const PointCloud& pc, const LabelSet& labels,
                                  double voxel_size);

/// Per center i and neighbor k: [p_i (5) | p_i^k (5) | p_i - p_i^k (5)]
/// with feature order (x, y, z, intensity, range). values is laid out
/// [center][neighbor][15].
struct NeighborFeatures {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> values;
    std::vector<std::size_t> neighbor_ids;  // n * k

    double at(std::size_t i, std::size_t neighbor, std::size_t feature) const {
        return values[(i * k + neighbor) * 15 + feature];
    }
};

NeighborFeatures assemble_neighbor_features(const PointCloud& pc, const SpatialIndex& index,
                                            std::size_t k);

}  // namespace lidarwx
