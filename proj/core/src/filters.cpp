#include "lidarwx/filters.hpp"

#include <cmath>

namespace lidarwx {
namespace filters {

namespace {

/// Mean distance to the k nearest neighbors of each point, self excluded.
std::vector<double> mean_knn_distances(const PointCloud& pc, const SpatialIndex& index,
                                       std::size_t k) {
    require(k >= 1 && k < pc.size(), "k out of range (need k < n)");
    const std::size_t n = pc.size();
    std::vector<double> mean_dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto neighbors = index.knn(i, k + 1);
        double sum = 0.0;
        std::size_t used = 0;
        for (const auto& [id, dist] : neighbors) {
            if (id == i) continue;
            if (used == k) break;
            sum += dist;
            ++used;
        }
        mean_dist[i] = sum / static_cast<double>(k);
    }
    return mean_dist;
}

struct MeanStd {
    double mean;
    double stddev;
};

MeanStd mean_std(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return {mean, std::sqrt(var)};
}

}  // namespace

BinaryMask sor_filter(const PointCloud& pc, const SpatialIndex& index, std::size_t k, double s) {
    require(s >= 0.0, "sor_filter: s must be non-negative");
    const auto mean_dist = mean_knn_distances(pc, index, k);
    const auto [mu, sigma] = mean_std(mean_dist);
    const double threshold = mu + s * sigma;
    BinaryMask mask(pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) mask[i] = mean_dist[i] > threshold;
    return mask;
}

BinaryMask ror_filter(const PointCloud& pc, const SpatialIndex& index, double radius,
                      std::size_t min_neighbors) {
    require(radius > 0.0, "ror_filter: radius must be positive");
    require(min_neighbors >= 1, "ror_filter: min_neighbors must be >= 1");
    BinaryMask mask(pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) {
        mask[i] = index.radius_count(i, radius) < min_neighbors;
    }
    return mask;
}

BinaryMask dror_filter(const PointCloud& pc, const SpatialIndex& index, double angular_res,
                       double multiplier, double radius_min, std::size_t min_neighbors) {
    require(angular_res > 0.0 && multiplier > 0.0 && radius_min > 0.0,
            "dror_filter: parameters must be positive");
    require(min_neighbors >= 1, "dror_filter: min_neighbors must be >= 1");
    BinaryMask mask(pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) {
        const double rho = std::sqrt(pc.x[i] * pc.x[i] + pc.y[i] * pc.y[i]);
        const double radius = std::max(radius_min, multiplier * rho * angular_res);
        mask[i] = index.radius_count(i, radius) < min_neighbors;
    }
    return mask;
}

BinaryMask dsor_filter(const PointCloud& pc, const SpatialIndex& index, std::size_t k, double s,
                       double range_multiplier) {
    require(range_multiplier > 0.0, "dsor_filter: range_multiplier must be positive");
    const auto mean_dist = mean_knn_distances(pc, index, k);
    const auto [mu, sigma] = mean_std(mean_dist);
    const double global_threshold = mu + s * sigma;
    BinaryMask mask(pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) {
        const double threshold = global_threshold * range_multiplier * pc.range[i];
        mask[i] = mean_dist[i] > threshold;
    }
    return mask;
}

}  // namespace filters

std::pair<PointCloud, LabelSet> apply_mask(const PointCloud& pc, const LabelSet& labels,
                                           const BinaryMask& mask) {
    require(pc.size() == labels.size() && pc.size() == mask.size(),
            "apply_mask: length mismatch");
    PointCloud out_pc;
    LabelSet out_labels;
    const bool has_ring = !pc.ring.empty();
    for (std::size_t i = 0; i < pc.size(); ++i) {
        if (mask[i]) continue;
        out_pc.x.push_back(pc.x[i]);
        out_pc.y.push_back(pc.y[i]);
        out_pc.z.push_back(pc.z[i]);
        out_pc.intensity.push_back(pc.intensity[i]);
        out_pc.range.push_back(pc.range[i]);
        if (has_ring) out_pc.ring.push_back(pc.ring[i]);
        out_labels.codes.push_back(labels.codes[i]);
        out_labels.instance.push_back(labels.instance[i]);
    }
    return {std::move(out_pc), std::move(out_labels)};
}

}  // namespace lidarwx
