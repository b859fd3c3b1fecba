#pragma once

#include "lidarwx/spatial.hpp"
#include "lidarwx/types.hpp"

namespace lidarwx {

/// Classical statistical denoising filters. Each returns a mask with
/// true = flagged as noise. A point never counts as its own neighbor.
namespace filters {

struct SorParams {
    std::size_t k = 10;
    double s = 1.0;
};
struct RorParams {
    double radius = 0.5;
    std::size_t min_neighbors = 3;
};
struct DrorParams {
    double angular_res = 0.0035;
    double multiplier = 3.0;
    double radius_min = 0.04;
    std::size_t min_neighbors = 3;
};
struct DsorParams {
    std::size_t k = 10;
    double s = 0.01;
    double range_multiplier = 0.05;
};

/// mean k-NN distance per point; global threshold T = mu + s * sigma;
/// flagged when the mean distance strictly exceeds T.
BinaryMask sor_filter(const PointCloud& pc, const SpatialIndex& index, std::size_t k, double s);

/// flagged when fewer than min_neighbors points lie within radius.
BinaryMask ror_filter(const PointCloud& pc, const SpatialIndex& index, double radius,
                      std::size_t min_neighbors);

/// ROR with per-point radius max(radius_min, multiplier * rho * angular_res)
/// where rho is the horizontal range sqrt(x^2 + y^2).
BinaryMask dror_filter(const PointCloud& pc, const SpatialIndex& index, double angular_res,
                       double multiplier, double radius_min, std::size_t min_neighbors);

/// SOR with the global threshold scaled per point by
/// range_multiplier * range[i].
BinaryMask dsor_filter(const PointCloud& pc, const SpatialIndex& index, std::size_t k, double s,
                       double range_multiplier);

}  // namespace filters

/// Retains exactly the points with mask = false, order preserved.
std::pair<PointCloud, LabelSet> apply_mask(const PointCloud& pc, const LabelSet& labels,
                                           const BinaryMask& mask);

}  // namespace lidarwx
