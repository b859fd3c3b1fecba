#pragma once

#include <array>
#include <optional>

#include "lidarwx/grid.hpp"
#include "lidarwx/types.hpp"

namespace lidarwx {

enum class Plane { YZ, XZ, XY };

/// Metric extents used for pixel quantization. When not given explicitly,
/// per-frame axis-aligned bounds expanded by 1% are used and every point is
/// in bounds; explicit bounds exclude outside points from the grids.
struct ProjectionBounds {
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{0, 0, 0};
    bool explicit_bounds = false;
};

ProjectionBounds frame_bounds(const PointCloud& pc, double expand_fraction = 0.01);

/// Mean-binned 2D quantization of per-point features. grid holds the
/// arithmetic mean of the features mapped to each pixel; empty pixels hold
/// exactly zero. pixel_of_point is -1 for out-of-bounds points.
struct PlaneProjection {
    Plane plane = Plane::XY;
    Grid grid;
    std::vector<std::int64_t> pixel_of_point;
    std::vector<std::size_t> counts;
};

/// Per-point features as an n x channels row-major matrix.
struct FeatureMatrix {
    std::size_t n = 0;
    std::size_t channels = 0;
    std::vector<double> values;

    double& at(std::size_t i, std::size_t ch) { return values[i * channels + ch]; }
    double at(std::size_t i, std::size_t ch) const { return values[i * channels + ch]; }
};

/// Projections along the X, Y and Z axes onto the YZ, XZ and XY planes.
/// resolutions = (rx, ry, rz): the YZ plane is (ry, rz), XZ is (rx, rz),
/// XY is (rx, ry).
std::array<PlaneProjection, 3> project_triple_planes(const PointCloud& pc,
                                                     const FeatureMatrix& features,
                                                     std::array<std::size_t, 3> resolutions,
                                                     const ProjectionBounds& bounds);

/// Each point receives its pixel's current grid value; out-of-bounds points
/// receive zeros.
FeatureMatrix gather_back(const PlaneProjection& plane);

}  // namespace lidarwx
