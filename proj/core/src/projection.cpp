#include "lidarwx/projection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace lidarwx {

ProjectionBounds frame_bounds(const PointCloud& pc, double expand_fraction) {
    require(!pc.empty(), "frame_bounds: empty cloud");
    ProjectionBounds b;
    const std::vector<double>* coords[3] = {&pc.x, &pc.y, &pc.z};
    for (int a = 0; a < 3; ++a) {
        const auto [lo, hi] = std::minmax_element(coords[a]->begin(), coords[a]->end());
        double span = *hi - *lo;
        if (span <= 0.0) span = 1.0;  // degenerate axis: give it unit width
        b.lo[a] = *lo - expand_fraction * span;
        b.hi[a] = *hi + expand_fraction * span;
    }
    b.explicit_bounds = false;
    return b;
}

namespace {

struct AxisSpec {
    int u_axis;  // coordinate index for the first grid dimension
    int v_axis;  // coordinate index for the second grid dimension
    Plane plane;
};

PlaneProjection project_one(const PointCloud& pc, const FeatureMatrix& features,
                            const AxisSpec& spec, std::size_t res_u, std::size_t res_v,
                            const ProjectionBounds& bounds) {
    const std::size_t n = pc.size();
    const std::vector<double>* coords[3] = {&pc.x, &pc.y, &pc.z};

    PlaneProjection out;
    out.plane = spec.plane;
    out.grid = Grid(res_u, res_v, features.channels);
    out.pixel_of_point.assign(n, -1);
    out.counts.assign(res_u * res_v, 0);

    auto pixel_index = [&](double coord, int axis, std::size_t res) -> std::int64_t {
        const double lo = bounds.lo[axis];
        const double hi = bounds.hi[axis];
        if (coord < lo || coord > hi) return -1;
        auto idx = static_cast<std::int64_t>(std::floor((coord - lo) / (hi - lo) *
                                                        static_cast<double>(res)));
        // Points exactly on the upper boundary clamp into the last pixel.
        if (idx == static_cast<std::int64_t>(res)) idx = static_cast<std::int64_t>(res) - 1;
        return idx;
    };

    // Sparse accumulation; the dense grid is materialized afterwards.
    std::unordered_map<std::size_t, std::vector<double>> sums;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t u = pixel_index((*coords[spec.u_axis])[i], spec.u_axis, res_u);
        const std::int64_t v = pixel_index((*coords[spec.v_axis])[i], spec.v_axis, res_v);
        if (u < 0 || v < 0) continue;
        const std::size_t pixel = static_cast<std::size_t>(u) * res_v +
                                  static_cast<std::size_t>(v);
        out.pixel_of_point[i] = static_cast<std::int64_t>(pixel);
        out.counts[pixel]++;
        auto& acc = sums[pixel];
        if (acc.empty()) acc.assign(features.channels, 0.0);
        for (std::size_t ch = 0; ch < features.channels; ++ch) {
            acc[ch] += features.at(i, ch);
        }
    }
    for (const auto& [pixel, acc] : sums) {
        const double inv = 1.0 / static_cast<double>(out.counts[pixel]);
        for (std::size_t ch = 0; ch < features.channels; ++ch) {
            out.grid.data[pixel * features.channels + ch] = acc[ch] * inv;
        }
    }
    return out;
}

}  // namespace

std::array<PlaneProjection, 3> project_triple_planes(const PointCloud& pc,
                                                     const FeatureMatrix& features,
                                                     std::array<std::size_t, 3> resolutions,
                                                     const ProjectionBounds& bounds) {
    require(features.n == pc.size(), "project_triple_planes: feature/cloud length mismatch");
    require(resolutions[0] > 0 && resolutions[1] > 0 && resolutions[2] > 0,
            "project_triple_planes: resolutions must be positive");
    for (int a = 0; a < 3; ++a) {
        require(bounds.hi[a] > bounds.lo[a], "project_triple_planes: degenerate bounds");
    }
    const auto [rx, ry, rz] = resolutions;
    return {
        project_one(pc, features, {1, 2, Plane::YZ}, ry, rz, bounds),  // along X
        project_one(pc, features, {0, 2, Plane::XZ}, rx, rz, bounds),  // along Y
        project_one(pc, features, {0, 1, Plane::XY}, rx, ry, bounds),  // along Z
    };
}

FeatureMatrix gather_back(const PlaneProjection& plane) {
    FeatureMatrix out;
    out.n = plane.pixel_of_point.size();
    out.channels = plane.grid.c;
    out.values.assign(out.n * out.channels, 0.0);
    for (std::size_t i = 0; i < out.n; ++i) {
        const std::int64_t pixel = plane.pixel_of_point[i];
        if (pixel < 0) continue;
        for (std::size_t ch = 0; ch < out.channels; ++ch) {
            out.values[i * out.channels + ch] =
                plane.grid.data[static_cast<std::size_t>(pixel) * plane.grid.c + ch];
        }
    }
    return out;
}

}  // namespace lidarwx
