#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lidarwx/types.hpp"

namespace lidarwx {

/// Dense H x V x C grid, row-major (h, v, c).
struct Grid {
    std::size_t h = 0;
    std::size_t v = 0;
    std::size_t c = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(std::size_t h_, std::size_t v_, std::size_t c_)
        : h(h_), v(v_), c(c_), data(h_ * v_ * c_, 0.0) {}

    double& at(std::size_t i, std::size_t j, std::size_t ch) {
        return data[(i * v + j) * c + ch];
    }
    double at(std::size_t i, std::size_t j, std::size_t ch) const {
        return data[(i * v + j) * c + ch];
    }
    std::size_t value_count() const { return data.size(); }
};

/// Debug dump format: magic "LWXG", uint32 H, V, C (little endian), then
/// row-major float64 values.
void write_grid(const Grid& grid, const std::string& path);
Grid read_grid(const std::string& path);

}  // namespace lidarwx
