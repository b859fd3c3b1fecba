#include "lidarwx/grid.hpp"

#include <cstring>
#include <fstream>

namespace lidarwx {

namespace {
constexpr char kMagic[4] = {'L', 'W', 'X', 'G'};
}

void write_grid(const Grid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(kMagic, 4);
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(grid.h),
                                   static_cast<std::uint32_t>(grid.v),
                                   static_cast<std::uint32_t>(grid.c)};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(grid.data.data()),
              static_cast<std::streamsize>(grid.data.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path);
}

Grid read_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    std::uint32_t dims[3];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError(path + ": not a grid dump (bad magic)");
    }
    if (!in.read(reinterpret_cast<char*>(dims), sizeof(dims))) {
        throw IoError(path + ": truncated grid header");
    }
    Grid grid(dims[0], dims[1], dims[2]);
    if (!in.read(reinterpret_cast<char*>(grid.data.data()),
                 static_cast<std::streamsize>(grid.data.size() * sizeof(double)))) {
        throw IoError(path + ": truncated grid payload");
    }
    return grid;
}

}  // namespace lidarwx
