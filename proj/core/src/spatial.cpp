#include "lidarwx/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "lidarwx/io.hpp"

namespace lidarwx {

namespace {
constexpr std::int32_t kLeafSize = 16;

struct HeapEntry {
    double d2;
    std::size_t id;
};

// Max-heap order: worst candidate (largest distance, then largest id) on top.
bool heap_less(const HeapEntry& a, const HeapEntry& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.id < b.id;
}
}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& pc) : n_(pc.size()) {
    if (n_ == 0) throw InvalidArgument("SpatialIndex: empty cloud");
    px_ = pc.x;
    py_ = pc.y;
    pz_ = pc.z;
    ids_.resize(n_);
    std::iota(ids_.begin(), ids_.end(), 0u);
    nodes_.reserve(2 * n_ / kLeafSize + 2);
    root_ = build(0, static_cast<std::int32_t>(n_));
}

std::int32_t SpatialIndex::build(std::int32_t begin, std::int32_t end) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.begin = begin;
        node.end = end;
        // Stable leaf scan order keeps tie-breaking deterministic.
        std::sort(ids_.begin() + begin, ids_.begin() + end);
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    double lo[3] = {1e300, 1e300, 1e300};
    double hi[3] = {-1e300, -1e300, -1e300};
    for (std::int32_t i = begin; i < end; ++i) {
        const auto id = ids_[i];
        const double c[3] = {px_[id], py_[id], pz_[id]};
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], c[a]);
            hi[a] = std::max(hi[a], c[a]);
        }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
        if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
    }
    const std::vector<double>& coord = axis == 0 ? px_ : (axis == 1 ? py_ : pz_);

    const std::int32_t mid = begin + (end - begin) / 2;
    std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         if (coord[a] != coord[b]) return coord[a] < coord[b];
                         return a < b;
                     });

    node.axis = static_cast<std::int8_t>(axis);
    node.split = coord[ids_[mid]];
    const std::int32_t self = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

std::vector<std::pair<std::size_t, double>> SpatialIndex::knn(std::size_t query_id,
                                                              std::size_t k) const {
    require(query_id < n_, "knn: query id out of range");
    return knn_at(px_[query_id], py_[query_id], pz_[query_id], k);
}

std::vector<std::pair<std::size_t, double>> SpatialIndex::knn_at(double qx, double qy, double qz,
                                                                 std::size_t k) const {
    require(k >= 1 && k <= n_, "knn: k out of range");

    std::vector<HeapEntry> heap;
    heap.reserve(k);

    auto consider = [&](std::size_t id) {
        const double dx = px_[id] - qx;
        const double dy = py_[id] - qy;
        const double dz = pz_[id] - qz;
        const HeapEntry cand{dx * dx + dy * dy + dz * dz, id};
        if (heap.size() < k) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end(), heap_less);
        } else if (heap_less(cand, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), heap_less);
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end(), heap_less);
        }
    };

    const double q[3] = {qx, qy, qz};
    auto visit = [&](auto&& self, std::int32_t ni) -> void {
        const Node& node = nodes_[ni];
        if (node.axis < 0) {
            for (std::int32_t i = node.begin; i < node.end; ++i) consider(ids_[i]);
            return;
        }
        const double delta = q[node.axis] - node.split;
        const std::int32_t near = delta < 0 ? node.left : node.right;
        const std::int32_t far = delta < 0 ? node.right : node.left;
        self(self, near);
        if (heap.size() < k || delta * delta <= heap.front().d2) self(self, far);
    };
    visit(visit, root_);

    std::sort(heap.begin(), heap.end(), heap_less);
    std::vector<std::pair<std::size_t, double>> result;
    result.reserve(heap.size());
    for (const auto& e : heap) result.emplace_back(e.id, std::sqrt(e.d2));
    return result;
}

std::size_t SpatialIndex::radius_count(std::size_t query_id, double r) const {
    require(query_id < n_, "radius_count: query id out of range");
    require(r >= 0.0, "radius_count: negative radius");
    return radius_count_at(px_[query_id], py_[query_id], pz_[query_id], r, query_id);
}

std::size_t SpatialIndex::radius_count_at(double qx, double qy, double qz, double r,
                                          std::size_t exclude_id) const {
    require(r >= 0.0, "radius_count: negative radius");
    const double r2 = r * r;
    const double q[3] = {qx, qy, qz};
    std::size_t count = 0;

    auto visit = [&](auto&& self, std::int32_t ni) -> void {
        const Node& node = nodes_[ni];
        if (node.axis < 0) {
            for (std::int32_t i = node.begin; i < node.end; ++i) {
                const auto id = ids_[i];
                if (id == exclude_id) continue;
                const double dx = px_[id] - qx;
                const double dy = py_[id] - qy;
                const double dz = pz_[id] - qz;
                if (dx * dx + dy * dy + dz * dz <= r2) ++count;
            }
            return;
        }
        const double delta = q[node.axis] - node.split;
        const std::int32_t near = delta < 0 ? node.left : node.right;
        const std::int32_t far = delta < 0 ? node.right : node.left;
        self(self, near);
        if (delta * delta <= r2) self(self, far);
    };
    visit(visit, root_);
    return count;
}

DownsampleResult voxel_downsample(const PointCloud& pc, const LabelSet& labels,
                                  double voxel_size) {
    require(voxel_size > 0.0, "voxel_downsample: voxel size must be positive");
    require(pc.size() == labels.size(), "voxel_downsample: cloud/label length mismatch");

    struct Accum {
        double x = 0, y = 0, z = 0, intensity = 0;
        std::size_t count = 0;
        std::size_t first_member = 0;
        std::unordered_map<std::uint16_t, std::size_t> code_counts;
    };

    struct Key {
        std::int64_t ix, iy, iz;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = 1469598103934665603ull;
            for (std::int64_t v : {k.ix, k.iy, k.iz}) {
                h ^= static_cast<std::uint64_t>(v);
                h *= 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };
    auto voxel_key = [voxel_size](double x, double y, double z) {
        return Key{static_cast<std::int64_t>(std::floor(x / voxel_size)),
                   static_cast<std::int64_t>(std::floor(y / voxel_size)),
                   static_cast<std::int64_t>(std::floor(z / voxel_size))};
    };

    const std::size_t n = pc.size();
    std::unordered_map<Key, std::size_t, KeyHash> voxel_of_key;
    voxel_of_key.reserve(n);
    std::vector<Accum> voxels;
    DownsampleResult out;
    out.mapping.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const Key key = voxel_key(pc.x[i], pc.y[i], pc.z[i]);
        auto [it, inserted] = voxel_of_key.try_emplace(key, voxels.size());
        if (inserted) {
            voxels.emplace_back();
            voxels.back().first_member = i;
        }
        Accum& acc = voxels[it->second];
        acc.x += pc.x[i];
        acc.y += pc.y[i];
        acc.z += pc.z[i];
        acc.intensity += pc.intensity[i];
        acc.code_counts[labels.codes[i]]++;
        acc.count++;
        out.mapping[i] = it->second;
    }

    const std::size_t m = voxels.size();
    out.cloud.resize(m);
    out.labels.resize(m);
    for (std::size_t v = 0; v < m; ++v) {
        const Accum& acc = voxels[v];
        const double inv = 1.0 / static_cast<double>(acc.count);
        out.cloud.x[v] = acc.x * inv;
        out.cloud.y[v] = acc.y * inv;
        out.cloud.z[v] = acc.z * inv;
        out.cloud.intensity[v] = acc.intensity * inv;

        std::uint16_t best_code = 0;
        std::size_t best_count = 0;
        for (const auto& [code, count] : acc.code_counts) {
            if (count > best_count || (count == best_count && code < best_code)) {
                best_code = code;
                best_count = count;
            }
        }
        out.labels.codes[v] = best_code;
        out.labels.instance[v] = labels.instance[acc.first_member];
    }
    out.cloud = compute_ranges(std::move(out.cloud));
    return out;
}

NeighborFeatures assemble_neighbor_features(const PointCloud& pc, const SpatialIndex& index,
                                            std::size_t k) {
    require(k >= 1 && k <= pc.size(), "assemble_neighbor_features: k out of range");
    const std::size_t n = pc.size();
    NeighborFeatures out;
    out.n = n;
    out.k = k;
    out.values.resize(n * k * 15);
    out.neighbor_ids.resize(n * k);

    for (std::size_t i = 0; i < n; ++i) {
        const double center[5] = {pc.x[i], pc.y[i], pc.z[i], pc.intensity[i], pc.range[i]};
        const auto neighbors = index.knn(i, k);
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t nb = neighbors[j].first;
            const double other[5] = {pc.x[nb], pc.y[nb], pc.z[nb], pc.intensity[nb],
                                     pc.range[nb]};
            double* dst = out.values.data() + (i * k + j) * 15;
            for (int f = 0; f < 5; ++f) dst[f] = center[f];
            for (int f = 0; f < 5; ++f) dst[5 + f] = other[f];
            for (int f = 0; f < 5; ++f) dst[10 + f] = center[f] - other[f];
            out.neighbor_ids[i * k + j] = nb;
        }
    }
    return out;
}

}  // namespace lidarwx
