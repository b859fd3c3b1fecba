#include "lidarwx/wavelet.hpp"

#include <cmath>
#include <numeric>

namespace lidarwx {

namespace {

// Symmetric reflection for the one-off accesses a 1x3 stencil can make.
inline std::size_t reflect(std::ptrdiff_t idx, std::size_t n) {
    if (idx < 0) return 0;
    if (idx >= static_cast<std::ptrdiff_t>(n)) return n - 1;
    return static_cast<std::size_t>(idx);
}

enum class Axis { rows, cols };

// Applies the 1x3 stencil to `src` along `axis` at position `pos` of the
// split-axis sequence.
inline double stencil_at(const Grid& src, Axis axis, std::size_t other, std::size_t pos,
                         std::size_t ch, const std::array<double, 3>& w) {
    const std::size_t n = axis == Axis::cols ? src.v : src.h;
    double acc = 0.0;
    for (int m = -1; m <= 1; ++m) {
        const std::size_t p = reflect(static_cast<std::ptrdiff_t>(pos) + m, n);
        const double v = axis == Axis::cols ? src.at(other, p, ch) : src.at(p, other, ch);
        acc += w[static_cast<std::size_t>(m + 1)] * v;
    }
    return acc;
}

struct SplitPair {
    Grid approx;
    Grid detail;
};

SplitPair split_forward(const Grid& g, Axis axis, const LiftingOperators& ops) {
    const std::size_t n = axis == Axis::cols ? g.v : g.h;
    const std::size_t other_n = axis == Axis::cols ? g.h : g.v;
    require(n % 2 == 0, "lifting_forward_2d: split axis dimension must be even");
    const std::size_t half = n / 2;

    Grid even = axis == Axis::cols ? Grid(g.h, half, g.c) : Grid(half, g.v, g.c);
    Grid odd = even;
    for (std::size_t o = 0; o < other_n; ++o) {
        for (std::size_t j = 0; j < half; ++j) {
            for (std::size_t ch = 0; ch < g.c; ++ch) {
                if (axis == Axis::cols) {
                    even.at(o, j, ch) = g.at(o, 2 * j, ch);
                    odd.at(o, j, ch) = g.at(o, 2 * j + 1, ch);
                } else {
                    even.at(j, o, ch) = g.at(2 * j, o, ch);
                    odd.at(j, o, ch) = g.at(2 * j + 1, o, ch);
                }
            }
        }
    }

    SplitPair out{even, odd};  // reuse shapes
    // d = x_o - P(x_e)
    for (std::size_t o = 0; o < other_n; ++o) {
        for (std::size_t j = 0; j < half; ++j) {
            for (std::size_t ch = 0; ch < g.c; ++ch) {
                const double pred = stencil_at(even, axis, o, j, ch, ops.predict);
                const double v = (axis == Axis::cols ? odd.at(o, j, ch) : odd.at(j, o, ch));
                if (axis == Axis::cols) {
                    out.detail.at(o, j, ch) = v - pred;
                } else {
                    out.detail.at(j, o, ch) = v - pred;
                }
            }
        }
    }
    // c = x_e + U(d)
    for (std::size_t o = 0; o < other_n; ++o) {
        for (std::size_t j = 0; j < half; ++j) {
            for (std::size_t ch = 0; ch < g.c; ++ch) {
                const double upd = stencil_at(out.detail, axis, o, j, ch, ops.update);
                if (axis == Axis::cols) {
                    out.approx.at(o, j, ch) = even.at(o, j, ch) + upd;
                } else {
                    out.approx.at(j, o, ch) = even.at(j, o, ch) + upd;
                }
            }
        }
    }
    return out;
}

Grid split_inverse(const Grid& approx, const Grid& detail, Axis axis,
                   const LiftingOperators& ops) {
    require(approx.h == detail.h && approx.v == detail.v && approx.c == detail.c,
            "lifting_inverse_2d: sub-band shape mismatch");
    const std::size_t half = axis == Axis::cols ? approx.v : approx.h;
    const std::size_t other_n = axis == Axis::cols ? approx.h : approx.v;

    Grid even = approx;
    // x_e = c - U(d)
    for (std::size_t o = 0; o < other_n; ++o) {
        for (std::size_t j = 0; j < half; ++j) {
            for (std::size_t ch = 0; ch < approx.c; ++ch) {
                const double upd = stencil_at(detail, axis, o, j, ch, ops.update);
                if (axis == Axis::cols) {
                    even.at(o, j, ch) = approx.at(o, j, ch) - upd;
                } else {
                    even.at(j, o, ch) = approx.at(j, o, ch) - upd;
                }
            }
        }
    }
    // x_o = d + P(x_e)
    Grid out = axis == Axis::cols ? Grid(approx.h, 2 * half, approx.c)
                                  : Grid(2 * half, approx.v, approx.c);
    for (std::size_t o = 0; o < other_n; ++o) {
        for (std::size_t j = 0; j < half; ++j) {
            for (std::size_t ch = 0; ch < approx.c; ++ch) {
                const double pred = stencil_at(even, axis, o, j, ch, ops.predict);
                if (axis == Axis::cols) {
                    out.at(o, 2 * j, ch) = even.at(o, j, ch);
                    out.at(o, 2 * j + 1, ch) = detail.at(o, j, ch) + pred;
                } else {
                    out.at(2 * j, o, ch) = even.at(j, o, ch);
                    out.at(2 * j + 1, o, ch) = detail.at(j, o, ch) + pred;
                }
            }
        }
    }
    return out;
}

Grid pad_to_even(const Grid& g, bool& padded_h, bool& padded_v) {
    padded_h = g.h % 2 != 0;
    padded_v = g.v % 2 != 0;
    if (!padded_h && !padded_v) return g;
    Grid out(g.h + (padded_h ? 1 : 0), g.v + (padded_v ? 1 : 0), g.c);
    for (std::size_t i = 0; i < out.h; ++i) {
        const std::size_t si = std::min(i, g.h - 1);
        for (std::size_t j = 0; j < out.v; ++j) {
            const std::size_t sj = std::min(j, g.v - 1);
            for (std::size_t ch = 0; ch < g.c; ++ch) {
                out.at(i, j, ch) = g.at(si, sj, ch);
            }
        }
    }
    return out;
}

Grid crop(const Grid& g, std::size_t h, std::size_t v) {
    if (g.h == h && g.v == v) return g;
    Grid out(h, v, g.c);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < v; ++j) {
            for (std::size_t ch = 0; ch < g.c; ++ch) {
                out.at(i, j, ch) = g.at(i, j, ch);
            }
        }
    }
    return out;
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

}  // namespace

SubbandSet lifting_forward_2d(const Grid& grid, const LiftingOperators& ops) {
    require(grid.h % 2 == 0 && grid.v % 2 == 0,
            "lifting_forward_2d: H and V must be even (pad first)");
    const SplitPair horizontal = split_forward(grid, Axis::cols, ops);
    const SplitPair from_detail = split_forward(horizontal.detail, Axis::rows, ops);
    const SplitPair from_approx = split_forward(horizontal.approx, Axis::rows, ops);
    SubbandSet out;
    out.hl = from_detail.approx;
    out.hh = from_detail.detail;
    out.ll = from_approx.approx;
    out.lh = from_approx.detail;
    return out;
}

Grid lifting_inverse_2d(const SubbandSet& subbands, const LiftingOperators& ops) {
    const Grid detail = split_inverse(subbands.hl, subbands.hh, Axis::rows, ops);
    const Grid approx = split_inverse(subbands.ll, subbands.lh, Axis::rows, ops);
    return split_inverse(approx, detail, Axis::cols, ops);
}

std::size_t max_levels(std::size_t h, std::size_t v) {
    require(h >= 4 && v >= 4, "max_levels: grid smaller than 4x4");
    std::size_t m = std::min(h, v);
    std::size_t t = 0;
    while (m / 2 >= 4) {
        m /= 2;
        ++t;
    }
    return t;
}

WaveletPyramid wavelet_pyramid(const Grid& grid, const LiftingOperators& ops,
                               std::size_t levels) {
    require(levels >= 1, "wavelet_pyramid: need at least one level");
    require(levels <= max_levels(grid.h, grid.v), "wavelet_pyramid: level overflow");

    WaveletPyramid pyramid;
    pyramid.ops = ops;
    pyramid.original_h = grid.h;
    pyramid.original_v = grid.v;
    pyramid.input_mean = mean_of(grid.data);

    Grid current = grid;
    for (std::size_t t = 0; t < levels; ++t) {
        bool ph = false, pv = false;
        current = pad_to_even(current, ph, pv);
        pyramid.pad_h.push_back(ph);
        pyramid.pad_v.push_back(pv);
        pyramid.levels.push_back(lifting_forward_2d(current, ops));
        current = pyramid.levels.back().ll;
    }
    return pyramid;
}

Grid wavelet_reconstruct(const WaveletPyramid& pyramid) {
    require(!pyramid.levels.empty(), "wavelet_reconstruct: empty pyramid");
    Grid current;
    for (std::size_t t = pyramid.levels.size(); t-- > 0;) {
        SubbandSet level = pyramid.levels[t];
        if (t + 1 < pyramid.levels.size()) level.ll = current;
        Grid grid = lifting_inverse_2d(level, pyramid.ops);
        const std::size_t target_h =
            t == 0 ? pyramid.original_h : pyramid.levels[t - 1].ll.h;
        const std::size_t target_v =
            t == 0 ? pyramid.original_v : pyramid.levels[t - 1].ll.v;
        current = crop(grid, target_h, target_v);
    }
    return current;
}

double wavelet_regularization(const WaveletPyramid& pyramid, double lambda1, double lambda2) {
    require(!pyramid.levels.empty(), "wavelet_regularization: empty pyramid");
    double detail_term = 0.0;
    double approx_term = 0.0;
    double prev_approx_mean = pyramid.input_mean;
    for (const auto& level : pyramid.levels) {
        std::vector<double> details;
        details.reserve(level.lh.data.size() * 3);
        details.insert(details.end(), level.lh.data.begin(), level.lh.data.end());
        details.insert(details.end(), level.hl.data.begin(), level.hl.data.end());
        details.insert(details.end(), level.hh.data.begin(), level.hh.data.end());
        const double d_mean = mean_of(details);
        const double a_mean = mean_of(level.ll.data);
        detail_term += d_mean * d_mean;
        const double delta = a_mean - prev_approx_mean;
        approx_term += delta * delta;
        prev_approx_mean = a_mean;
    }
    return lambda1 * detail_term + lambda2 * approx_term;
}

}  // namespace lidarwx
