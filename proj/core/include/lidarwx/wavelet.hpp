#pragma once

#include <array>
#include <vector>

#include "lidarwx/grid.hpp"

namespace lidarwx {

/// Predict/update stencils for the lifting steps. Each is a 1x3 linear
/// cross-sample filter applied along the split axis with symmetric
/// reflection padding. Defaults are the Haar pair (P = center tap,
/// U = half center tap), for which a constant signal has zero detail.
struct LiftingOperators {
    std::array<double, 3> predict{0.0, 1.0, 0.0};
    std::array<double, 3> update{0.0, 0.5, 0.0};
};

struct SubbandSet {
    Grid ll, lh, hl, hh;
};

/// One lifting level per entry; level t+1 is computed from level t's LL.
/// pad_h/pad_v record the symmetric padding applied to odd inputs so the
/// inverse can crop exactly.
struct WaveletPyramid {
    std::vector<SubbandSet> levels;
    std::vector<bool> pad_h;
    std::vector<bool> pad_v;
    LiftingOperators ops;
    std::size_t original_h = 0;
    std::size_t original_v = 0;
    double input_mean = 0.0;  // A_0 for the regularization term
};

/// Single-level 2D decomposition: horizontal split into even/odd columns,
/// d = x_o - P(x_e), c = x_e + U(d), then vertical decomposition of d into
/// (HL, HH) and of c into (LL, LH). Requires even H and V.
SubbandSet lifting_forward_2d(const Grid& grid, const LiftingOperators& ops);

/// Exact inverse for any finite operator coefficients:
/// x_e = c - U(d), x_o = d + P(x_e).
Grid lifting_inverse_2d(const SubbandSet& subbands, const LiftingOperators& ops);

/// Largest t such that min(H, V) / 2^t >= 4, i.e. floor(log2(min)) - 2.
/// Requires H, V >= 4.
std::size_t max_levels(std::size_t h, std::size_t v);

WaveletPyramid wavelet_pyramid(const Grid& grid, const LiftingOperators& ops,
                               std::size_t levels);

/// Reconstructs the original grid from all pyramid levels.
Grid wavelet_reconstruct(const WaveletPyramid& pyramid);

/// lambda1 * sum_t D_t^2 + lambda2 * sum_t (A_t - A_{t-1})^2, where D_t is
/// the mean over {LH, HL, HH} values at level t, A_t the mean over LL, and
/// A_0 the mean of the input grid.
double wavelet_regularization(const WaveletPyramid& pyramid, double lambda1 = 0.1,
                              double lambda2 = 0.1);

}  // namespace lidarwx
