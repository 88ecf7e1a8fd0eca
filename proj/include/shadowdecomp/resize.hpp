#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "error.hpp"
#include "image.hpp"

namespace shadowdecomp {

namespace detail {

inline void require_target(std::size_t out_w, std::size_t out_h) {
    if (out_w == 0 || out_h == 0) throw ValidationError("resize: target dimensions must be >= 1");
}

struct Tap {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

// Half-pixel-center mapping: src = (dst + 0.5) * in / out - 0.5, clamped to the edge samples.
inline Tap bilinear_tap(std::size_t dst, std::size_t in, std::size_t out) {
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    double src = (static_cast<double>(dst) + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in - 1));
    const auto lo = static_cast<std::size_t>(std::floor(src));
    const std::size_t hi = std::min(lo + 1, in - 1);
    return {lo, hi, src - static_cast<double>(lo)};
}

inline std::size_t nearest_index(std::size_t dst, std::size_t in, std::size_t out) {
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    const auto src = static_cast<std::size_t>(std::floor((static_cast<double>(dst) + 0.5) * scale));
    return std::min(src, in - 1);
}

}  // namespace detail

/// Bilinear resampling with half-pixel centers.
template <std::size_t C>
[[nodiscard]] Raster<C> resize_bilinear(const Raster<C>& img, std::size_t out_w, std::size_t out_h) {
    detail::require_target(out_w, out_h);
    if (img.empty()) throw ValidationError("resize: empty input");
    Raster<C> out(out_w, out_h);
    for (std::size_t y = 0; y < out_h; ++y) {
        const auto ty = detail::bilinear_tap(y, img.height(), out_h);
        for (std::size_t x = 0; x < out_w; ++x) {
            const auto tx = detail::bilinear_tap(x, img.width(), out_w);
            for (std::size_t c = 0; c < C; ++c) {
                const double top = img.at(tx.lo, ty.lo, c) * (1.0 - tx.frac) + img.at(tx.hi, ty.lo, c) * tx.frac;
                const double bot = img.at(tx.lo, ty.hi, c) * (1.0 - tx.frac) + img.at(tx.hi, ty.hi, c) * tx.frac;
                out.at(x, y, c) = top * (1.0 - ty.frac) + bot * ty.frac;
            }
        }
    }
    return out;
}

/// Nearest-neighbour resampling; the output value set is a subset of the input's.
[[nodiscard]] inline MaskBuf resize_mask_nearest(const MaskBuf& mask, std::size_t out_w, std::size_t out_h) {
    detail::require_target(out_w, out_h);
    if (mask.empty()) throw ValidationError("resize: empty input");
    MaskBuf out(out_w, out_h);
    for (std::size_t y = 0; y < out_h; ++y) {
        const std::size_t sy = detail::nearest_index(y, mask.height(), out_h);
        for (std::size_t x = 0; x < out_w; ++x) {
            out.at(x, y) = mask.at(detail::nearest_index(x, mask.width(), out_w), sy);
        }
    }
    return out;
}

}  // namespace shadowdecomp
