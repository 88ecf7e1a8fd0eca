#pragma once

#include <algorithm>
#include <cstddef>

#include "image.hpp"

namespace shadowdecomp {

/// Below this squared distance between shadow and relit pixel the pixel counts as lit (alpha = 1).
inline constexpr double kMatteEpsilon = 1e-6;

/// Analytic shadow matte from a shadow / shadow-free / relit triplet.
///
/// The per-channel ratio (free - relit) / (shadow - relit) is resolved to one
/// scalar per pixel by least squares over the three channels, then clamped to [0,1].
[[nodiscard]] inline Matte compute_matte(const ImageBuf& shadow, const ImageBuf& free, const ImageBuf& relit) {
    require_same_size(shadow, free, "compute_matte");
    require_same_size(shadow, relit, "compute_matte");
    Matte alpha(shadow.width(), shadow.height());
    for (std::size_t i = 0; i < shadow.pixel_count(); ++i) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = shadow(i, k) - relit(i, k);
            num += (free(i, k) - relit(i, k)) * d;
            den += d * d;
        }
        alpha(i) = den >= kMatteEpsilon ? std::clamp(num / den, 0.0, 1.0) : 1.0;
    }
    return alpha;
}

/// Per-pixel blend `first * alpha + second * (1 - alpha)`.
[[nodiscard]] inline ImageBuf blend(const ImageBuf& first, const ImageBuf& second, const Matte& alpha) {
    require_same_size(first, second, "blend");
    require_same_size(first, alpha, "blend");
    ImageBuf out(first.width(), first.height());
    for (std::size_t i = 0; i < first.pixel_count(); ++i) {
        const double a = alpha(i);
        for (std::size_t k = 0; k < 3; ++k) out(i, k) = first(i, k) * a + second(i, k) * (1.0 - a);
    }
    return out;
}

/// Shadow-free image from the shadow image, its relit version and the matte.
[[nodiscard]] inline ImageBuf recompose(const ImageBuf& shadow, const ImageBuf& relit, const Matte& alpha) {
    return blend(shadow, relit, alpha);
}

/// Shadow image from the shadow-free image, its darkened version and the matte.
[[nodiscard]] inline ImageBuf synthesize_shadow(const ImageBuf& free, const ImageBuf& darkened, const Matte& alpha) {
    return blend(free, darkened, alpha);
}

}  // namespace shadowdecomp
