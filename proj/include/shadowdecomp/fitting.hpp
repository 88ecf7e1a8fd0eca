#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <string>

#include "error.hpp"
#include "illumination.hpp"
#include "image.hpp"
#include "morphology.hpp"

namespace shadowdecomp {

/// Sample variance below which a channel is treated as constant.
inline constexpr double kDegenerateVariance = 1e-8;

/// Erosion applied to the shadow mask before fitting, to exclude penumbra pixels.
inline constexpr std::size_t kPenumbraErosion = 5;

struct FitReport {
    ShadowParams params;
    std::size_t pixel_count = 0;
    Rgb residual_rmse{0.0, 0.0, 0.0};
    /// Channels where the gain was clamped to kMinGain or the constant-input fallback was used.
    std::set<std::size_t> degenerate_channels;

    [[nodiscard]] bool degenerate() const noexcept { return !degenerate_channels.empty(); }

    friend bool operator==(const FitReport&, const FitReport&) = default;
};

/// Per-channel ordinary least squares of `target` on `source` over the set pixels of `region`:
/// target = w * source + b.
[[nodiscard]] inline FitReport fit_params(const ImageBuf& source, const ImageBuf& target, const MaskBuf& region) {
    require_same_size(source, target, "fit_params");
    require_same_size(source, region, "fit_params");
    require_binary(region, "fit_params");

    FitReport report;
    // Centered two-pass accumulation keeps the normal equations well conditioned for large regions.
    Rgb mean_s{}, mean_t{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < region.pixel_count(); ++i) {
        if (region(i) != 1.0) continue;
        ++n;
        for (std::size_t k = 0; k < 3; ++k) {
            mean_s[k] += source(i, k);
            mean_t[k] += target(i, k);
        }
    }
    if (n < 2) {
        throw EmptyRegionError("fit_params: regression region has " + std::to_string(n) +
                               " pixels, at least 2 are required");
    }
    for (std::size_t k = 0; k < 3; ++k) {
        mean_s[k] /= static_cast<double>(n);
        mean_t[k] /= static_cast<double>(n);
    }

    Rgb sxx{}, sxy{};
    for (std::size_t i = 0; i < region.pixel_count(); ++i) {
        if (region(i) != 1.0) continue;
        for (std::size_t k = 0; k < 3; ++k) {
            const double ds = source(i, k) - mean_s[k];
            sxx[k] += ds * ds;
            sxy[k] += ds * (target(i, k) - mean_t[k]);
        }
    }

    for (std::size_t k = 0; k < 3; ++k) {
        const double variance = sxx[k] / static_cast<double>(n - 1);
        double w = 1.0;
        if (variance < kDegenerateVariance) {
            report.degenerate_channels.insert(k);
        } else {
            w = sxy[k] / sxx[k];
            if (!(w >= kMinGain)) {
                w = kMinGain;
                report.degenerate_channels.insert(k);
            }
        }
        report.params.w[k] = w;
        report.params.b[k] = mean_t[k] - w * mean_s[k];
    }

    Rgb sse{};
    for (std::size_t i = 0; i < region.pixel_count(); ++i) {
        if (region(i) != 1.0) continue;
        for (std::size_t k = 0; k < 3; ++k) {
            const double r = target(i, k) - (report.params.w[k] * source(i, k) + report.params.b[k]);
            sse[k] += r * r;
        }
    }
    for (std::size_t k = 0; k < 3; ++k) report.residual_rmse[k] = std::sqrt(sse[k] / static_cast<double>(n));
    report.pixel_count = n;
    return report;
}

/// Fits shadow parameters from a (shadow, shadow-free, mask) triplet over the umbra,
/// i.e. the shadow mask eroded by `erosion` pixels.
[[nodiscard]] inline FitReport fit_params_from_triplet(const ImageBuf& shadow, const ImageBuf& free,
                                                       const MaskBuf& shadow_mask,
                                                       std::size_t erosion = kPenumbraErosion) {
    require_same_size(shadow, shadow_mask, "fit_params_from_triplet");
    const MaskBuf umbra = erode(shadow_mask, erosion);
    if (count_set(umbra) == 0) {
        throw EmptyRegionError("eroded mask empty: eroding the shadow mask by " + std::to_string(erosion) +
                               " pixels leaves no pixels; retry with a smaller erosion radius");
    }
    return fit_params(shadow, free, umbra);
}

/// Ground-truth colour correction: fits free -> shadow per channel over the non-shadow area
/// (mask complement, not eroded) and applies that map to the whole shadow-free image.
[[nodiscard]] inline ImageBuf color_correct_gt(const ImageBuf& shadow, const ImageBuf& free,
                                               const MaskBuf& shadow_mask) {
    require_same_size(shadow, free, "color_correct_gt");
    require_same_size(shadow, shadow_mask, "color_correct_gt");
    const FitReport fit = fit_params(free, shadow, complement(shadow_mask));
    ImageBuf out(free.width(), free.height());
    for (std::size_t i = 0; i < free.pixel_count(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) out(i, k) = fit.params.w[k] * free(i, k) + fit.params.b[k];
    }
    return out;
}

/// Root-mean-square distance over channels and the set pixels of `region`, in normalized units.
[[nodiscard]] inline double rms_distance(const ImageBuf& a, const ImageBuf& b, const MaskBuf& region) {
    require_same_size(a, b, "rms_distance");
    require_same_size(a, region, "rms_distance");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        if (region(i) != 1.0) continue;
        ++n;
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = a(i, k) - b(i, k);
            sum += d * d;
        }
    }
    return n == 0 ? std::nan("") : std::sqrt(sum / (3.0 * static_cast<double>(n)));
}

}  // namespace shadowdecomp
