#pragma once

#include <cmath>
#include <string>

#include "error.hpp"
#include "image.hpp"

namespace shadowdecomp {

/// Smallest admissible gain; darkening divides by w.
inline constexpr double kMinGain = 1e-3;

/// Per-channel linear map from shadowed to lit intensity: lit = w * shadow + b.
///
/// Offsets live in normalized [0,1] intensity units, not 8-bit units.
struct ShadowParams {
    Rgb w{1.0, 1.0, 1.0};
    Rgb b{0.0, 0.0, 0.0};

    friend bool operator==(const ShadowParams&, const ShadowParams&) = default;
};

[[nodiscard]] inline bool is_valid(const ShadowParams& p) noexcept {
    for (std::size_t k = 0; k < 3; ++k) {
        if (!std::isfinite(p.w[k]) || !std::isfinite(p.b[k]) || p.w[k] < kMinGain) return false;
    }
    return true;
}

inline void validate(const ShadowParams& p) {
    if (!is_valid(p)) {
        throw ValidationError("invalid shadow parameters: values must be finite and every gain >= " +
                              std::to_string(kMinGain));
    }
}

/// Applies the illumination model to every pixel. No clamping.
[[nodiscard]] inline ImageBuf relight(const ImageBuf& shadow, const ShadowParams& p) {
    validate(p);
    ImageBuf out(shadow.width(), shadow.height());
    for (std::size_t i = 0; i < shadow.pixel_count(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) out(i, k) = p.w[k] * shadow(i, k) + p.b[k];
    }
    return out;
}

/// Inverse of relight: (free - b) / w per channel. No clamping.
[[nodiscard]] inline ImageBuf darken(const ImageBuf& free, const ShadowParams& p) {
    validate(p);
    ImageBuf out(free.width(), free.height());
    for (std::size_t i = 0; i < free.pixel_count(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) out(i, k) = (free(i, k) - p.b[k]) / p.w[k];
    }
    return out;
}

}  // namespace shadowdecomp
