#pragma once

#include <cmath>

#include "image.hpp"

namespace shadowdecomp {

namespace lab {

// sRGB primaries to CIE XYZ, D65 white.
inline constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// Reference white: the image of RGB (1,1,1), so neutral inputs have a = b = 0.
inline constexpr double kWhiteX = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
inline constexpr double kWhiteY = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
inline constexpr double kWhiteZ = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

inline constexpr double kEpsilon = 216.0 / 24389.0;  // (6/29)^3
inline constexpr double kKappa = 24389.0 / 27.0;     // (29/3)^3

/// IEC 61966-2-1 decoding.
inline double srgb_to_linear(double v) noexcept {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

inline double f(double t) noexcept {
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

}  // namespace lab

/// Converts one sRGB pixel (clamped to [0,1] first) to CIELAB.
[[nodiscard]] inline Rgb srgb_to_lab(const Rgb& rgb) noexcept {
    const double r = lab::srgb_to_linear(clamp01(rgb[0]));
    const double g = lab::srgb_to_linear(clamp01(rgb[1]));
    const double b = lab::srgb_to_linear(clamp01(rgb[2]));
    const auto& m = lab::kRgbToXyz;
    const double fx = lab::f((m[0][0] * r + m[0][1] * g + m[0][2] * b) / lab::kWhiteX);
    const double fy = lab::f((m[1][0] * r + m[1][1] * g + m[1][2] * b) / lab::kWhiteY);
    const double fz = lab::f((m[2][0] * r + m[2][1] * g + m[2][2] * b) / lab::kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

[[nodiscard]] inline LabBuf srgb_to_lab(const ImageBuf& img) {
    LabBuf out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const Rgb lab = srgb_to_lab(Rgb{img(i, 0), img(i, 1), img(i, 2)});
        for (std::size_t c = 0; c < 3; ++c) out(i, c) = lab[c];
    }
    return out;
}

}  // namespace shadowdecomp
