#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace shadowdecomp {

using Rgb = std::array<double, 3>;

/// Interleaved, row-major raster with a fixed channel count.
///
/// Values are double precision and are never clamped by the container
/// itself; intermediates such as relit images legitimately leave [0,1].
template <std::size_t Channels>
class Raster {
public:
    static constexpr std::size_t channels = Channels;

    Raster() = default;

    Raster(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), data_(width * height * Channels, fill) {}

    Raster(std::size_t width, std::size_t height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != width_ * height_ * Channels) {
            throw ValidationError("raster data length " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(width_) + "x" +
                                  std::to_string(height_) + "x" + std::to_string(Channels));
        }
    }

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t pixel_count() const noexcept { return width_ * height_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] std::span<const double> data() const& noexcept { return data_; }
    [[nodiscard]] std::span<double> data() & noexcept { return data_; }
    // A span into a temporary would dangle.
    std::span<const double> data() && = delete;

    [[nodiscard]] double& at(std::size_t x, std::size_t y, std::size_t c = 0) noexcept {
        return data_[(y * width_ + x) * Channels + c];
    }
    [[nodiscard]] double at(std::size_t x, std::size_t y, std::size_t c = 0) const noexcept {
        return data_[(y * width_ + x) * Channels + c];
    }

    /// Channel `c` of the pixel with linear index `i`.
    [[nodiscard]] double& operator()(std::size_t i, std::size_t c = 0) noexcept {
        return data_[i * Channels + c];
    }
    [[nodiscard]] double operator()(std::size_t i, std::size_t c = 0) const noexcept {
        return data_[i * Channels + c];
    }

    [[nodiscard]] bool same_size(std::size_t w, std::size_t h) const noexcept {
        return width_ == w && height_ == h;
    }
    template <std::size_t Other>
    [[nodiscard]] bool same_size(const Raster<Other>& other) const noexcept {
        return same_size(other.width(), other.height());
    }

    [[nodiscard]] bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

/// 3-channel RGB intensities, nominally in [0,1].
using ImageBuf = Raster<3>;

/// Single-channel values in [0,1]; shadow masks and detector probability maps.
using MaskBuf = Raster<1>;

/// CIELAB triples (L in [0,100], a/b signed).
using LabBuf = Raster<3>;

/// Per-pixel blend coefficient alpha, 1 outside the shadow and 0 in the umbra.
using Matte = Raster<1>;

inline double clamp01(double v) noexcept { return std::clamp(v, 0.0, 1.0); }

[[nodiscard]] inline bool is_binary(const MaskBuf& mask) noexcept {
    const auto d = mask.data();
    return std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

[[nodiscard]] inline std::size_t count_set(const MaskBuf& mask) noexcept {
    const auto d = mask.data();
    return static_cast<std::size_t>(std::count(d.begin(), d.end(), 1.0));
}

template <std::size_t A, std::size_t B>
void require_same_size(const Raster<A>& a, const Raster<B>& b, const char* what) {
    if (!a.same_size(b)) {
        throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) +
                              "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                              "x" + std::to_string(b.height()) + ")");
    }
}

inline void require_binary(const MaskBuf& mask, const char* what) {
    if (!is_binary(mask)) {
        throw ValidationError(std::string(what) + ": mask must be binary (values in {0,1})");
    }
}

}  // namespace shadowdecomp
