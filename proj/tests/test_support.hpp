#pragma once

// Fixture generators and independent reference implementations for the test suites.
// Nothing here calls into the code under test except for container types and I/O.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include <shadowdecomp/illumination.hpp>
#include <shadowdecomp/image.hpp>

namespace shadowdecomp::testing {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("shadowdecomp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

private:
    std::filesystem::path path_;
};

inline ImageBuf random_image(std::mt19937_64& rng, std::size_t w, std::size_t h, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    ImageBuf img(w, h);
    for (double& v : img.data()) v = u(rng);
    return img;
}

inline ImageBuf constant_image(std::size_t w, std::size_t h, double v) { return ImageBuf(w, h, v); }

inline MaskBuf random_mask(std::mt19937_64& rng, std::size_t w, std::size_t h, double p_set = 0.5) {
    std::bernoulli_distribution b(p_set);
    MaskBuf m(w, h);
    for (double& v : m.data()) v = b(rng) ? 1.0 : 0.0;
    return m;
}

inline MaskBuf rect_mask(std::size_t w, std::size_t h, std::size_t x0, std::size_t y0, std::size_t rw, std::size_t rh) {
    MaskBuf m(w, h);
    for (std::size_t y = y0; y < y0 + rh; ++y)
        for (std::size_t x = x0; x < x0 + rw; ++x) m.at(x, y) = 1.0;
    return m;
}

inline ShadowParams random_params(std::mt19937_64& rng, double w_lo = 1.2, double w_hi = 4.0, double b_lo = -0.1,
                                  double b_hi = 0.1) {
    std::uniform_real_distribution<double> uw(w_lo, w_hi), ub(b_lo, b_hi);
    ShadowParams p;
    for (std::size_t k = 0; k < 3; ++k) {
        p.w[k] = uw(rng);
        p.b[k] = ub(rng);
    }
    return p;
}

/// Literal per-pixel application of lit = w * shadow + b, written independently of the library.
inline ImageBuf apply_linear(const ImageBuf& img, const ShadowParams& p) {
    ImageBuf out = img;
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x)
            for (std::size_t k = 0; k < 3; ++k) out.at(x, y, k) = p.w[k] * img.at(x, y, k) + p.b[k];
    return out;
}

/// Brute-force erosion: a pixel stays set iff every pixel of the (2r+1)^2 window is in-frame and set.
inline MaskBuf brute_force_erode(const MaskBuf& m, std::size_t radius) {
    MaskBuf out(m.width(), m.height());
    const auto r = static_cast<long>(radius);
    for (long y = 0; y < static_cast<long>(m.height()); ++y) {
        for (long x = 0; x < static_cast<long>(m.width()); ++x) {
            bool keep = true;
            for (long dy = -r; dy <= r && keep; ++dy) {
                for (long dx = -r; dx <= r && keep; ++dx) {
                    const long nx = x + dx;
                    const long ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= static_cast<long>(m.width()) || ny >= static_cast<long>(m.height()) ||
                        m.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)) != 1.0) {
                        keep = false;
                    }
                }
            }
            out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = keep ? 1.0 : 0.0;
        }
    }
    return out;
}

/// Sum of squared residuals of target vs w*source+b on channel k over the region.
inline double channel_sse(const ImageBuf& source, const ImageBuf& target, const MaskBuf& region, std::size_t k,
                          double w, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < region.pixel_count(); ++i) {
        if (region(i) != 1.0) continue;
        const double r = target(i, k) - (w * source(i, k) + b);
        s += r * r;
    }
    return s;
}

inline double max_abs_diff(const ImageBuf& a, const ImageBuf& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

/// A shadow scene built from its shadow-free image: a rectangular umbra (alpha = 0)
/// surrounded by a linear penumbra ramp of `penumbra` pixels, alpha = 1 elsewhere.
struct SyntheticTriplet {
    ImageBuf free;
    ImageBuf shadow;
    MaskBuf mask;   // binary mask covering umbra and penumbra
    Matte alpha;    // ground-truth matte
    ShadowParams params;
};

inline SyntheticTriplet make_triplet(std::mt19937_64& rng, std::size_t w, std::size_t h, const ShadowParams& p,
                                     std::size_t penumbra = 3, double lo = 0.35, double hi = 0.95) {
    SyntheticTriplet t;
    t.params = p;
    t.free = random_image(rng, w, h, lo, hi);
    t.alpha = Matte(w, h, 1.0);
    t.mask = MaskBuf(w, h);
    const std::size_t x0 = w / 4, x1 = 3 * w / 4, y0 = h / 4, y1 = 3 * h / 4;  // umbra [x0,x1) x [y0,y1)
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const long dx = std::max({static_cast<long>(x0) - static_cast<long>(x), static_cast<long>(x) -
                                      static_cast<long>(x1) + 1, 0L});
            const long dy = std::max({static_cast<long>(y0) - static_cast<long>(y), static_cast<long>(y) -
                                      static_cast<long>(y1) + 1, 0L});
            const long d = std::max(dx, dy);
            if (d <= static_cast<long>(penumbra)) {
                t.mask.at(x, y) = 1.0;
                t.alpha.at(x, y) = static_cast<double>(d) / static_cast<double>(penumbra + 1);
            }
        }
    }
    t.shadow = ImageBuf(w, h);
    for (std::size_t i = 0; i < t.free.pixel_count(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            const double dark = (t.free(i, k) - p.b[k]) / p.w[k];
            t.shadow(i, k) = t.free(i, k) * t.alpha(i) + dark * (1.0 - t.alpha(i));
        }
    }
    return t;
}

}  // namespace shadowdecomp::testing
