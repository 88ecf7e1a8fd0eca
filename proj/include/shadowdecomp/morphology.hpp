#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "error.hpp"
#include "image.hpp"

namespace shadowdecomp {

/// Binary erosion with a (2r+1)x(2r+1) square structuring element.
/// Pixels outside the frame count as background, so the border erodes inward.
///
/// Implemented as two separable 1-D passes: a pixel survives a pass iff the
/// run of set pixels through it reaches `radius` in both directions.
[[nodiscard]] inline MaskBuf erode(const MaskBuf& mask, std::size_t radius) {
    require_binary(mask, "erode");
    if (radius == 0) return mask;
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();

    // Distance to the nearest background pixel along a line, counting the frame edge as background.
    auto pass = [radius](std::vector<unsigned char>& line) {
        const std::size_t n = line.size();
        std::vector<std::size_t> left(n), right(n);
        std::size_t run = 0;
        for (std::size_t i = 0; i < n; ++i) {
            run = line[i] ? run + 1 : 0;
            left[i] = run;
        }
        run = 0;
        for (std::size_t i = n; i-- > 0;) {
            run = line[i] ? run + 1 : 0;
            right[i] = run;
        }
        for (std::size_t i = 0; i < n; ++i) line[i] = left[i] > radius && right[i] > radius;
    };

    std::vector<unsigned char> cells(w * h);
    for (std::size_t i = 0; i < w * h; ++i) cells[i] = mask(i) == 1.0;

    std::vector<unsigned char> line(w);
    for (std::size_t y = 0; y < h; ++y) {
        std::copy_n(cells.begin() + static_cast<std::ptrdiff_t>(y * w), w, line.begin());
        pass(line);
        std::copy(line.begin(), line.end(), cells.begin() + static_cast<std::ptrdiff_t>(y * w));
    }
    line.resize(h);
    for (std::size_t x = 0; x < w; ++x) {
        for (std::size_t y = 0; y < h; ++y) line[y] = cells[y * w + x];
        pass(line);
        for (std::size_t y = 0; y < h; ++y) cells[y * w + x] = line[y];
    }

    MaskBuf out(w, h);
    for (std::size_t i = 0; i < w * h; ++i) out(i) = cells[i] ? 1.0 : 0.0;
    return out;
}

/// 1 where prob >= t (inclusive), else 0.
[[nodiscard]] inline MaskBuf threshold(const MaskBuf& prob, double t) {
    MaskBuf out(prob.width(), prob.height());
    for (std::size_t i = 0; i < prob.pixel_count(); ++i) out(i) = prob(i) >= t ? 1.0 : 0.0;
    return out;
}

[[nodiscard]] inline MaskBuf complement(const MaskBuf& mask) {
    require_binary(mask, "complement");
    MaskBuf out(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) out(i) = 1.0 - mask(i);
    return out;
}

}  // namespace shadowdecomp
