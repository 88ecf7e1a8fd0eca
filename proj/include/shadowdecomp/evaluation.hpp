#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "image.hpp"
#include "istd.hpp"
#include "lab.hpp"
#include "parallel.hpp"
#include "png_io.hpp"
#include "resize.hpp"

namespace shadowdecomp {

/// Side length images are resampled to before comparison.
inline constexpr std::size_t kEvalSize = 256;

enum class Metric { rmse, mae };
enum class Pooling { pixel, image };

inline const char* to_string(Metric m) noexcept { return m == Metric::rmse ? "rmse" : "mae"; }
inline const char* to_string(Pooling p) noexcept { return p == Pooling::pixel ? "pixel" : "image"; }

/// Accumulated per-region error of one comparison: squared (rmse) or absolute (mae)
/// LAB differences summed over pixels and the three channels.
struct ErrorSums {
    double shadow = 0.0;
    double nonshadow = 0.0;
    std::size_t n_shadow = 0;
    std::size_t n_nonshadow = 0;
};

/// Region errors in LAB units. An empty region reports NaN.
struct EvalReport {
    double rmse_shadow = 0.0;
    double rmse_nonshadow = 0.0;
    double rmse_all = 0.0;
    std::size_t n_shadow_px = 0;
    std::size_t n_nonshadow_px = 0;
    Metric metric_variant = Metric::rmse;
    Pooling pooling = Pooling::pixel;
    std::size_t image_count = 1;
    std::string notes = "inputs assumed sRGB; CIELAB with D65 white; images resized bilinear and masks "
                        "nearest to 256x256; values clamped to [0,1] before conversion";
};

[[nodiscard]] inline double region_value(double sum, std::size_t pixels, Metric metric) noexcept {
    if (pixels == 0) return std::numeric_limits<double>::quiet_NaN();
    const double mean = sum / (3.0 * static_cast<double>(pixels));
    return metric == Metric::rmse ? std::sqrt(mean) : mean;
}

/// Resamples to the evaluation size and accumulates per-region LAB errors.
[[nodiscard]] inline ErrorSums error_sums(const ImageBuf& result, const ImageBuf& gt, const MaskBuf& shadow_mask,
                                          Metric metric = Metric::rmse) {
    require_binary(shadow_mask, "evaluate");
    const LabBuf a = srgb_to_lab(resize_bilinear(result, kEvalSize, kEvalSize));
    const LabBuf b = srgb_to_lab(resize_bilinear(gt, kEvalSize, kEvalSize));
    const MaskBuf mask = resize_mask_nearest(shadow_mask, kEvalSize, kEvalSize);

    ErrorSums sums;
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
        double e = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const double d = a(i, c) - b(i, c);
            e += metric == Metric::rmse ? d * d : std::abs(d);
        }
        if (mask(i) == 1.0) {
            sums.shadow += e;
            ++sums.n_shadow;
        } else {
            sums.nonshadow += e;
            ++sums.n_nonshadow;
        }
    }
    return sums;
}

[[nodiscard]] inline EvalReport make_report(const ErrorSums& s, Metric metric) {
    EvalReport r;
    r.metric_variant = metric;
    r.n_shadow_px = s.n_shadow;
    r.n_nonshadow_px = s.n_nonshadow;
    r.rmse_shadow = region_value(s.shadow, s.n_shadow, metric);
    r.rmse_nonshadow = region_value(s.nonshadow, s.n_nonshadow, metric);
    r.rmse_all = region_value(s.shadow + s.nonshadow, s.n_shadow + s.n_nonshadow, metric);
    return r;
}

[[nodiscard]] inline EvalReport evaluate_pair(const ImageBuf& result, const ImageBuf& gt, const MaskBuf& shadow_mask,
                                              Metric metric = Metric::rmse) {
    return make_report(error_sums(result, gt, shadow_mask, metric), metric);
}

/// Combines per-image sums. Pixel pooling sums errors and counts before the root;
/// image pooling averages the per-image values, skipping images where a region is empty.
[[nodiscard]] inline EvalReport pool(const std::vector<ErrorSums>& per_image, Pooling pooling, Metric metric) {
    ErrorSums total;
    for (const auto& s : per_image) {
        total.shadow += s.shadow;
        total.nonshadow += s.nonshadow;
        total.n_shadow += s.n_shadow;
        total.n_nonshadow += s.n_nonshadow;
    }
    EvalReport r = make_report(total, metric);
    r.pooling = pooling;
    r.image_count = per_image.size();
    if (pooling == Pooling::image) {
        auto mean_of = [&](auto value) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& s : per_image) {
                const double v = value(make_report(s, metric));
                if (std::isnan(v)) continue;
                sum += v;
                ++n;
            }
            return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
        };
        r.rmse_shadow = mean_of([](const EvalReport& e) { return e.rmse_shadow; });
        r.rmse_nonshadow = mean_of([](const EvalReport& e) { return e.rmse_nonshadow; });
        r.rmse_all = mean_of([](const EvalReport& e) { return e.rmse_all; });
    }
    return r;
}

struct DatasetEvalOptions {
    Pooling pooling = Pooling::pixel;
    Metric metric = Metric::rmse;
    bool allow_missing = false;
    std::size_t threads = 1;
    /// When set, ground truth is read from gt_dir/<id>.png instead of the triplet's free image.
    std::filesystem::path gt_dir;
};

struct ImageEval {
    std::string id;
    EvalReport report;
};

struct DatasetEval {
    EvalReport summary;
    std::vector<ImageEval> per_image;
    std::vector<std::string> missing;
};

/// Evaluates results_dir/<id>.png against each triplet's ground truth and shadow mask.
[[nodiscard]] inline DatasetEval evaluate_dataset(const std::filesystem::path& results_dir,
                                                  const std::vector<TripletRecord>& records,
                                                  const DatasetEvalOptions& options = {}) {
    DatasetEval out;
    std::vector<const TripletRecord*> present;
    for (const auto& rec : records) {
        if (std::filesystem::exists(results_dir / (rec.id + ".png"))) {
            present.push_back(&rec);
        } else {
            out.missing.push_back(rec.id);
        }
    }
    if (!out.missing.empty() && !options.allow_missing) {
        std::string list;
        for (const auto& id : out.missing) list += " " + id;
        throw IoError("missing result files in '" + results_dir.string() + "':" + list);
    }

    std::vector<ErrorSums> sums(present.size());
    parallel_for(present.size(), options.threads, [&](std::size_t i) {
        const TripletRecord& rec = *present[i];
        const auto gt_path = options.gt_dir.empty() ? rec.free_path : options.gt_dir / (rec.id + ".png");
        sums[i] = error_sums(load_image(results_dir / (rec.id + ".png")), load_image(gt_path),
                             load_binary_mask(rec.mask_path), options.metric);
    });

    for (std::size_t i = 0; i < present.size(); ++i) {
        out.per_image.push_back({present[i]->id, make_report(sums[i], options.metric)});
    }
    out.summary = pool(sums, options.pooling, options.metric);
    return out;
}

}  // namespace shadowdecomp
