#pragma once

#include <cstddef>
#include <filesystem>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "decomposition.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "fitting.hpp"
#include "illumination.hpp"
#include "istd.hpp"
#include "parallel.hpp"
#include "png_io.hpp"
#include "serialize.hpp"

namespace shadowdecomp {

// ---------------------------------------------------------------------------
// Ground-truth colour correction
// ---------------------------------------------------------------------------

/// Non-shadow distances between a shadow image and its shadow-free image before and after
/// correction. `rgb_*` is the RMS distance in normalized RGB at native size (the quantity
/// the regression minimizes); `lab_*` is the non-shadow value of the LAB evaluation protocol.
struct CorrectionEntry {
    std::string id;
    double rgb_before = 0.0;
    double rgb_after = 0.0;
    double lab_before = 0.0;
    double lab_after = 0.0;
};

struct CorrectionSummary {
    std::vector<CorrectionEntry> entries;
    std::vector<std::string> failures;
    double mean_lab_before = 0.0;
    double mean_lab_after = 0.0;
    /// Pixel-pooled LAB non-shadow RMSE over all corrected images.
    double pooled_lab_before = 0.0;
    double pooled_lab_after = 0.0;
};

[[nodiscard]] inline CorrectionEntry correction_distances(const std::string& id, const ImageBuf& shadow,
                                                          const ImageBuf& free, const ImageBuf& corrected,
                                                          const MaskBuf& shadow_mask) {
    const MaskBuf lit = complement(shadow_mask);
    return {id, rms_distance(free, shadow, lit), rms_distance(corrected, shadow, lit),
            evaluate_pair(free, shadow, shadow_mask).rmse_nonshadow,
            evaluate_pair(corrected, shadow, shadow_mask).rmse_nonshadow};
}

/// Writes output_dir/<id>.png for every triplet. Per-record failures are collected and the run continues.
[[nodiscard]] inline CorrectionSummary correct_dataset(const std::vector<TripletRecord>& records,
                                                       const std::filesystem::path& output_dir,
                                                       std::size_t threads = 1, bool exact = false) {
    std::filesystem::create_directories(output_dir);
    std::vector<std::optional<CorrectionEntry>> entries(records.size());
    std::vector<ErrorSums> before(records.size()), after(records.size());
    std::vector<std::string> errors(records.size());

    parallel_for(records.size(), threads, [&](std::size_t i) {
        const TripletRecord& rec = records[i];
        try {
            const ImageBuf shadow = load_image(rec.shadow_path);
            const ImageBuf free = load_image(rec.free_path);
            const MaskBuf mask = load_binary_mask(rec.mask_path);
            const ImageBuf corrected = color_correct_gt(shadow, free, mask);
            const auto out_path = output_dir / (rec.id + ".png");
            save_image(corrected, out_path);
            if (exact) save_float_sidecar(corrected, out_path.string() + ".f32");
            entries[i] = correction_distances(rec.id, shadow, free, corrected, mask);
            before[i] = error_sums(free, shadow, mask);
            after[i] = error_sums(corrected, shadow, mask);
        } catch (const std::exception& e) {
            errors[i] = rec.id + ": " + e.what();
        }
    });

    CorrectionSummary summary;
    std::vector<ErrorSums> ok_before, ok_after;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!entries[i]) {
            summary.failures.push_back(errors[i]);
            continue;
        }
        summary.entries.push_back(*entries[i]);
        ok_before.push_back(before[i]);
        ok_after.push_back(after[i]);
    }
    summary.mean_lab_before = pool(ok_before, Pooling::image, Metric::rmse).rmse_nonshadow;
    summary.mean_lab_after = pool(ok_after, Pooling::image, Metric::rmse).rmse_nonshadow;
    summary.pooled_lab_before = pool(ok_before, Pooling::pixel, Metric::rmse).rmse_nonshadow;
    summary.pooled_lab_after = pool(ok_after, Pooling::pixel, Metric::rmse).rmse_nonshadow;
    return summary;
}

// ---------------------------------------------------------------------------
// Shadow-editing augmentation
// ---------------------------------------------------------------------------

inline const std::vector<double> kDefaultKFactors{0.8, 0.9, 1.1, 1.2};

struct AugmentSpec {
    std::vector<double> k_factors = kDefaultKFactors;
    std::filesystem::path output_dir;
    bool write_params = false;
    bool exact = false;
    std::size_t threads = 1;
    std::size_t erosion = kPenumbraErosion;
};

/// Suffix used for synthetic stems, e.g. "0.8" -> "img_k0.8".
[[nodiscard]] inline std::string k_suffix(double k) {
    std::ostringstream s;
    s << "_k" << k;
    return s.str();
}

inline void validate_k_factors(const std::vector<double>& ks) {
    if (ks.empty()) throw ValidationError("augment: at least one k factor is required");
    for (double k : ks) {
        if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("augment: k factors must be positive and finite");
    }
}

/// Gains scaled by k, offsets untouched.
[[nodiscard]] inline ShadowParams scale_gain(const ShadowParams& p, double k) {
    ShadowParams out = p;
    for (double& w : out.w) w *= k;
    return out;
}

struct AugmentedTriplet {
    FitReport fit;
    Matte matte;
    std::vector<ImageBuf> synthetic;  // one per k factor, same order
};

/// Fits (w, b) over the umbra, derives the analytic matte once, then re-shadows the
/// shadow-free image with gains w * k for each k. Throws on an empty umbra, a degenerate
/// fit or a scaled gain below kMinGain.
[[nodiscard]] inline AugmentedTriplet augment_triplet(const ImageBuf& shadow, const ImageBuf& free,
                                                      const MaskBuf& shadow_mask, const std::vector<double>& k_factors,
                                                      std::size_t erosion = kPenumbraErosion) {
    validate_k_factors(k_factors);
    AugmentedTriplet out;
    out.fit = fit_params_from_triplet(shadow, free, shadow_mask, erosion);
    if (out.fit.degenerate()) throw ValidationError("fit degeneracy: constant or non-positive-gain channel");
    out.matte = compute_matte(shadow, free, relight(shadow, out.fit.params));
    for (double k : k_factors) {
        const ShadowParams scaled = scale_gain(out.fit.params, k);
        if (!is_valid(scaled)) {
            throw ValidationError("scaled gain w*k falls below " + std::to_string(kMinGain) + " for k=" +
                                  std::to_string(k));
        }
        out.synthetic.push_back(synthesize_shadow(free, darken(free, scaled), out.matte));
    }
    return out;
}

struct AugmentSummary {
    std::size_t input_count = 0;
    std::size_t generated = 0;
    struct Skip {
        std::string id;
        std::string reason;
    };
    std::vector<Skip> skipped;
};

/// Writes, per triplet and k, an ISTD-style triplet <id>_k<k> under spec.output_dir:
/// the synthetic shadow image, a copy of the mask and a copy of the shadow-free image.
[[nodiscard]] inline AugmentSummary augment_dataset(const std::vector<TripletRecord>& records,
                                                    const AugmentSpec& spec, const IstdLayout& layout = {}) {
    validate_k_factors(spec.k_factors);
    namespace fs = std::filesystem;
    const fs::path shadow_dir = spec.output_dir / layout.shadow_dir;
    const fs::path mask_dir = spec.output_dir / layout.mask_dir;
    const fs::path free_dir = spec.output_dir / layout.free_dir;
    const fs::path params_dir = spec.output_dir / "params";
    for (const auto& d : {shadow_dir, mask_dir, free_dir}) fs::create_directories(d);
    if (spec.write_params) fs::create_directories(params_dir);

    std::vector<std::string> reasons(records.size());
    std::vector<std::size_t> written(records.size(), 0);
    parallel_for(records.size(), spec.threads, [&](std::size_t i) {
        const TripletRecord& rec = records[i];
        try {
            const ImageBuf shadow = load_image(rec.shadow_path);
            const ImageBuf free = load_image(rec.free_path);
            const MaskBuf mask = load_binary_mask(rec.mask_path);
            const AugmentedTriplet aug = augment_triplet(shadow, free, mask, spec.k_factors, spec.erosion);
            for (std::size_t j = 0; j < spec.k_factors.size(); ++j) {
                const std::string stem = rec.id + k_suffix(spec.k_factors[j]);
                const fs::path out = shadow_dir / (stem + ".png");
                save_image(aug.synthetic[j], out);
                if (spec.exact) save_float_sidecar(aug.synthetic[j], out.string() + ".f32");
                fs::copy_file(rec.mask_path, mask_dir / (stem + ".png"), fs::copy_options::overwrite_existing);
                fs::copy_file(rec.free_path, free_dir / (stem + ".png"), fs::copy_options::overwrite_existing);
                if (spec.write_params) {
                    const ShadowParams scaled = scale_gain(aug.fit.params, spec.k_factors[j]);
                    write_json_file(json{{"id", rec.id}, {"w", scaled.w}, {"b", scaled.b}, {"k", spec.k_factors[j]}},
                                    params_dir / (stem + ".json"));
                }
                ++written[i];
            }
        } catch (const std::exception& e) {
            reasons[i] = e.what();
        }
    });

    AugmentSummary summary;
    summary.input_count = records.size();
    for (std::size_t i = 0; i < records.size(); ++i) {
        summary.generated += written[i];
        if (!reasons[i].empty()) summary.skipped.push_back({records[i].id, reasons[i]});
    }
    return summary;
}

inline void to_json(json& j, const CorrectionSummary& s) {
    json entries = json::array();
    for (const auto& e : s.entries) {
        entries.push_back({{"id", e.id},
                           {"rgb_rms_before", detail::number_or_null(e.rgb_before)},
                           {"rgb_rms_after", detail::number_or_null(e.rgb_after)},
                           {"lab_rmse_nonshadow_before", detail::number_or_null(e.lab_before)},
                           {"lab_rmse_nonshadow_after", detail::number_or_null(e.lab_after)}});
    }
    j = json{{"corrected", s.entries.size()},
             {"failures", s.failures},
             {"mean_lab_rmse_nonshadow_before", detail::number_or_null(s.mean_lab_before)},
             {"mean_lab_rmse_nonshadow_after", detail::number_or_null(s.mean_lab_after)},
             {"pooled_lab_rmse_nonshadow_before", detail::number_or_null(s.pooled_lab_before)},
             {"pooled_lab_rmse_nonshadow_after", detail::number_or_null(s.pooled_lab_after)},
             {"images", entries}};
}

inline void to_json(json& j, const AugmentSummary& s) {
    json skipped = json::array();
    for (const auto& sk : s.skipped) skipped.push_back({{"id", sk.id}, {"reason", sk.reason}});
    j = json{{"input_count", s.input_count}, {"generated", s.generated}, {"skipped", skipped}};
}

}  // namespace shadowdecomp
