#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "error.hpp"
#include "evaluation.hpp"
#include "fitting.hpp"
#include "illumination.hpp"
#include "istd.hpp"

namespace shadowdecomp {

using json = nlohmann::json;

// nlohmann::json prints doubles with round-trip precision, so params survive a write/read bit-exactly.

inline void to_json(json& j, const ShadowParams& p) { j = json{{"w", p.w}, {"b", p.b}}; }

inline void from_json(const json& j, ShadowParams& p) {
    try {
        p.w = j.at("w").get<Rgb>();
        p.b = j.at("b").get<Rgb>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed shadow parameters: ") + e.what());
    }
}

inline void to_json(json& j, const FitReport& r) {
    j = json{{"w", r.params.w},
             {"b", r.params.b},
             {"pixel_count", r.pixel_count},
             {"per_channel_residual_rmse", r.residual_rmse},
             {"degenerate_channels", r.degenerate_channels}};
}

namespace detail {
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline void to_json(json& j, const EvalReport& r) {
    j = json{{"rmse_shadow", detail::number_or_null(r.rmse_shadow)},
             {"rmse_nonshadow", detail::number_or_null(r.rmse_nonshadow)},
             {"rmse_all", detail::number_or_null(r.rmse_all)},
             {"n_shadow_px", r.n_shadow_px},
             {"n_nonshadow_px", r.n_nonshadow_px},
             {"metric_variant", to_string(r.metric_variant)},
             {"pooling", to_string(r.pooling)},
             {"image_count", r.image_count},
             {"notes", r.notes}};
}

inline void to_json(json& j, const TripletRecord& t) {
    j = json{{"id", t.id},
             {"shadow_path", t.shadow_path.string()},
             {"mask_path", t.mask_path.string()},
             {"free_path", t.free_path.string()}};
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("'" + path.string() + "': " + e.what());
    }
}

inline void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

[[nodiscard]] inline ShadowParams load_params(const std::filesystem::path& path) {
    auto p = read_json_file(path).get<ShadowParams>();
    validate(p);
    return p;
}

}  // namespace shadowdecomp
