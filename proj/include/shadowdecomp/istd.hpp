#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"

namespace shadowdecomp {

/// One (shadow image, shadow mask, shadow-free image) triplet sharing a filename stem.
struct TripletRecord {
    std::string id;
    std::filesystem::path shadow_path;
    std::filesystem::path mask_path;
    std::filesystem::path free_path;

    friend bool operator==(const TripletRecord&, const TripletRecord&) = default;
};

struct IstdLayout {
    std::string shadow_dir = "A";
    std::string mask_dir = "B";
    std::string free_dir = "C";
};

struct ScanResult {
    std::vector<TripletRecord> records;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::map<std::string, std::filesystem::path> png_stems(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("missing subdirectory '" + dir.string() + "'");
    }
    std::map<std::string, std::filesystem::path> stems;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") stems.emplace(entry.path().stem().string(), entry.path());
    }
    return stems;
}

}  // namespace detail

/// Collects triplets whose stem is present in all three subdirectories, sorted by id.
/// Stems missing from any subdirectory are skipped with a warning.
[[nodiscard]] inline ScanResult scan_istd(const std::filesystem::path& root, const IstdLayout& layout = {}) {
    const auto shadows = detail::png_stems(root / layout.shadow_dir);
    const auto masks = detail::png_stems(root / layout.mask_dir);
    const auto frees = detail::png_stems(root / layout.free_dir);

    std::set<std::string> all;
    for (const auto* m : {&shadows, &masks, &frees}) {
        for (const auto& [stem, path] : *m) all.insert(stem);
    }

    ScanResult result;
    for (const auto& stem : all) {
        const auto s = shadows.find(stem);
        const auto m = masks.find(stem);
        const auto f = frees.find(stem);
        if (s == shadows.end() || m == masks.end() || f == frees.end()) {
            std::string missing;
            if (s == shadows.end()) missing += " " + layout.shadow_dir;
            if (m == masks.end()) missing += " " + layout.mask_dir;
            if (f == frees.end()) missing += " " + layout.free_dir;
            result.warnings.push_back("skipping '" + stem + "': missing from" + missing);
            continue;
        }
        result.records.push_back({stem, s->second, m->second, f->second});
    }
    if (result.records.empty()) {
        result.warnings.push_back("no complete triplets under '" + root.string() + "'");
    }
    return result;
}

}  // namespace shadowdecomp
