// Command-line front end for the shadow decomposition toolkit.
//
// Exit codes: 0 success, 1 I/O or validation error, 2 completed with a degenerate fit
// or skipped records.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <shadowdecomp/shadowdecomp.hpp>

namespace fs = std::filesystem;
using namespace shadowdecomp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegenerate = 2;

struct CommonOptions {
    std::size_t threads = default_thread_count();
    bool exact = false;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--threads", common.threads, "Worker threads (default: $SHADOWDECOMP_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--exact", common.exact, "Also write lossless float32 sidecars (<output>.f32)");
}

void add_layout(CLI::App* cmd, IstdLayout& layout) {
    cmd->add_option("--shadow-dir", layout.shadow_dir, "Shadow image subdirectory")->capture_default_str();
    cmd->add_option("--mask-dir", layout.mask_dir, "Shadow mask subdirectory")->capture_default_str();
    cmd->add_option("--free-dir", layout.free_dir, "Shadow-free image subdirectory")->capture_default_str();
}

void write_image(const ImageBuf& img, const fs::path& path, bool exact) {
    save_image(img, path);
    if (exact) save_float_sidecar(img, path.string() + ".f32");
}

void write_matte(const Matte& matte, const fs::path& path, bool exact) {
    save_mask(matte, path);
    if (exact) save_float_sidecar(matte, path.string() + ".f32");
}

/// PNG mattes are read as v/255; a .f32 path is read as a headerless float32 sidecar.
Matte read_matte(const fs::path& path, std::size_t width, std::size_t height) {
    Matte matte = path.extension() == ".f32" ? load_float_sidecar<1>(path, width, height) : load_mask(path);
    if (!matte.same_size(width, height)) throw ValidationError("matte dimensions do not match the image");
    for (double& v : matte.data()) v = clamp01(v);
    return matte;
}

std::string fmt_value(double v) {
    if (std::isnan(v)) return "n/a";
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
}

void print_table(std::ostream& os, const EvalReport& r) {
    os << std::left << std::setw(12) << "region" << std::right << std::setw(12) << to_string(r.metric_variant)
       << std::setw(12) << "pixels" << '\n';
    os << std::left << std::setw(12) << "shadow" << std::right << std::setw(12) << fmt_value(r.rmse_shadow)
       << std::setw(12) << r.n_shadow_px << '\n';
    os << std::left << std::setw(12) << "non-shadow" << std::right << std::setw(12) << fmt_value(r.rmse_nonshadow)
       << std::setw(12) << r.n_nonshadow_px << '\n';
    os << std::left << std::setw(12) << "all" << std::right << std::setw(12) << fmt_value(r.rmse_all)
       << std::setw(12) << r.n_shadow_px + r.n_nonshadow_px << '\n';
}

std::vector<TripletRecord> scan_or_throw(const fs::path& root, const IstdLayout& layout) {
    ScanResult scan = scan_istd(root, layout);
    for (const auto& w : scan.warnings) std::cerr << "warning: " << w << '\n';
    return scan.records;
}

// ---------------------------------------------------------------------------

struct FitArgs {
    fs::path shadow, free, mask, out;
    std::size_t erosion = kPenumbraErosion;
};

int run_fit(const FitArgs& a) {
    const FitReport report =
        fit_params_from_triplet(load_image(a.shadow), load_image(a.free), load_binary_mask(a.mask), a.erosion);
    write_json_file(json(report), a.out);
    if (report.degenerate()) {
        std::cerr << "warning: degenerate fit on " << report.degenerate_channels.size() << " channel(s)\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

struct RelightArgs {
    fs::path image, params, out;
    bool inverse = false;
};

int run_relight(const RelightArgs& a, const CommonOptions& common) {
    const ImageBuf img = load_image(a.image);
    const ShadowParams p = load_params(a.params);
    write_image(a.inverse ? darken(img, p) : relight(img, p), a.out, common.exact);
    return kExitOk;
}

struct MatteArgs {
    fs::path shadow, free, params, mask, out;
    std::size_t erosion = kPenumbraErosion;
};

int run_matte(const MatteArgs& a, const CommonOptions& common) {
    const ImageBuf shadow = load_image(a.shadow);
    const ImageBuf free = load_image(a.free);
    int status = kExitOk;
    ShadowParams p;
    if (!a.params.empty()) {
        p = load_params(a.params);
    } else if (!a.mask.empty()) {
        const FitReport fit = fit_params_from_triplet(shadow, free, load_binary_mask(a.mask), a.erosion);
        p = fit.params;
        if (fit.degenerate()) status = kExitDegenerate;
    } else {
        throw ValidationError("matte: pass --params, or --mask to fit parameters from the pair");
    }
    write_matte(compute_matte(shadow, free, relight(shadow, p)), a.out, common.exact);
    return status;
}

struct SynthArgs {
    fs::path free, params, matte, out;
    double k = 1.0;
};

int run_synth(const SynthArgs& a, const CommonOptions& common) {
    const ImageBuf free = load_image(a.free);
    const ShadowParams p = scale_gain(load_params(a.params), a.k);
    validate(p);
    const Matte matte = read_matte(a.matte, free.width(), free.height());
    write_image(synthesize_shadow(free, darken(free, p), matte), a.out, common.exact);
    return kExitOk;
}

struct RemoveArgs {
    fs::path shadow, mask, mask_prob, params, free, matte, out, params_out;
    double threshold = 0.95;
    std::size_t erosion = kPenumbraErosion;
    std::size_t blend_erosion = 0;
};

int run_remove(const RemoveArgs& a, const CommonOptions& common) {
    const ImageBuf shadow = load_image(a.shadow);
    std::optional<MaskBuf> mask;
    if (!a.mask.empty()) mask = load_binary_mask(a.mask);
    if (!a.mask_prob.empty()) mask = threshold(load_mask(a.mask_prob), a.threshold);
    std::optional<ImageBuf> free;
    if (!a.free.empty()) free = load_image(a.free);

    int status = kExitOk;
    ShadowParams p;
    if (!a.params.empty()) {
        p = load_params(a.params);
    } else if (free && mask) {
        const FitReport fit = fit_params_from_triplet(shadow, *free, *mask, a.erosion);
        p = fit.params;
        if (fit.degenerate()) status = kExitDegenerate;
    } else {
        throw ValidationError("remove: parameter source unresolvable; pass --params, or --free with a mask");
    }
    if (!a.params_out.empty()) write_json_file(json(p), a.params_out);

    const ImageBuf relit = relight(shadow, p);
    Matte alpha;
    if (!a.matte.empty()) {
        alpha = read_matte(a.matte, shadow.width(), shadow.height());
    } else if (free) {
        alpha = compute_matte(shadow, *free, relit);
    } else if (mask) {
        alpha = complement(erode(*mask, a.blend_erosion));
    } else {
        throw ValidationError("remove: matte source unresolvable; pass --matte, --free or a mask");
    }
    write_image(recompose(shadow, relit, alpha), a.out, common.exact);
    return status;
}

struct CorrectArgs {
    fs::path shadow, free, mask, out;
    fs::path root, out_dir, summary;
    IstdLayout layout;
};

int run_correct(const CorrectArgs& a, const CommonOptions& common) {
    if (!a.root.empty()) {
        if (a.out_dir.empty()) throw ValidationError("correct-gt: --root requires --out-dir");
        const CorrectionSummary s = correct_dataset(scan_or_throw(a.root, a.layout), a.out_dir, common.threads,
                                                    common.exact);
        for (const auto& f : s.failures) std::cerr << "error: " << f << '\n';
        if (!a.summary.empty()) write_json_file(json(s), a.summary);
        std::cout << "corrected " << s.entries.size() << " image(s); non-shadow LAB RMSE (image mean) "
                  << fmt_value(s.mean_lab_before) << " -> " << fmt_value(s.mean_lab_after) << ", pixel-pooled "
                  << fmt_value(s.pooled_lab_before) << " -> " << fmt_value(s.pooled_lab_after) << '\n';
        return s.failures.empty() ? kExitOk : kExitError;
    }
    if (a.shadow.empty() || a.free.empty() || a.mask.empty() || a.out.empty()) {
        throw ValidationError("correct-gt: pass --shadow --free --mask --out, or --root --out-dir");
    }
    const ImageBuf shadow = load_image(a.shadow);
    const ImageBuf free = load_image(a.free);
    const MaskBuf mask = load_binary_mask(a.mask);
    const ImageBuf corrected = color_correct_gt(shadow, free, mask);
    write_image(corrected, a.out, common.exact);
    const CorrectionEntry e = correction_distances(a.out.stem().string(), shadow, free, corrected, mask);
    if (!a.summary.empty()) {
        CorrectionSummary s;
        s.entries.push_back(e);
        s.mean_lab_before = s.pooled_lab_before = e.lab_before;
        s.mean_lab_after = s.pooled_lab_after = e.lab_after;
        write_json_file(json(s), a.summary);
    }
    std::cout << "non-shadow LAB RMSE " << fmt_value(e.lab_before) << " -> " << fmt_value(e.lab_after) << '\n';
    return kExitOk;
}

struct EvaluateArgs {
    fs::path result, gt, mask;
    fs::path results_dir, root, gt_dir, json_out, csv_out;
    std::string pooling = "pixel";
    std::string metric = "rmse";
    bool allow_missing = false;
    IstdLayout layout;
};

int run_evaluate(const EvaluateArgs& a, const CommonOptions& common) {
    const Metric metric = a.metric == "mae" ? Metric::mae : Metric::rmse;
    const Pooling pooling = a.pooling == "image" ? Pooling::image : Pooling::pixel;
    EvalReport report;
    if (!a.results_dir.empty()) {
        if (a.root.empty()) throw ValidationError("evaluate: --results-dir requires --root");
        DatasetEvalOptions opts;
        opts.pooling = pooling;
        opts.metric = metric;
        opts.allow_missing = a.allow_missing;
        opts.threads = common.threads;
        opts.gt_dir = a.gt_dir;
        const DatasetEval eval = evaluate_dataset(a.results_dir, scan_or_throw(a.root, a.layout), opts);
        for (const auto& id : eval.missing) std::cerr << "warning: missing result for '" << id << "'\n";
        if (!a.csv_out.empty()) {
            std::ofstream csv(a.csv_out);
            if (!csv) throw IoError("cannot write '" + a.csv_out.string() + "'");
            csv << std::setprecision(17) << "filename,shadow,nonshadow,all\n";
            for (const auto& img : eval.per_image) {
                csv << img.id << ".png," << img.report.rmse_shadow << ',' << img.report.rmse_nonshadow << ','
                    << img.report.rmse_all << '\n';
            }
        }
        report = eval.summary;
    } else {
        if (a.result.empty() || a.gt.empty() || a.mask.empty()) {
            throw ValidationError("evaluate: pass --result --gt --mask, or --results-dir --root");
        }
        report = evaluate_pair(load_image(a.result), load_image(a.gt), load_binary_mask(a.mask), metric);
    }
    if (!a.json_out.empty()) write_json_file(json(report), a.json_out);
    print_table(std::cout, report);
    return kExitOk;
}

struct AugmentArgs {
    fs::path root, out_dir, summary;
    std::vector<double> k_factors = kDefaultKFactors;
    bool write_params = false;
    std::size_t erosion = kPenumbraErosion;
    IstdLayout layout;
};

int run_augment(const AugmentArgs& a, const CommonOptions& common) {
    AugmentSpec spec;
    spec.k_factors = a.k_factors;
    spec.output_dir = a.out_dir;
    spec.write_params = a.write_params;
    spec.exact = common.exact;
    spec.threads = common.threads;
    spec.erosion = a.erosion;
    const auto records = scan_or_throw(a.root, a.layout);
    if (fs::weakly_canonical(a.out_dir) == fs::weakly_canonical(a.root)) {
        throw ValidationError("augment: output directory must differ from the input root");
    }
    const AugmentSummary s = augment_dataset(records, spec, a.layout);
    for (const auto& sk : s.skipped) std::cerr << "skipped '" << sk.id << "': " << sk.reason << '\n';
    if (!a.summary.empty()) write_json_file(json(s), a.summary);
    std::cout << "generated " << s.generated << " synthetic triplet(s) from " << s.input_count << " input(s), "
              << s.skipped.size() << " skipped\n";
    return s.skipped.empty() ? kExitOk : kExitDegenerate;
}

struct ScanArgs {
    fs::path root;
    IstdLayout layout;
};

int run_scan(const ScanArgs& a) {
    const ScanResult scan = scan_istd(a.root, a.layout);
    for (const auto& w : scan.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << json{{"records", scan.records}, {"warnings", scan.warnings}}.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shadow image decomposition: fit, relight, matte, remove, synthesize, evaluate"};
    app.require_subcommand(1);
    CommonOptions common;
    std::function<int()> action;

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit shadow parameters over the eroded shadow mask");
    fit_cmd->add_option("--shadow", fit.shadow, "Shadow image")->required();
    fit_cmd->add_option("--free", fit.free, "Shadow-free image")->required();
    fit_cmd->add_option("--mask", fit.mask, "Binary shadow mask")->required();
    fit_cmd->add_option("--out", fit.out, "Output FitReport JSON")->required();
    fit_cmd->add_option("--erosion", fit.erosion, "Penumbra erosion radius in pixels")->capture_default_str();
    add_common(fit_cmd, common);
    fit_cmd->callback([&] { action = [&] { return run_fit(fit); }; });

    RelightArgs rel;
    auto* rel_cmd = app.add_subcommand("relight", "Apply the illumination model (or its inverse)");
    rel_cmd->add_option("--image", rel.image, "Input image")->required();
    rel_cmd->add_option("--params", rel.params, "Shadow parameters JSON")->required();
    rel_cmd->add_option("--out", rel.out, "Output image")->required();
    rel_cmd->add_flag("--inverse", rel.inverse, "Darken instead of relight");
    add_common(rel_cmd, common);
    rel_cmd->callback([&] { action = [&] { return run_relight(rel, common); }; });

    MatteArgs mat;
    auto* mat_cmd = app.add_subcommand("matte", "Compute the analytic shadow matte");
    mat_cmd->add_option("--shadow", mat.shadow, "Shadow image")->required();
    mat_cmd->add_option("--free", mat.free, "Shadow-free image")->required();
    mat_cmd->add_option("--params", mat.params, "Shadow parameters JSON");
    mat_cmd->add_option("--mask", mat.mask, "Shadow mask, used to fit parameters when --params is absent");
    mat_cmd->add_option("--erosion", mat.erosion, "Penumbra erosion radius for fitting")->capture_default_str();
    mat_cmd->add_option("--out", mat.out, "Output matte PNG")->required();
    add_common(mat_cmd, common);
    mat_cmd->callback([&] { action = [&] { return run_matte(mat, common); }; });

    SynthArgs syn;
    auto* syn_cmd = app.add_subcommand("synth", "Synthesize a shadow image from a shadow-free image");
    syn_cmd->add_option("--free", syn.free, "Shadow-free image")->required();
    syn_cmd->add_option("--params", syn.params, "Shadow parameters JSON")->required();
    syn_cmd->add_option("--matte", syn.matte, "Matte PNG or .f32 sidecar")->required();
    syn_cmd->add_option("--k", syn.k, "Gain scaling factor")->capture_default_str()->check(CLI::PositiveNumber);
    syn_cmd->add_option("--out", syn.out, "Output shadow image")->required();
    add_common(syn_cmd, common);
    syn_cmd->callback([&] { action = [&] { return run_synth(syn, common); }; });

    RemoveArgs rem;
    auto* rem_cmd = app.add_subcommand("remove", "Remove a shadow given parameters and a matte source");
    rem_cmd->add_option("--shadow", rem.shadow, "Shadow image")->required();
    auto* mask_opt = rem_cmd->add_option("--mask", rem.mask, "Binary shadow mask");
    rem_cmd->add_option("--mask-prob", rem.mask_prob, "Detector probability map, thresholded")->excludes(mask_opt);
    rem_cmd->add_option("--threshold", rem.threshold, "Probability threshold")->capture_default_str();
    rem_cmd->add_option("--params", rem.params, "Shadow parameters JSON (else fitted from --free)");
    rem_cmd->add_option("--free", rem.free, "Ground-truth shadow-free image for oracle params/matte");
    rem_cmd->add_option("--matte", rem.matte, "Matte PNG or .f32 sidecar (else analytic or binary mask)");
    rem_cmd->add_option("--erosion", rem.erosion, "Penumbra erosion radius for oracle fitting")
        ->capture_default_str();
    rem_cmd->add_option("--blend-erosion", rem.blend_erosion, "Erosion of the mask in binary-mask blend mode")
        ->capture_default_str();
    rem_cmd->add_option("--params-out", rem.params_out, "Write the parameters used to this JSON file");
    rem_cmd->add_option("--out", rem.out, "Output shadow-free image")->required();
    add_common(rem_cmd, common);
    rem_cmd->callback([&] { action = [&] { return run_remove(rem, common); }; });

    CorrectArgs cor;
    auto* cor_cmd = app.add_subcommand("correct-gt", "Colour-correct shadow-free ground truth to the shadow image");
    cor_cmd->add_option("--shadow", cor.shadow, "Shadow image");
    cor_cmd->add_option("--free", cor.free, "Shadow-free image");
    cor_cmd->add_option("--mask", cor.mask, "Binary shadow mask");
    cor_cmd->add_option("--out", cor.out, "Corrected output image");
    cor_cmd->add_option("--root", cor.root, "Dataset root (ISTD layout)");
    cor_cmd->add_option("--out-dir", cor.out_dir, "Output directory for dataset mode");
    cor_cmd->add_option("--summary", cor.summary, "Summary JSON");
    add_layout(cor_cmd, cor.layout);
    add_common(cor_cmd, common);
    cor_cmd->callback([&] { action = [&] { return run_correct(cor, common); }; });

    EvaluateArgs ev;
    auto* ev_cmd = app.add_subcommand("evaluate", "LAB error over shadow / non-shadow / all at 256x256");
    ev_cmd->add_option("--result", ev.result, "Result image");
    ev_cmd->add_option("--gt", ev.gt, "Ground-truth image");
    ev_cmd->add_option("--mask", ev.mask, "Binary shadow mask");
    ev_cmd->add_option("--results-dir", ev.results_dir, "Directory of <id>.png results");
    ev_cmd->add_option("--root", ev.root, "Dataset root (ISTD layout)");
    ev_cmd->add_option("--gt-dir", ev.gt_dir, "Override ground truth with <gt-dir>/<id>.png");
    ev_cmd->add_option("--pooling", ev.pooling, "pixel or image")
        ->check(CLI::IsMember({"pixel", "image"}))
        ->capture_default_str();
    ev_cmd->add_option("--metric", ev.metric, "rmse or mae")
        ->check(CLI::IsMember({"rmse", "mae"}))
        ->capture_default_str();
    ev_cmd->add_flag("--allow-missing", ev.allow_missing, "Skip triplets without a result image");
    ev_cmd->add_option("--json", ev.json_out, "Write the report as JSON");
    ev_cmd->add_option("--csv", ev.csv_out, "Per-image CSV (dataset mode)");
    add_layout(ev_cmd, ev.layout);
    add_common(ev_cmd, common);
    ev_cmd->callback([&] { action = [&] { return run_evaluate(ev, common); }; });

    AugmentArgs aug;
    auto* aug_cmd = app.add_subcommand("augment", "Generate re-shadowed triplets with scaled gains");
    aug_cmd->add_option("--root", aug.root, "Dataset root (ISTD layout)")->required();
    aug_cmd->add_option("--out-dir", aug.out_dir, "Output root")->required();
    aug_cmd->add_option("--k", aug.k_factors, "Gain scaling factors")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    aug_cmd->add_flag("--write-params", aug.write_params, "Write params/<id>_k<k>.json");
    aug_cmd->add_option("--erosion", aug.erosion, "Penumbra erosion radius for fitting")->capture_default_str();
    aug_cmd->add_option("--summary", aug.summary, "Summary JSON");
    add_layout(aug_cmd, aug.layout);
    add_common(aug_cmd, common);
    aug_cmd->callback([&] { action = [&] { return run_augment(aug, common); }; });

    ScanArgs scan;
    auto* scan_cmd = app.add_subcommand("scan", "List complete triplets under an ISTD-style root");
    scan_cmd->add_option("--root", scan.root, "Dataset root")->required();
    add_layout(scan_cmd, scan.layout);
    add_common(scan_cmd, common);
    scan_cmd->callback([&] { action = [&] { return run_scan(scan); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        return action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
