// chromatone CLI: classify single images (skin, hair, iris, undertone),
// evaluate labeled corpora and generate synthetic fixtures.
//
// Exit codes: 0 success, 2 usage/input error, 3 pipeline error.

#include "chromatone/classify.hpp"
#include "chromatone/errors.hpp"
#include "chromatone/eval.hpp"
#include "chromatone/fixtures.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace chromatone;

#ifndef CHROMATONE_BUNDLED_SCALE_DIR
#define CHROMATONE_BUNDLED_SCALE_DIR ""
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPipeline = 3;

std::string scale_dir() {
    if (const char* env = std::getenv("CHROMATONE_SCALE_DIR"); env && *env)
        return env;
    return CHROMATONE_BUNDLED_SCALE_DIR;
}

std::string bundled_scale_path(PipelineKind kind) {
    const char* file = nullptr;
    switch (kind) {
    case PipelineKind::Skin: file = "skin_default.json"; break;
    case PipelineKind::SkinTwoStage: file = "skin_two_stage.json"; break;
    case PipelineKind::Hair: file = "hair_default.json"; break;
    case PipelineKind::Iris: file = "iris_default.json"; break;
    case PipelineKind::Undertone: file = "undertone_default.json"; break;
    }
    return (fs::path(scale_dir()) / file).string();
}

// Flag values shared by the classify and evaluate subcommands. Only options
// the user did not set explicitly are overridable by --config.
struct CommonOptions {
    std::uint64_t seed = 42;
    bool no_blur = false;
    int kernel_divisor = 20;
    double gamma = 1.0;
    std::string metric;
    std::string space = "hsv";
    std::string scale_path;
    std::string thresholds_path;
    std::string refs_path;
    std::string config_path;
    int close_radius = 2;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--seed", opt.seed, "Clustering seed");
    cmd->add_flag("--no-blur", opt.no_blur, "Disable Gaussian blurring");
    cmd->add_option("--kernel-divisor", opt.kernel_divisor,
                    "Blur kernel = min(w,h)/divisor, forced odd")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--gamma", opt.gamma, "Gamma correction (1 = off)");
    cmd->add_option("--metric", opt.metric,
                    "euclidean-rgb|euclidean-lab|cie76|cie94|ciede2000");
    cmd->add_option("--scale", opt.scale_path, "Tone scale JSON path");
    cmd->add_option("--config", opt.config_path, "JSON run config file");
}

// Apply --config values beneath anything set explicitly on the command line.
void apply_config_file(CLI::App* cmd, CommonOptions& opt) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw MissingFileError("cannot open config: " + opt.config_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    auto unset = [&](const char* flag) {
        CLI::Option* o = cmd->get_option_no_throw(flag);
        return o == nullptr || o->count() == 0;
    };
    if (doc.contains("seed") && unset("--seed")) opt.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("blur") && unset("--no-blur")) opt.no_blur = !doc["blur"].get<bool>();
    if (doc.contains("kernel_divisor") && unset("--kernel-divisor"))
        opt.kernel_divisor = doc["kernel_divisor"].get<int>();
    if (doc.contains("gamma") && unset("--gamma")) opt.gamma = doc["gamma"].get<double>();
    if (doc.contains("metric") && unset("--metric"))
        opt.metric = doc["metric"].get<std::string>();
    if (doc.contains("space") && unset("--space"))
        opt.space = doc["space"].get<std::string>();
    if (doc.contains("scale_path") && unset("--scale"))
        opt.scale_path = doc["scale_path"].get<std::string>();
    if (doc.contains("thresholds_path") && unset("--thresholds"))
        opt.thresholds_path = doc["thresholds_path"].get<std::string>();
}

PipelineConfig build_config(PipelineKind kind, const CommonOptions& opt,
                            bool two_stage_flag = false) {
    PipelineConfig cfg;
    cfg.kind = two_stage_flag && kind == PipelineKind::Skin ? PipelineKind::SkinTwoStage
                                                            : kind;
    if (cfg.kind != PipelineKind::Undertone) {
        std::string path =
            opt.scale_path.empty() ? bundled_scale_path(cfg.kind) : opt.scale_path;
        cfg.scale = load_tone_scale(path);
        if (!opt.metric.empty()) cfg.scale.metric = parse_metric(opt.metric);
    } else {
        std::string refs =
            opt.refs_path.empty()
                ? (opt.scale_path.empty() ? bundled_scale_path(cfg.kind) : opt.scale_path)
                : opt.refs_path;
        cfg.refs = load_undertone_refs(refs);
        if (!opt.thresholds_path.empty()) {
            UndertoneThresholds t = load_thresholds(opt.thresholds_path);
            cfg.skin_thresholds = t.skin;
            cfg.vein_thresholds = t.vein;
        }
        cfg.close_radius = opt.close_radius;
    }
    cfg.cluster.seed = opt.seed;
    cfg.space = parse_space(opt.space);
    cfg.blur = !opt.no_blur;
    cfg.kernel_divisor = opt.kernel_divisor;
    cfg.gamma = opt.gamma;
    return cfg;
}

ordered_json classification_json(const Classification& c, PipelineKind kind) {
    ordered_json out;
    out["label"] = c.label;
    out["distance"] = c.distance;
    if (kind == PipelineKind::Skin || kind == PipelineKind::SkinTwoStage) {
        out["dominant_hsv"] = {c.metadata.at("dominant_h"), c.metadata.at("dominant_s"),
                               c.metadata.at("dominant_v")};
    }
    out["dominant_lab"] = {c.dominant.l, c.dominant.a, c.dominant.b};
    auto share = c.metadata.find("cluster_share");
    out["cluster_share"] = share == c.metadata.end() ? 1.0 : share->second;
    if (kind == PipelineKind::Undertone) {
        if (auto it = c.metadata.find("warm_delta"); it != c.metadata.end())
            out["warm_delta"] = it->second;
        if (auto it = c.metadata.find("cool_delta"); it != c.metadata.end())
            out["cool_delta"] = it->second;
        if (auto it = c.metadata.find("warm_similarity"); it != c.metadata.end())
            out["warm_similarity"] = it->second;
        if (auto it = c.metadata.find("cool_similarity"); it != c.metadata.end())
            out["cool_similarity"] = it->second;
    }
    if (c.runner_up)
        out["runner_up"] = {{"label", c.runner_up->first},
                            {"distance", c.runner_up->second}};
    return out;
}

int run_classify(PipelineKind kind, CLI::App* cmd, const CommonOptions& opt,
                 const SampleInput& input, bool two_stage, bool cosine) {
    CommonOptions effective = opt;
    apply_config_file(cmd, effective);
    PipelineConfig cfg = build_config(kind, effective, two_stage);
    cfg.cosine = cosine;
    Classification result = run_pipeline(cfg, input);
    std::cout << classification_json(result, cfg.kind).dump() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skin tone, hair, iris and undertone classification from "
                 "images and precomputed masks"};
    app.require_subcommand(1);

    // --- skin ---------------------------------------------------------------
    auto* skin = app.add_subcommand("skin", "Classify skin tone");
    CommonOptions skin_opt;
    std::string skin_image, skin_mask;
    bool skin_two_stage = false;
    skin->add_option("--image", skin_image, "Input image")->required();
    skin->add_option("--mask", skin_mask, "Skin segmentation mask")->required();
    skin->add_option("--space", skin_opt.space, "Clustering space: hsv|rgb");
    skin->add_flag("--two-stage", skin_two_stage, "Two-stage main/subclass matching");
    add_common_flags(skin, skin_opt);

    // --- hair ---------------------------------------------------------------
    auto* hair = app.add_subcommand("hair", "Classify hair color");
    CommonOptions hair_opt;
    std::string hair_image, hair_mask;
    hair->add_option("--image", hair_image, "Input image")->required();
    hair->add_option("--mask", hair_mask, "Hair segmentation mask")->required();
    add_common_flags(hair, hair_opt);

    // --- iris ---------------------------------------------------------------
    auto* iris = app.add_subcommand("iris", "Classify iris color");
    CommonOptions iris_opt;
    std::string iris_image, iris_landmarks;
    iris->add_option("--image", iris_image, "Input image")->required();
    iris->add_option("--landmarks", iris_landmarks, "68-point landmarks file")
        ->required();
    add_common_flags(iris, iris_opt);

    // --- undertone ----------------------------------------------------------
    auto* undertone = app.add_subcommand("undertone", "Classify skin undertone");
    CommonOptions undertone_opt;
    std::string undertone_image;
    bool undertone_cosine = false;
    undertone->add_option("--image", undertone_image, "Wrist image")->required();
    undertone->add_option("--thresholds", undertone_opt.thresholds_path,
                          "LAB thresholds JSON for skin/vein regions");
    undertone->add_option("--refs", undertone_opt.refs_path,
                          "Warm/Cool reference JSON");
    undertone->add_option("--close-radius", undertone_opt.close_radius,
                          "Morphological closing radius")
        ->check(CLI::PositiveNumber);
    undertone->add_flag("--cosine", undertone_cosine,
                        "Cosine-similarity comparison instead of delta E");
    add_common_flags(undertone, undertone_opt);

    // --- evaluate -----------------------------------------------------------
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a labeled corpus");
    CommonOptions eval_opt;
    std::string eval_manifest, eval_pipeline, eval_report;
    int eval_jobs = 1;
    evaluate->add_option("--manifest", eval_manifest, "Corpus manifest CSV")->required();
    evaluate->add_option("--pipeline", eval_pipeline,
                         "skin|skin2stage|hair|iris|undertone")
        ->required();
    evaluate->add_option("--report", eval_report, "Write per-row report CSV here");
    evaluate->add_option("--space", eval_opt.space, "Clustering space: hsv|rgb");
    evaluate->add_option("--thresholds", eval_opt.thresholds_path,
                         "LAB thresholds JSON (undertone)");
    evaluate->add_option("--jobs", eval_jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_common_flags(evaluate, eval_opt);

    // --- gen-fixtures -------------------------------------------------------
    auto* gen = app.add_subcommand("gen-fixtures", "Generate a synthetic corpus");
    std::string gen_out, gen_kind = "skin", gen_scale;
    std::size_t gen_count = 8;
    double gen_noise = 0.0;
    std::uint64_t gen_seed = 42;
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--kind", gen_kind, "skin|hair|iris|vein")->required();
    gen->add_option("--count", gen_count, "Number of images")->check(CLI::PositiveNumber);
    gen->add_option("--noise", gen_noise, "Gaussian channel noise sigma");
    gen->add_option("--seed", gen_seed, "Sampling seed");
    gen->add_option("--scale", gen_scale, "Scale JSON to draw classes from");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitInput;
    }

    try {
        if (skin->parsed())
            return run_classify(PipelineKind::Skin, skin, skin_opt,
                                {skin_image, skin_mask, ""}, skin_two_stage, false);
        if (hair->parsed())
            return run_classify(PipelineKind::Hair, hair, hair_opt,
                                {hair_image, hair_mask, ""}, false, false);
        if (iris->parsed())
            return run_classify(PipelineKind::Iris, iris, iris_opt,
                                {iris_image, "", iris_landmarks}, false, false);
        if (undertone->parsed())
            return run_classify(PipelineKind::Undertone, undertone, undertone_opt,
                                {undertone_image, "", ""}, false, undertone_cosine);

        if (evaluate->parsed()) {
            CommonOptions effective = eval_opt;
            apply_config_file(evaluate, effective);
            PipelineConfig cfg = build_config(parse_pipeline(eval_pipeline), effective);
            CorpusReport report = evaluate_corpus(eval_manifest, cfg, eval_jobs);
            if (!eval_report.empty()) write_report_csv(eval_report, report);
            if (report.matrix.total() == 0) {
                std::cerr << "error: no rows classified ("
                          << report.failures << " failures)\n";
                return kExitPipeline;
            }
            std::cout << format_metrics_table(metrics(report.matrix), report.failures);
            return kExitOk;
        }

        if (gen->parsed()) {
            FixtureConfig cfg;
            cfg.out_dir = gen_out;
            cfg.kind = parse_fixture_kind(gen_kind);
            cfg.count = gen_count;
            cfg.noise_sigma = gen_noise;
            cfg.seed = gen_seed;

            ToneScale scale;
            UndertoneRefs refs;
            if (cfg.kind == FixtureKind::Vein) {
                refs = load_undertone_refs(
                    gen_scale.empty() ? bundled_scale_path(PipelineKind::Undertone)
                                      : gen_scale);
            } else {
                PipelineKind kind = cfg.kind == FixtureKind::Skin ? PipelineKind::Skin
                                    : cfg.kind == FixtureKind::Hair
                                        ? PipelineKind::Hair
                                        : PipelineKind::Iris;
                scale = load_tone_scale(gen_scale.empty() ? bundled_scale_path(kind)
                                                          : gen_scale);
            }
            FixtureResult result = generate_fixtures(cfg, scale, refs);
            std::cout << "wrote " << result.images << " images to " << gen_out << "\n";
            return kExitOk;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const PipelineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return kExitInput;
}
