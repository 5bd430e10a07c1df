#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chromatone/errors.hpp"
#include "chromatone/eval.hpp"
#include "chromatone/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace chromatone;
namespace fs = std::filesystem;

namespace {

std::string scale_path(const char* file) {
    return (fs::path(CHROMATONE_SCALES_DIR) / file).string();
}

fs::path fresh_dir(const char* name) {
    fs::path dir = fs::temp_directory_path() / "chromatone_eval_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("record and label validation") {
    ConfusionMatrix cm({"A", "B", "C"});
    cm.record("A", "A");
    CHECK(cm.counts[0][0] == 1);
    CHECK(cm.total() == 1);

    cm.record("A", "B");
    cm.record("B", "C");
    cm.record("C", "C");
    cm.record("C", "C");
    CHECK(cm.total() == 5);

    CHECK_THROWS_WITH_AS(cm.record("A", "Z"), doctest::Contains("Z"), ConfigError);
}

TEST_CASE("metrics on a perfect diagonal") {
    ConfusionMatrix cm({"x", "y", "z"});
    cm.record("x", "x");
    cm.record("y", "y");
    cm.record("z", "z");
    MetricsReport r = metrics(cm);
    CHECK(r.accuracy == 1.0);
    CHECK(r.macro_precision == 1.0);
    CHECK(r.macro_recall == 1.0);
    CHECK(r.macro_f1 == 1.0);
    for (const ClassMetrics& m : r.per_class) {
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
        CHECK(m.accuracy == 1.0);
    }
}

TEST_CASE("metrics on the 2x2 textbook example") {
    // TP=8, FP=2, FN=2, TN=8 for class A.
    ConfusionMatrix cm({"A", "B"});
    for (int i = 0; i < 8; ++i) cm.record("A", "A");
    for (int i = 0; i < 2; ++i) cm.record("A", "B");
    for (int i = 0; i < 2; ++i) cm.record("B", "A");
    for (int i = 0; i < 8; ++i) cm.record("B", "B");

    MetricsReport r = metrics(cm);
    CHECK(r.accuracy == doctest::Approx(0.8));
    const ClassMetrics& a = r.per_class[0];
    CHECK(a.tp == 8);
    CHECK(a.fp == 2);
    CHECK(a.fn == 2);
    CHECK(a.tn == 8);
    CHECK(a.accuracy == doctest::Approx(0.8));
    CHECK(a.precision == doctest::Approx(0.8));
    CHECK(a.recall == doctest::Approx(0.8));
    CHECK(a.f1 == doctest::Approx(0.8));
}

TEST_CASE("metrics match hand-computed values on a 3-class matrix") {
    // counts[truth][predicted]:
    //        pA pB pC
    //   tA (  5  2  1 )
    //   tB (  1  6  0 )
    //   tC (  0  3  7 )
    ConfusionMatrix cm({"A", "B", "C"});
    auto fill = [&](const char* t, const char* p, int n) {
        for (int i = 0; i < n; ++i) cm.record(t, p);
    };
    fill("A", "A", 5); fill("A", "B", 2); fill("A", "C", 1);
    fill("B", "A", 1); fill("B", "B", 6);
    fill("C", "B", 3); fill("C", "C", 7);

    MetricsReport r = metrics(cm);
    CHECK(std::fabs(r.accuracy - 18.0 / 25.0) <= 1e-12);

    // Class A: TP 5, FP 1, FN 3, TN 16.
    CHECK(std::fabs(r.per_class[0].precision - 5.0 / 6.0) <= 1e-12);
    CHECK(std::fabs(r.per_class[0].recall - 5.0 / 8.0) <= 1e-12);
    double pa = 5.0 / 6.0, ra = 5.0 / 8.0;
    CHECK(std::fabs(r.per_class[0].f1 - 2 * pa * ra / (pa + ra)) <= 1e-12);
    CHECK(std::fabs(r.per_class[0].accuracy - 21.0 / 25.0) <= 1e-12);

    // Class B: TP 6, FP 5, FN 1, TN 13.
    CHECK(std::fabs(r.per_class[1].precision - 6.0 / 11.0) <= 1e-12);
    CHECK(std::fabs(r.per_class[1].recall - 6.0 / 7.0) <= 1e-12);

    // Class C: TP 7, FP 1, FN 3, TN 14.
    CHECK(std::fabs(r.per_class[2].precision - 7.0 / 8.0) <= 1e-12);
    CHECK(std::fabs(r.per_class[2].recall - 7.0 / 10.0) <= 1e-12);

    double macro_p = (5.0 / 6.0 + 6.0 / 11.0 + 7.0 / 8.0) / 3.0;
    CHECK(std::fabs(r.macro_precision - macro_p) <= 1e-12);
}

TEST_CASE("zero-denominator convention") {
    // Class B never predicted, class C never true.
    ConfusionMatrix cm({"A", "B", "C"});
    cm.record("A", "A");
    cm.record("B", "A");
    MetricsReport r = metrics(cm);
    CHECK(r.per_class[1].precision == 0.0); // TP+FP = 0
    CHECK(r.per_class[2].recall == 0.0);    // TP+FN = 0
    CHECK(r.per_class[1].f1 == 0.0);
}

TEST_CASE("metrics are permutation equivariant") {
    ConfusionMatrix cm({"A", "B", "C"});
    auto fill = [&](const char* t, const char* p, int n) {
        for (int i = 0; i < n; ++i) cm.record(t, p);
    };
    fill("A", "A", 4); fill("A", "C", 2); fill("B", "B", 5);
    fill("B", "A", 1); fill("C", "C", 3); fill("C", "B", 2);

    ConfusionMatrix permuted({"C", "A", "B"});
    auto fill2 = [&](const char* t, const char* p, int n) {
        for (int i = 0; i < n; ++i) permuted.record(t, p);
    };
    fill2("A", "A", 4); fill2("A", "C", 2); fill2("B", "B", 5);
    fill2("B", "A", 1); fill2("C", "C", 3); fill2("C", "B", 2);

    MetricsReport r1 = metrics(cm);
    MetricsReport r2 = metrics(permuted);
    CHECK(r1.accuracy == r2.accuracy);
    CHECK(r1.macro_precision == doctest::Approx(r2.macro_precision).epsilon(1e-15));
    CHECK(r1.macro_recall == doctest::Approx(r2.macro_recall).epsilon(1e-15));
    CHECK(r1.macro_f1 == doctest::Approx(r2.macro_f1).epsilon(1e-15));
    for (const ClassMetrics& m1 : r1.per_class) {
        auto it = std::find_if(r2.per_class.begin(), r2.per_class.end(),
                               [&](const ClassMetrics& m2) { return m2.label == m1.label; });
        REQUIRE(it != r2.per_class.end());
        CHECK(m1.precision == it->precision);
        CHECK(m1.recall == it->recall);
        CHECK(m1.f1 == it->f1);
    }
}

TEST_CASE("metrics reject empty input") {
    ConfusionMatrix cm({"A", "B"});
    CHECK_THROWS_AS(static_cast<void>(metrics(cm)), ConfigError);
}

TEST_CASE("evaluate_corpus on a small skin corpus") {
    fs::path dir = fresh_dir("skin_corpus");
    FixtureConfig fcfg;
    fcfg.out_dir = dir.string();
    fcfg.kind = FixtureKind::Skin;
    fcfg.count = 8;
    fcfg.noise_sigma = 0.0;
    fcfg.seed = 42;
    ToneScale scale = load_tone_scale(scale_path("skin_default.json"));
    FixtureResult fx = generate_fixtures(fcfg, scale);
    REQUIRE(fx.images == 8);

    PipelineConfig cfg;
    cfg.kind = PipelineKind::Skin;
    cfg.scale = scale;
    CorpusReport report = evaluate_corpus(fx.manifest_path, cfg, 1);
    CHECK(report.failures == 0);
    CHECK(report.rows.size() == 8);
    MetricsReport m = metrics(report.matrix);
    CHECK(m.accuracy == 1.0);

    // Byte-identical report across runs, and across a threaded run.
    std::string csv1 = report_csv_string(report);
    CorpusReport again = evaluate_corpus(fx.manifest_path, cfg, 1);
    CHECK(report_csv_string(again) == csv1);
    CorpusReport threaded = evaluate_corpus(fx.manifest_path, cfg, 4);
    CHECK(report_csv_string(threaded) == csv1);

    // Report structure: one line per row plus header, status ok.
    std::size_t lines = std::count(csv1.begin(), csv1.end(), '\n');
    CHECK(lines == 9);
    CHECK(csv1.find(",ok\n") != std::string::npos);
}

TEST_CASE("evaluate_corpus records failures without polluting the matrix") {
    fs::path dir = fresh_dir("failing_corpus");
    FixtureConfig fcfg;
    fcfg.out_dir = dir.string();
    fcfg.kind = FixtureKind::Skin;
    fcfg.count = 2;
    ToneScale scale = load_tone_scale(scale_path("skin_default.json"));
    FixtureResult fx = generate_fixtures(fcfg, scale);

    // Append a manifest row whose image does not exist.
    {
        std::ofstream mf(fx.manifest_path, std::ios::app);
        mf << "missing_image.png,3,missing_mask.png,\n";
    }

    PipelineConfig cfg;
    cfg.kind = PipelineKind::Skin;
    cfg.scale = scale;
    CorpusReport report = evaluate_corpus(fx.manifest_path, cfg, 1);
    CHECK(report.failures == 1);
    CHECK(report.rows.size() == 3);
    CHECK(report.matrix.total() == 2);

    std::string csv = report_csv_string(report);
    CHECK(csv.find("error:") != std::string::npos);
}

TEST_CASE("load_manifest validation") {
    fs::path dir = fresh_dir("manifests");
    fs::path bad_header = dir / "bad.csv";
    std::ofstream(bad_header) << "image,class\nfoo.png,1\n";
    CHECK_THROWS_AS(static_cast<void>(load_manifest(bad_header.string())), ConfigError);

    CHECK_THROWS_AS(static_cast<void>(load_manifest((dir / "absent.csv").string())),
                    MissingFileError);

    fs::path ok = dir / "ok.csv";
    std::ofstream(ok) << "path,label,mask_path\na.png,1,a_mask.png\n";
    auto rows = load_manifest(ok.string());
    REQUIRE(rows.size() == 1);
    // Relative paths resolve against the manifest directory.
    CHECK(rows[0].path == (dir / "a.png").string());
    CHECK(rows[0].mask_path == (dir / "a_mask.png").string());
    CHECK(rows[0].label == "1");
}

TEST_CASE("fixture corpora are byte-identical for a fixed seed") {
    ToneScale scale = load_tone_scale(scale_path("skin_default.json"));
    auto run = [&](const char* name) {
        fs::path dir = fresh_dir(name);
        FixtureConfig fcfg;
        fcfg.out_dir = dir.string();
        fcfg.kind = FixtureKind::Skin;
        fcfg.count = 4;
        fcfg.noise_sigma = 15.0;
        fcfg.seed = 7;
        generate_fixtures(fcfg, scale);
        return dir;
    };
    fs::path a = run("det_a");
    fs::path b = run("det_b");
    for (const auto& entry : fs::directory_iterator(a)) {
        fs::path other = b / entry.path().filename();
        REQUIRE(fs::exists(other));
        std::ifstream f1(entry.path(), std::ios::binary);
        std::ifstream f2(other, std::ios::binary);
        std::string c1((std::istreambuf_iterator<char>(f1)), {});
        std::string c2((std::istreambuf_iterator<char>(f2)), {});
        CHECK(c1 == c2);
    }
}

TEST_CASE("vein fixtures carry their thresholds and exact labels") {
    UndertoneRefs refs;
    fs::path dir = fresh_dir("vein_corpus");
    FixtureConfig fcfg;
    fcfg.out_dir = dir.string();
    fcfg.kind = FixtureKind::Vein;
    fcfg.count = 10;
    fcfg.noise_sigma = 0.0;
    fcfg.seed = 21;
    FixtureResult fx = generate_fixtures(fcfg, ToneScale{}, refs);
    REQUIRE(!fx.thresholds_path.empty());

    UndertoneThresholds t = load_thresholds(fx.thresholds_path);
    PipelineConfig cfg;
    cfg.kind = PipelineKind::Undertone;
    cfg.refs = refs;
    cfg.skin_thresholds = t.skin;
    cfg.vein_thresholds = t.vein;
    CorpusReport report = evaluate_corpus(fx.manifest_path, cfg, 1);
    CHECK(report.failures == 0);
    CHECK(metrics(report.matrix).accuracy == 1.0);

    // The first two images carry the reference colors themselves.
    CHECK(report.rows[0].row.label == "Warm");
    CHECK(report.rows[1].row.label == "Cool");
    CHECK(report.rows[0].result.distance < 0.5);
    CHECK(report.rows[1].result.distance < 0.5);
}
