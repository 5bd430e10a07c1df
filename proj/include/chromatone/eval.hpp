// Confusion-matrix accumulation, the derived metric suite (accuracy,
// precision, recall, F1; per class and macro) and the labeled-corpus
// evaluation harness.

#pragma once

#include "chromatone/classify.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace chromatone {

struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> counts; // counts[truth][predicted]

    explicit ConfusionMatrix(std::vector<std::string> class_labels);

    // Throws ConfigError when either label is unknown.
    void record(const std::string& truth, const std::string& predicted);

    std::size_t total() const;
    std::size_t label_index(const std::string& label) const;
};

struct ClassMetrics {
    std::string label;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double accuracy = 0.0; // one-vs-rest
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0; // trace / total
    std::vector<ClassMetrics> per_class;
    double macro_accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

// One-vs-rest per class; precision and recall define to 0 when their
// denominator is 0. Macro values are unweighted means over classes.
MetricsReport metrics(const ConfusionMatrix& cm);

// One manifest row: path,label[,mask_path][,landmarks_path].
struct ManifestRow {
    std::string path;
    std::string label;
    std::string mask_path;
    std::string landmarks_path;
};

// CSV with a header; relative paths resolve against the manifest directory.
std::vector<ManifestRow> load_manifest(const std::string& path);

struct RowResult {
    ManifestRow row;
    bool ok = false;
    Classification result; // valid when ok
    std::string error;     // set when !ok
};

struct CorpusReport {
    ConfusionMatrix matrix;
    std::vector<RowResult> rows;
    std::size_t failures = 0;
};

// Runs the pipeline over every manifest row (optionally with `jobs` worker
// threads; results merge in manifest order). Rows that throw are counted as
// failures and left out of the matrix.
CorpusReport evaluate_corpus(const std::string& manifest_path,
                             const PipelineConfig& cfg, int jobs = 1);

// Report CSV: path,truth,predicted,distance,dominant_l,dominant_a,
// dominant_b,cluster_share,status; one row per manifest row, byte-stable
// across runs.
void write_report_csv(const std::string& path, const CorpusReport& report);
std::string report_csv_string(const CorpusReport& report);

// Human-readable metrics table for the CLI.
std::string format_metrics_table(const MetricsReport& report, std::size_t failures);

} // namespace chromatone
