#include "chromatone/eval.hpp"
#include "chromatone/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace chromatone {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_labels)
    : labels(std::move(class_labels)) {
    counts.assign(labels.size(), std::vector<std::size_t>(labels.size(), 0));
}

std::size_t ConfusionMatrix::label_index(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    throw ConfigError("unknown label: " + label);
}

void ConfusionMatrix::record(const std::string& truth, const std::string& predicted) {
    counts[label_index(truth)][label_index(predicted)]++;
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts)
        for (std::size_t c : row) t += c;
    return t;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
    std::size_t n = cm.labels.size();
    std::size_t total = cm.total();
    if (n == 0 || total == 0) throw ConfigError("empty confusion matrix");

    MetricsReport report;
    std::size_t trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += cm.counts[i][i];
    report.accuracy = static_cast<double>(trace) / static_cast<double>(total);

    for (std::size_t i = 0; i < n; ++i) {
        ClassMetrics m;
        m.label = cm.labels[i];
        m.tp = cm.counts[i][i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            m.fn += cm.counts[i][j]; // true i, predicted elsewhere
            m.fp += cm.counts[j][i]; // predicted i, true elsewhere
        }
        m.tn = total - m.tp - m.fp - m.fn;

        m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(total);
        m.precision = (m.tp + m.fp) == 0
                          ? 0.0
                          : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
        m.recall = (m.tp + m.fn) == 0
                       ? 0.0
                       : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
        m.f1 = (m.precision + m.recall) == 0.0
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        report.per_class.push_back(m);
    }

    double count = static_cast<double>(n);
    for (const ClassMetrics& m : report.per_class) {
        report.macro_accuracy += m.accuracy / count;
        report.macro_precision += m.precision / count;
        report.macro_recall += m.recall / count;
        report.macro_f1 += m.f1 / count;
    }
    return report;
}

std::vector<ManifestRow> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError("cannot open manifest: " + path);

    fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        if (p.empty()) return p;
        fs::path fp(p);
        return fp.is_absolute() ? p : (base / fp).string();
    };

    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("manifest is empty: " + path);

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(field);
        if (!s.empty() && s.back() == ',') out.push_back("");
        return out;
    };

    std::vector<std::string> header = split(line);
    int path_col = -1, label_col = -1, mask_col = -1, lm_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "path") path_col = static_cast<int>(i);
        else if (header[i] == "label") label_col = static_cast<int>(i);
        else if (header[i] == "mask_path") mask_col = static_cast<int>(i);
        else if (header[i] == "landmarks_path") lm_col = static_cast<int>(i);
    }
    if (path_col < 0 || label_col < 0)
        throw ConfigError("manifest header must contain path and label columns: " + path);

    std::vector<ManifestRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line);
        auto get = [&](int col) {
            return (col >= 0 && col < static_cast<int>(fields.size())) ? fields[col]
                                                                       : std::string();
        };
        ManifestRow row;
        row.path = resolve(get(path_col));
        row.label = get(label_col);
        row.mask_path = resolve(get(mask_col));
        row.landmarks_path = resolve(get(lm_col));
        if (row.path.empty() || row.label.empty())
            throw ConfigError("manifest line " + std::to_string(line_no) +
                              " is missing path or label");
        rows.push_back(std::move(row));
    }
    return rows;
}

CorpusReport evaluate_corpus(const std::string& manifest_path,
                             const PipelineConfig& cfg, int jobs) {
    std::vector<ManifestRow> rows = load_manifest(manifest_path);

    std::vector<RowResult> results(rows.size());
    auto work = [&](std::size_t i) {
        RowResult& r = results[i];
        r.row = rows[i];
        try {
            SampleInput input{rows[i].path, rows[i].mask_path, rows[i].landmarks_path};
            r.result = run_pipeline(cfg, input);
            r.ok = true;
        } catch (const std::exception& e) {
            r.ok = false;
            r.error = e.what();
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || rows.size() < 2) {
        for (std::size_t i = 0; i < rows.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= rows.size()) break;
                work(i);
            }
        };
        std::vector<std::thread> pool;
        int n_threads = std::min<int>(jobs, static_cast<int>(rows.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Merge in manifest order.
    CorpusReport report{ConfusionMatrix(pipeline_labels(cfg)), {}, 0};
    for (RowResult& r : results) {
        if (r.ok) {
            report.matrix.record(r.row.label, r.result.label);
        } else {
            report.failures++;
        }
        report.rows.push_back(std::move(r));
    }
    return report;
}

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

double metadata_or(const Classification& c, const char* key, double fallback) {
    auto it = c.metadata.find(key);
    return it == c.metadata.end() ? fallback : it->second;
}

} // namespace

std::string report_csv_string(const CorpusReport& report) {
    std::string out = "path,truth,predicted,distance,dominant_l,dominant_a,"
                      "dominant_b,cluster_share,status\n";
    for (const RowResult& r : report.rows) {
        out += r.row.path + "," + r.row.label + ",";
        if (r.ok) {
            const Classification& c = r.result;
            out += c.label + "," + fixed6(c.distance) + "," + fixed6(c.dominant.l) +
                   "," + fixed6(c.dominant.a) + "," + fixed6(c.dominant.b) + "," +
                   fixed6(metadata_or(c, "cluster_share", 1.0)) + ",ok\n";
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out += ",,,,,," + ("error: " + msg) + "\n";
        }
    }
    return out;
}

void write_report_csv(const std::string& path, const CorpusReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report: " + path);
    out << report_csv_string(report);
}

std::string format_metrics_table(const MetricsReport& report, std::size_t failures) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "overall accuracy: %.4f\n", report.accuracy);
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-16s %9s %9s %9s %9s\n", "class", "accuracy",
                  "precision", "recall", "f1");
    out += buf;
    for (const ClassMetrics& m : report.per_class) {
        std::snprintf(buf, sizeof(buf), "%-16s %9.4f %9.4f %9.4f %9.4f\n",
                      m.label.c_str(), m.accuracy, m.precision, m.recall, m.f1);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "%-16s %9.4f %9.4f %9.4f %9.4f\n", "macro",
                  report.macro_accuracy, report.macro_precision, report.macro_recall,
                  report.macro_f1);
    out += buf;
    if (failures > 0) {
        std::snprintf(buf, sizeof(buf), "failures: %zu\n", failures);
        out += buf;
    }
    return out;
}

} // namespace chromatone
