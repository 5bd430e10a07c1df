// Classification pipelines: skin tone (single- and two-stage), hair, iris
// and vein-based undertone. Extracted colors are matched against reference
// scales loaded from JSON config.

#pragma once

#include "chromatone/clustering.hpp"
#include "chromatone/color.hpp"
#include "chromatone/delta_e.hpp"
#include "chromatone/image.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chromatone {

struct ToneClass {
    std::string name;
    LabColor reference;
    std::vector<ToneClass> subclasses; // nonempty only in two-stage scales
};

struct ToneScale {
    std::string name;
    std::vector<ToneClass> classes; // scale order doubles as the tie-break order
    DistanceMetric metric = DistanceMetric::Ciede2000;
    DeltaEParams params;

    bool has_subclasses() const;
};

struct UndertoneRefs {
    LabColor warm{70.0, 20.0, 40.0};
    LabColor cool{60.0, -20.0, -30.0};
};

struct Classification {
    std::string label;
    double distance = 0.0;
    LabColor dominant;
    std::optional<std::pair<std::string, double>> runner_up;
    std::map<std::string, double> metadata; // cluster_share, pixel_count, ...
};

// Masked regions smaller than this carry no usable signal.
inline constexpr std::size_t kMinRegionPixels = 50;

// Long sides above this are downscaled before any pipeline runs.
inline constexpr int kMaxImageSide = 1024;

enum class ClusterSpace { Hsv, Rgb };
ClusterSpace parse_space(const std::string& name); // "hsv" | "rgb"

// --- scale config ----------------------------------------------------------

// JSON: {"name": str, "metric": str,
//        "classes": [{"name": str, "lab": [L,a,b], "subclasses": [...]?}]}
// A class with subclasses may omit "lab"; it defaults to the mean of its
// subclass references.
ToneScale load_tone_scale(const std::string& path);

// Same format restricted to exactly two classes named "Warm" and "Cool".
UndertoneRefs load_undertone_refs(const std::string& path);

// JSON: {"skin": {"l":[lo,hi],"a":[lo,hi],"b":[lo,hi]}, "vein": {...}}
struct UndertoneThresholds {
    LabThresholds skin;
    LabThresholds vein;
};
UndertoneThresholds load_thresholds(const std::string& path);

LabThresholds default_skin_thresholds();
LabThresholds default_vein_thresholds();

// Two-stage scale flattened to its subclasses, preserving order.
ToneScale flatten_scale(const ToneScale& scale);

// --- classification --------------------------------------------------------

// Nearest reference under the scale's metric; ties break to the earlier
// class in scale order.
Classification classify_nearest(const LabColor& dominant, const ToneScale& scale);

// Stage 1 selects the main class, stage 2 the subclass inside it. Requires
// every class to carry subclasses.
Classification classify_two_stage(const LabColor& dominant, const ToneScale& scale);

// Optional gamma and blur over the full image, then X-means over the masked
// pixels' HSV values; returns the largest cluster's center with h rounded to
// whole degrees and s, v to 1/255 steps.
HsvColor extract_dominant_skin_tone(const ImageBuffer& img, const PixelMask& skin_mask,
                                    const ClusterConfig& cfg, bool blur,
                                    int kernel_divisor, double gamma);

struct SkinOptions {
    ClusterConfig cluster;
    ClusterSpace space = ClusterSpace::Hsv;
    bool blur = true;
    int kernel_divisor = 20;
    double gamma = 1.0;
    bool two_stage = false;
};

// Full skin pipeline: resize, preprocess, cluster in the configured space,
// match against the scale.
Classification classify_skin(const ImageBuffer& img, const PixelMask& skin_mask,
                             const ToneScale& scale, const SkinOptions& opts);

// k-means (k=3) over masked LAB pixels; per category the score is the mean
// of the dominant-color and average-color distances.
Classification classify_hair(const ImageBuffer& img, const PixelMask& hair_mask,
                             const ToneScale& scale, std::uint64_t seed);

// Annulus around each eye's landmark centroid (radius 0.4x eye width, inner
// 0.35r excluded for the pupil); eye averages are averaged, converted to LAB
// and matched.
Classification classify_iris(const ImageBuffer& img, const Landmarks& landmarks,
                             const ToneScale& scale);

// Threshold skin and vein regions in LAB, isolate veins, close, average and
// compare against the warm/cool references with CIEDE2000. Ties go to Warm.
Classification classify_undertone(const ImageBuffer& img, const LabThresholds& skin_t,
                                  const LabThresholds& vein_t, const UndertoneRefs& refs,
                                  int close_radius);

// The comparison stage alone, for callers that already have a mean color.
Classification classify_undertone_from_mean(const LabColor& vein_mean,
                                            const UndertoneRefs& refs);

// Alternate strategy: cosine similarity of the LAB triples, argmax wins.
Classification classify_undertone_cosine(const LabColor& vein_mean,
                                         const UndertoneRefs& refs);

// --- uniform pipeline entry (CLI and evaluation harness) -------------------

enum class PipelineKind { Skin, SkinTwoStage, Hair, Iris, Undertone };
PipelineKind parse_pipeline(const std::string& name);
std::string pipeline_name(PipelineKind kind);

struct PipelineConfig {
    PipelineKind kind = PipelineKind::Skin;
    ToneScale scale;
    UndertoneRefs refs;
    ClusterConfig cluster;
    ClusterSpace space = ClusterSpace::Hsv;
    bool blur = true;
    int kernel_divisor = 20;
    double gamma = 1.0;
    LabThresholds skin_thresholds = default_skin_thresholds();
    LabThresholds vein_thresholds = default_vein_thresholds();
    int close_radius = 2;
    bool cosine = false;
};

struct SampleInput {
    std::string image_path;
    std::string mask_path;      // skin and hair
    std::string landmarks_path; // iris
};

Classification run_pipeline(const PipelineConfig& cfg, const SampleInput& input);

// Class labels a pipeline can emit, in scale order.
std::vector<std::string> pipeline_labels(const PipelineConfig& cfg);

} // namespace chromatone
