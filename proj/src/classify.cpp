#include "chromatone/classify.hpp"
#include "chromatone/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

using nlohmann::json;

namespace chromatone {

namespace {

double round_to_step(double v, double step) {
    return std::round(v / step) * step;
}

LabColor parse_lab(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.size() != 3)
        throw ConfigError(where + ": \"lab\" must be an array of three numbers");
    LabColor lab{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
    if (lab.l < 0.0 || lab.l > 100.0)
        throw ConfigError(where + ": L=" + std::to_string(lab.l) +
                          " outside [0,100]");
    return lab;
}

ToneClass parse_class(const json& node, std::set<std::string>& names, int depth) {
    if (!node.contains("name") || !node["name"].is_string())
        throw ConfigError("tone class missing \"name\"");
    ToneClass cls;
    cls.name = node["name"].get<std::string>();
    if (!names.insert(cls.name).second)
        throw ConfigError("duplicate class name: " + cls.name);

    if (node.contains("subclasses")) {
        if (depth > 0)
            throw ConfigError("class " + cls.name + ": nested subclasses are not supported");
        const json& subs = node["subclasses"];
        if (!subs.is_array() || subs.empty())
            throw ConfigError("class " + cls.name + ": \"subclasses\" must be a nonempty array");
        for (const json& sub : subs)
            cls.subclasses.push_back(parse_class(sub, names, depth + 1));
    }

    if (node.contains("lab")) {
        cls.reference = parse_lab(node["lab"], "class " + cls.name);
    } else if (!cls.subclasses.empty()) {
        // Main-class reference defaults to the mean of its subclasses.
        double l = 0, a = 0, b = 0;
        for (const ToneClass& sub : cls.subclasses) {
            l += sub.reference.l;
            a += sub.reference.a;
            b += sub.reference.b;
        }
        double n = static_cast<double>(cls.subclasses.size());
        cls.reference = {l / n, a / n, b / n};
    } else {
        throw ConfigError("class " + cls.name + " has neither \"lab\" nor \"subclasses\"");
    }
    return cls;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("JSON parse error in " + path + ": " + e.what());
    }
    return doc;
}

std::array<double, 2> parse_interval(const json& node, const std::string& where) {
    if (!node.is_array() || node.size() != 2)
        throw ConfigError(where + " must be a [min,max] pair");
    double lo = node[0].get<double>(), hi = node[1].get<double>();
    if (lo > hi)
        throw ConfigError(where + ": min " + std::to_string(lo) + " > max " +
                          std::to_string(hi));
    return {lo, hi};
}

LabThresholds parse_thresholds(const json& node, const std::string& where) {
    LabThresholds t;
    auto l = parse_interval(node.at("l"), where + ".l");
    auto a = parse_interval(node.at("a"), where + ".a");
    auto b = parse_interval(node.at("b"), where + ".b");
    t.l_min = l[0];
    t.l_max = l[1];
    t.a_min = a[0];
    t.a_max = a[1];
    t.b_min = b[0];
    t.b_max = b[1];
    return t;
}

// Shared nearest-reference scan over an explicit (name, reference) list.
Classification nearest_reference(const LabColor& dominant,
                                 const std::vector<const ToneClass*>& classes,
                                 DistanceMetric metric, const DeltaEParams& params) {
    Classification out;
    out.dominant = dominant;
    double best = std::numeric_limits<double>::max();
    double second = std::numeric_limits<double>::max();
    const ToneClass* best_cls = nullptr;
    const ToneClass* second_cls = nullptr;
    for (const ToneClass* cls : classes) {
        double d = lab_distance(metric, dominant, cls->reference, params);
        if (d < best) {
            second = best;
            second_cls = best_cls;
            best = d;
            best_cls = cls;
        } else if (d < second) {
            second = d;
            second_cls = cls;
        }
    }
    out.label = best_cls->name;
    out.distance = best;
    if (second_cls) out.runner_up = {second_cls->name, second};
    return out;
}

std::vector<const ToneClass*> class_pointers(const ToneScale& scale) {
    std::vector<const ToneClass*> out;
    out.reserve(scale.classes.size());
    for (const ToneClass& c : scale.classes) out.push_back(&c);
    return out;
}

void require_min_pixels(std::size_t n, const char* what) {
    if (n < kMinRegionPixels)
        throw PipelineError(std::string(what) + " mask has only " + std::to_string(n) +
                            " pixels; need at least " + std::to_string(kMinRegionPixels));
}

PointSet hsv_points(const std::vector<RgbColor>& pixels) {
    PointSet pts;
    pts.dim = 3;
    pts.values.reserve(pixels.size() * 3);
    for (RgbColor p : pixels) {
        HsvColor hsv = rgb_to_hsv(p);
        // Scale s and v to the same magnitude as h; hue is used as-is with
        // no circular wraparound, matching plain Euclidean clustering.
        pts.values.push_back(hsv.h);
        pts.values.push_back(hsv.s * 255.0);
        pts.values.push_back(hsv.v * 255.0);
    }
    return pts;
}

PointSet rgb_points(const std::vector<RgbColor>& pixels) {
    PointSet pts;
    pts.dim = 3;
    pts.values.reserve(pixels.size() * 3);
    for (RgbColor p : pixels) {
        pts.values.push_back(p.r);
        pts.values.push_back(p.g);
        pts.values.push_back(p.b);
    }
    return pts;
}

PointSet lab_points(const std::vector<RgbColor>& pixels) {
    PointSet pts;
    pts.dim = 3;
    pts.values.reserve(pixels.size() * 3);
    for (RgbColor p : pixels) {
        LabColor lab = rgb_to_lab(p);
        pts.values.push_back(lab.l);
        pts.values.push_back(lab.a);
        pts.values.push_back(lab.b);
    }
    return pts;
}

} // namespace

bool ToneScale::has_subclasses() const {
    return !classes.empty() &&
           std::all_of(classes.begin(), classes.end(),
                       [](const ToneClass& c) { return !c.subclasses.empty(); });
}

ClusterSpace parse_space(const std::string& name) {
    if (name == "hsv") return ClusterSpace::Hsv;
    if (name == "rgb") return ClusterSpace::Rgb;
    throw ConfigError("unknown clustering space: " + name + " (expected hsv or rgb)");
}

ToneScale load_tone_scale(const std::string& path) {
    json doc = load_json_file(path);
    ToneScale scale;
    if (doc.contains("name")) scale.name = doc["name"].get<std::string>();
    if (doc.contains("metric"))
        scale.metric = parse_metric(doc["metric"].get<std::string>());
    if (!doc.contains("classes") || !doc["classes"].is_array())
        throw ConfigError(path + ": missing \"classes\" array");

    std::set<std::string> names;
    for (const json& node : doc["classes"])
        scale.classes.push_back(parse_class(node, names, 0));
    if (scale.classes.size() < 2)
        throw ConfigError(path + ": a scale needs at least 2 classes");
    return scale;
}

UndertoneRefs load_undertone_refs(const std::string& path) {
    ToneScale scale = load_tone_scale(path);
    if (scale.classes.size() != 2)
        throw ConfigError(path + ": undertone references need exactly 2 classes");
    UndertoneRefs refs;
    bool warm_seen = false, cool_seen = false;
    for (const ToneClass& cls : scale.classes) {
        if (cls.name == "Warm") {
            refs.warm = cls.reference;
            warm_seen = true;
        } else if (cls.name == "Cool") {
            refs.cool = cls.reference;
            cool_seen = true;
        }
    }
    if (!warm_seen || !cool_seen)
        throw ConfigError(path + ": classes must be named \"Warm\" and \"Cool\"");
    if (refs.warm.l == refs.cool.l && refs.warm.a == refs.cool.a &&
        refs.warm.b == refs.cool.b)
        throw ConfigError(path + ": warm and cool references must differ");
    return refs;
}

UndertoneThresholds load_thresholds(const std::string& path) {
    json doc = load_json_file(path);
    UndertoneThresholds t;
    t.skin = parse_thresholds(doc.at("skin"), path + ": skin");
    t.vein = parse_thresholds(doc.at("vein"), path + ": vein");
    return t;
}

LabThresholds default_skin_thresholds() {
    return {35.0, 90.0, 0.0, 35.0, 5.0, 45.0};
}

LabThresholds default_vein_thresholds() {
    return {25.0, 75.0, -30.0, 20.0, -40.0, 10.0};
}

ToneScale flatten_scale(const ToneScale& scale) {
    ToneScale flat;
    flat.name = scale.name;
    flat.metric = scale.metric;
    flat.params = scale.params;
    for (const ToneClass& main : scale.classes) {
        if (main.subclasses.empty()) {
            flat.classes.push_back(main);
        } else {
            for (const ToneClass& sub : main.subclasses)
                flat.classes.push_back(sub);
        }
    }
    return flat;
}

Classification classify_nearest(const LabColor& dominant, const ToneScale& scale) {
    if (scale.classes.empty()) throw ConfigError("empty tone scale");
    return nearest_reference(dominant, class_pointers(scale), scale.metric, scale.params);
}

Classification classify_two_stage(const LabColor& dominant, const ToneScale& scale) {
    if (!scale.has_subclasses())
        throw ConfigError("two-stage classification needs subclasses on every class");

    Classification main = nearest_reference(dominant, class_pointers(scale),
                                            scale.metric, scale.params);
    const ToneClass* main_cls = nullptr;
    for (const ToneClass& c : scale.classes)
        if (c.name == main.label) main_cls = &c;

    std::vector<const ToneClass*> subs;
    for (const ToneClass& s : main_cls->subclasses) subs.push_back(&s);
    Classification out = nearest_reference(dominant, subs, scale.metric, scale.params);
    out.metadata["main_class_distance"] = main.distance;
    return out;
}

HsvColor extract_dominant_skin_tone(const ImageBuffer& img, const PixelMask& skin_mask,
                                    const ClusterConfig& cfg, bool blur,
                                    int kernel_divisor, double gamma) {
    ImageBuffer work = img;
    if (gamma != 1.0) work = gamma_correct(work, gamma);
    if (blur) work = gaussian_blur(work, kernel_divisor);

    std::vector<RgbColor> pixels = masked_pixels(work, skin_mask);
    require_min_pixels(pixels.size(), "skin");

    ClusterModel model = xmeans(hsv_points(pixels), cfg);
    DominantCluster dom = dominant_cluster(model);

    HsvColor hsv;
    hsv.h = round_to_step(dom.center[0], 1.0);
    if (hsv.h >= 360.0) hsv.h -= 360.0;
    if (hsv.h < 0.0) hsv.h += 360.0;
    hsv.s = std::clamp(round_to_step(dom.center[1] / 255.0, 1.0 / 255.0), 0.0, 1.0);
    hsv.v = std::clamp(round_to_step(dom.center[2] / 255.0, 1.0 / 255.0), 0.0, 1.0);
    return hsv;
}

Classification classify_skin(const ImageBuffer& img, const PixelMask& skin_mask,
                             const ToneScale& scale, const SkinOptions& opts) {
    ImageBuffer work = resize_to_max_side(img, kMaxImageSide);
    PixelMask mask = resize_mask_to_max_side(skin_mask, kMaxImageSide);
    if (work.width != mask.width || work.height != mask.height)
        throw DimensionMismatchError("image and mask disagree after resize");

    if (opts.gamma != 1.0) work = gamma_correct(work, opts.gamma);
    int kernel = 0;
    if (opts.blur) {
        kernel = blur_kernel_size(work.width, work.height, opts.kernel_divisor);
        work = gaussian_blur(work, opts.kernel_divisor);
    }

    std::vector<RgbColor> pixels = masked_pixels(work, mask);
    require_min_pixels(pixels.size(), "skin");

    LabColor dominant_lab;
    HsvColor dominant_hsv;
    double share;
    std::size_t clusters;
    if (opts.space == ClusterSpace::Hsv) {
        ClusterModel model = xmeans(hsv_points(pixels), opts.cluster);
        DominantCluster dom = dominant_cluster(model);
        dominant_hsv.h = round_to_step(dom.center[0], 1.0);
        if (dominant_hsv.h >= 360.0) dominant_hsv.h -= 360.0;
        if (dominant_hsv.h < 0.0) dominant_hsv.h += 360.0;
        dominant_hsv.s =
            std::clamp(round_to_step(dom.center[1] / 255.0, 1.0 / 255.0), 0.0, 1.0);
        dominant_hsv.v =
            std::clamp(round_to_step(dom.center[2] / 255.0, 1.0 / 255.0), 0.0, 1.0);
        dominant_lab = rgb_to_lab(hsv_to_rgb(dominant_hsv));
        share = dom.share;
        clusters = model.centers.size();
    } else {
        ClusterModel model = xmeans(rgb_points(pixels), opts.cluster);
        DominantCluster dom = dominant_cluster(model);
        RgbColor rgb{
            static_cast<std::uint8_t>(std::lround(std::clamp(dom.center[0], 0.0, 255.0))),
            static_cast<std::uint8_t>(std::lround(std::clamp(dom.center[1], 0.0, 255.0))),
            static_cast<std::uint8_t>(std::lround(std::clamp(dom.center[2], 0.0, 255.0)))};
        dominant_hsv = rgb_to_hsv(rgb);
        dominant_lab = rgb_to_lab(rgb);
        share = dom.share;
        clusters = model.centers.size();
    }

    Classification out = opts.two_stage ? classify_two_stage(dominant_lab, scale)
                                        : classify_nearest(dominant_lab, scale);
    out.metadata["cluster_share"] = share;
    out.metadata["clusters"] = static_cast<double>(clusters);
    out.metadata["pixel_count"] = static_cast<double>(pixels.size());
    out.metadata["blur_kernel"] = static_cast<double>(kernel);
    out.metadata["dominant_h"] = dominant_hsv.h;
    out.metadata["dominant_s"] = dominant_hsv.s;
    out.metadata["dominant_v"] = dominant_hsv.v;
    return out;
}

Classification classify_hair(const ImageBuffer& img, const PixelMask& hair_mask,
                             const ToneScale& scale, std::uint64_t seed) {
    ImageBuffer work = resize_to_max_side(img, kMaxImageSide);
    PixelMask mask = resize_mask_to_max_side(hair_mask, kMaxImageSide);
    std::vector<RgbColor> pixels = masked_pixels(work, mask);
    require_min_pixels(pixels.size(), "hair");

    PointSet pts = lab_points(pixels);
    ClusterConfig cfg;
    cfg.seed = seed;

    // k=3 unless the region has fewer distinct colors.
    std::size_t k = 3;
    ClusterModel model;
    for (;;) {
        try {
            model = kmeans(pts, k, cfg);
            break;
        } catch (const PipelineError&) {
            if (k == 1) throw;
            --k;
        }
    }
    DominantCluster dom = dominant_cluster(model);
    LabColor dominant{dom.center[0], dom.center[1], dom.center[2]};
    LabColor average = mean_lab(pixels);

    Classification out;
    out.dominant = dominant;
    double best = std::numeric_limits<double>::max();
    double second = std::numeric_limits<double>::max();
    const ToneClass* best_cls = nullptr;
    const ToneClass* second_cls = nullptr;
    for (const ToneClass& cls : scale.classes) {
        double combined =
            (lab_distance(scale.metric, dominant, cls.reference, scale.params) +
             lab_distance(scale.metric, average, cls.reference, scale.params)) /
            2.0;
        if (combined < best) {
            second = best;
            second_cls = best_cls;
            best = combined;
            best_cls = &cls;
        } else if (combined < second) {
            second = combined;
            second_cls = &cls;
        }
    }
    out.label = best_cls->name;
    out.distance = best;
    if (second_cls) out.runner_up = {second_cls->name, second};
    out.metadata["cluster_share"] = dom.share;
    out.metadata["pixel_count"] = static_cast<double>(pixels.size());
    out.metadata["average_l"] = average.l;
    out.metadata["average_a"] = average.a;
    out.metadata["average_b"] = average.b;
    return out;
}

namespace {

struct EyeAverage {
    double r = 0, g = 0, b = 0;
    std::size_t pixels = 0;
};

// 0-based landmark ranges per eye; the first and fourth point are the
// horizontal corners.
EyeAverage eye_average(const ImageBuffer& img, const Landmarks& lm, int first) {
    double cx = 0, cy = 0;
    for (int i = first; i < first + 6; ++i) {
        cx += lm.points[i][0];
        cy += lm.points[i][1];
    }
    cx /= 6.0;
    cy /= 6.0;

    double width = std::hypot(lm.points[first + 3][0] - lm.points[first][0],
                              lm.points[first + 3][1] - lm.points[first][1]);
    if (width <= 0.0)
        throw PipelineError("degenerate eye landmarks: zero eye width");
    double radius = 0.4 * width;

    PixelMask outer = circular_mask(cx, cy, radius, img.width, img.height);
    PixelMask pupil = circular_mask(cx, cy, 0.35 * radius, img.width, img.height);
    PixelMask annulus = subtract_mask(outer, pupil);

    std::vector<RgbColor> pixels = masked_pixels(img, annulus);
    if (pixels.empty())
        throw EmptyRegionError("empty iris annulus around (" + std::to_string(cx) +
                               ", " + std::to_string(cy) + ")");
    EyeAverage avg;
    for (RgbColor p : pixels) {
        avg.r += p.r;
        avg.g += p.g;
        avg.b += p.b;
    }
    avg.r /= static_cast<double>(pixels.size());
    avg.g /= static_cast<double>(pixels.size());
    avg.b /= static_cast<double>(pixels.size());
    avg.pixels = pixels.size();
    return avg;
}

} // namespace

Classification classify_iris(const ImageBuffer& img, const Landmarks& landmarks,
                             const ToneScale& scale) {
    ImageBuffer work = resize_to_max_side(img, kMaxImageSide);
    Landmarks lm = landmarks;
    if (work.width != img.width) {
        double scale_xy = static_cast<double>(work.width) / img.width;
        for (auto& p : lm.points) {
            p[0] *= scale_xy;
            p[1] *= scale_xy;
        }
    }

    EyeAverage left = eye_average(work, lm, 36);  // points 37-42, 1-based
    EyeAverage right = eye_average(work, lm, 42); // points 43-48, 1-based

    double r = (left.r + right.r) / 2.0;
    double g = (left.g + right.g) / 2.0;
    double b = (left.b + right.b) / 2.0;
    RgbColor avg{static_cast<std::uint8_t>(std::lround(std::clamp(r, 0.0, 255.0))),
                 static_cast<std::uint8_t>(std::lround(std::clamp(g, 0.0, 255.0))),
                 static_cast<std::uint8_t>(std::lround(std::clamp(b, 0.0, 255.0)))};

    Classification out = classify_nearest(rgb_to_lab(avg), scale);
    out.metadata["cluster_share"] = 1.0;
    out.metadata["pixel_count"] = static_cast<double>(left.pixels + right.pixels);
    out.metadata["left_eye_pixels"] = static_cast<double>(left.pixels);
    out.metadata["right_eye_pixels"] = static_cast<double>(right.pixels);
    return out;
}

Classification classify_undertone_from_mean(const LabColor& vein_mean,
                                            const UndertoneRefs& refs) {
    double warm_delta = ciede2000(vein_mean, refs.warm);
    double cool_delta = ciede2000(vein_mean, refs.cool);

    Classification out;
    out.dominant = vein_mean;
    if (warm_delta <= cool_delta) { // ties go to Warm
        out.label = "Warm";
        out.distance = warm_delta;
        out.runner_up = {std::string("Cool"), cool_delta};
    } else {
        out.label = "Cool";
        out.distance = cool_delta;
        out.runner_up = {std::string("Warm"), warm_delta};
    }
    out.metadata["warm_delta"] = warm_delta;
    out.metadata["cool_delta"] = cool_delta;
    out.metadata["cluster_share"] = 1.0;
    return out;
}

Classification classify_undertone(const ImageBuffer& img, const LabThresholds& skin_t,
                                  const LabThresholds& vein_t, const UndertoneRefs& refs,
                                  int close_radius) {
    ImageBuffer work = resize_to_max_side(img, kMaxImageSide);
    PixelMask skin = lab_threshold_mask(work, skin_t);
    PixelMask vein_raw = lab_threshold_mask(work, vein_t);
    PixelMask veins = subtract_mask(vein_raw, skin);
    PixelMask closed = morphological_close(veins, close_radius);

    std::vector<RgbColor> pixels = masked_pixels(work, closed);
    if (pixels.empty()) throw EmptyRegionError("no veins detected");

    Classification out = classify_undertone_from_mean(mean_lab(pixels), refs);
    out.metadata["vein_pixels"] = static_cast<double>(pixels.size());
    out.metadata["skin_pixels"] = static_cast<double>(skin.count());
    return out;
}

Classification classify_undertone_cosine(const LabColor& vein_mean,
                                         const UndertoneRefs& refs) {
    auto norm = [](const LabColor& c) {
        return std::sqrt(c.l * c.l + c.a * c.a + c.b * c.b);
    };
    auto dot = [](const LabColor& x, const LabColor& y) {
        return x.l * y.l + x.a * y.a + x.b * y.b;
    };
    double nm = norm(vein_mean), nw = norm(refs.warm), nc = norm(refs.cool);
    if (nm == 0.0 || nw == 0.0 || nc == 0.0)
        throw PipelineError("cosine undertone comparison needs nonzero LAB vectors");

    double warm_sim = dot(vein_mean, refs.warm) / (nm * nw);
    double cool_sim = dot(vein_mean, refs.cool) / (nm * nc);

    Classification out;
    out.dominant = vein_mean;
    if (warm_sim >= cool_sim) {
        out.label = "Warm";
        out.distance = 1.0 - warm_sim;
        out.runner_up = {std::string("Cool"), 1.0 - cool_sim};
    } else {
        out.label = "Cool";
        out.distance = 1.0 - cool_sim;
        out.runner_up = {std::string("Warm"), 1.0 - warm_sim};
    }
    out.metadata["warm_similarity"] = warm_sim;
    out.metadata["cool_similarity"] = cool_sim;
    out.metadata["cluster_share"] = 1.0;
    return out;
}

PipelineKind parse_pipeline(const std::string& name) {
    if (name == "skin") return PipelineKind::Skin;
    if (name == "skin2stage") return PipelineKind::SkinTwoStage;
    if (name == "hair") return PipelineKind::Hair;
    if (name == "iris") return PipelineKind::Iris;
    if (name == "undertone") return PipelineKind::Undertone;
    throw ConfigError("unknown pipeline: " + name);
}

std::string pipeline_name(PipelineKind kind) {
    switch (kind) {
    case PipelineKind::Skin: return "skin";
    case PipelineKind::SkinTwoStage: return "skin2stage";
    case PipelineKind::Hair: return "hair";
    case PipelineKind::Iris: return "iris";
    case PipelineKind::Undertone: return "undertone";
    }
    return "skin";
}

Classification run_pipeline(const PipelineConfig& cfg, const SampleInput& input) {
    switch (cfg.kind) {
    case PipelineKind::Skin:
    case PipelineKind::SkinTwoStage: {
        if (input.mask_path.empty())
            throw InputError("skin pipeline requires a mask path");
        ImageBuffer img = decode_image(input.image_path);
        PixelMask mask = load_mask(input.mask_path, img);
        SkinOptions opts;
        opts.cluster = cfg.cluster;
        opts.space = cfg.space;
        opts.blur = cfg.blur;
        opts.kernel_divisor = cfg.kernel_divisor;
        opts.gamma = cfg.gamma;
        opts.two_stage = cfg.kind == PipelineKind::SkinTwoStage;
        return classify_skin(img, mask, cfg.scale, opts);
    }
    case PipelineKind::Hair: {
        if (input.mask_path.empty())
            throw InputError("hair pipeline requires a mask path");
        ImageBuffer img = decode_image(input.image_path);
        PixelMask mask = load_mask(input.mask_path, img);
        return classify_hair(img, mask, cfg.scale, cfg.cluster.seed);
    }
    case PipelineKind::Iris: {
        if (input.landmarks_path.empty())
            throw InputError("iris pipeline requires a landmarks path");
        ImageBuffer img = decode_image(input.image_path);
        Landmarks lm = load_landmarks(input.landmarks_path);
        return classify_iris(img, lm, cfg.scale);
    }
    case PipelineKind::Undertone: {
        ImageBuffer img = decode_image(input.image_path);
        if (cfg.cosine) {
            ImageBuffer work = resize_to_max_side(img, kMaxImageSide);
            PixelMask skin = lab_threshold_mask(work, cfg.skin_thresholds);
            PixelMask vein_raw = lab_threshold_mask(work, cfg.vein_thresholds);
            PixelMask closed =
                morphological_close(subtract_mask(vein_raw, skin), cfg.close_radius);
            std::vector<RgbColor> pixels = masked_pixels(work, closed);
            if (pixels.empty()) throw EmptyRegionError("no veins detected");
            Classification out = classify_undertone_cosine(mean_lab(pixels), cfg.refs);
            out.metadata["vein_pixels"] = static_cast<double>(pixels.size());
            return out;
        }
        return classify_undertone(img, cfg.skin_thresholds, cfg.vein_thresholds,
                                  cfg.refs, cfg.close_radius);
    }
    }
    throw ConfigError("unhandled pipeline kind");
}

std::vector<std::string> pipeline_labels(const PipelineConfig& cfg) {
    std::vector<std::string> labels;
    if (cfg.kind == PipelineKind::Undertone) {
        labels = {"Warm", "Cool"};
    } else if (cfg.kind == PipelineKind::SkinTwoStage) {
        for (const ToneClass& main : flatten_scale(cfg.scale).classes)
            labels.push_back(main.name);
    } else {
        for (const ToneClass& cls : cfg.scale.classes) labels.push_back(cls.name);
    }
    return labels;
}

} // namespace chromatone
