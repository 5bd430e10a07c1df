#include "chromatone/fixtures.hpp"
#include "chromatone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

namespace fs = std::filesystem;

namespace chromatone {

namespace {

double canonical_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; hand-rolled so corpora are identical across standard libraries.
double gaussian(std::mt19937_64& rng, double sigma) {
    double u1 = std::max(canonical_u01(rng), 0x1.0p-53);
    double u2 = canonical_u01(rng);
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::uint8_t noisy_channel(std::uint8_t v, double sigma, std::mt19937_64& rng) {
    if (sigma <= 0.0) return v;
    double out = v + gaussian(rng, sigma);
    return static_cast<std::uint8_t>(std::lround(std::clamp(out, 0.0, 255.0)));
}

RgbColor noisy(RgbColor c, double sigma, std::mt19937_64& rng) {
    return {noisy_channel(c.r, sigma, rng), noisy_channel(c.g, sigma, rng),
            noisy_channel(c.b, sigma, rng)};
}

void fill_rect(ImageBuffer& img, int x0, int y0, int w, int h, RgbColor color,
               double sigma, std::mt19937_64& rng) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x)
            img.at(x, y) = noisy(color, sigma, rng);
}

void fill_disk(ImageBuffer& img, double cx, double cy, double radius, RgbColor color,
               double sigma, std::mt19937_64& rng) {
    PixelMask disk = circular_mask(cx, cy, radius, img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (disk.get(x, y)) img.at(x, y) = noisy(color, sigma, rng);
}

std::string zero_pad(std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03zu", n);
    return buf;
}

struct ManifestWriter {
    std::string text = "path,label,mask_path,landmarks_path\n";
    void add(const std::string& image, const std::string& label,
             const std::string& mask, const std::string& landmarks) {
        text += image + "," + label + "," + mask + "," + landmarks + "\n";
    }
};

Landmarks face_landmarks(double left_cx, double right_cx, double cy, double half_width) {
    Landmarks lm;
    // Jaw, brows, nose and mouth: a plausible oval; only the eye points are
    // read by the iris pipeline.
    for (int i = 0; i < 68; ++i) {
        double t = 2.0 * 3.14159265358979323846 * i / 68.0;
        lm.points[i] = {64.0 + 40.0 * std::cos(t), 64.0 + 52.0 * std::sin(t)};
    }
    auto eye = [&](int base, double cx) {
        lm.points[base + 0] = {cx - half_width, cy};
        lm.points[base + 1] = {cx - half_width / 2.0, cy - 4.0};
        lm.points[base + 2] = {cx + half_width / 2.0, cy - 4.0};
        lm.points[base + 3] = {cx + half_width, cy};
        lm.points[base + 4] = {cx + half_width / 2.0, cy + 4.0};
        lm.points[base + 5] = {cx - half_width / 2.0, cy + 4.0};
    };
    eye(36, left_cx);
    eye(42, right_cx);
    return lm;
}

} // namespace

FixtureKind parse_fixture_kind(const std::string& name) {
    if (name == "skin") return FixtureKind::Skin;
    if (name == "hair") return FixtureKind::Hair;
    if (name == "iris") return FixtureKind::Iris;
    if (name == "vein") return FixtureKind::Vein;
    throw ConfigError("unknown fixture kind: " + name);
}

LabThresholds vein_sampling_box() {
    return {45.0, 75.0, -30.0, 30.0, -38.0, 43.0};
}

UndertoneThresholds vein_fixture_thresholds() {
    UndertoneThresholds t;
    t.skin = {83.0, 95.0, 0.0, 14.0, 4.0, 22.0}; // tight box around the wrist background
    t.vein = {40.0, 80.0, -35.0, 35.0, -45.0, 50.0};
    return t;
}

FixtureResult generate_fixtures(const FixtureConfig& cfg, const ToneScale& scale,
                                const UndertoneRefs& refs) {
    if (cfg.count == 0) throw ConfigError("fixture count must be positive");
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec || !fs::is_directory(cfg.out_dir))
        throw InputError("cannot create fixture directory: " + cfg.out_dir);

    std::mt19937_64 rng(cfg.seed);
    ManifestWriter manifest;
    FixtureResult result;

    const int side = 128;
    const RgbColor backdrop{40, 44, 48};

    switch (cfg.kind) {
    case FixtureKind::Skin: {
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const ToneClass& cls = scale.classes[i % scale.classes.size()];
            RgbColor color = lab_to_rgb(cls.reference);

            ImageBuffer img = make_image(side, side, backdrop);
            fill_rect(img, 24, 24, 80, 80, color, cfg.noise_sigma, rng);
            PixelMask mask = make_mask(side, side, false);
            for (int y = 24; y < 104; ++y)
                for (int x = 24; x < 104; ++x) mask.set(x, y, true);

            std::string stem = "skin_" + zero_pad(i);
            write_png((fs::path(cfg.out_dir) / (stem + ".png")).string(), img);
            write_png_gray((fs::path(cfg.out_dir) / (stem + "_mask.png")).string(), mask);
            manifest.add(stem + ".png", cls.name, stem + "_mask.png", "");
            result.images++;
        }
        break;
    }
    case FixtureKind::Hair: {
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const ToneClass& cls = scale.classes[i % scale.classes.size()];
            RgbColor color = lab_to_rgb(cls.reference);

            ImageBuffer img = make_image(side, side, backdrop);
            fill_rect(img, 16, 8, 96, 44, color, cfg.noise_sigma, rng);
            PixelMask mask = make_mask(side, side, false);
            for (int y = 8; y < 52; ++y)
                for (int x = 16; x < 112; ++x) mask.set(x, y, true);

            std::string stem = "hair_" + zero_pad(i);
            write_png((fs::path(cfg.out_dir) / (stem + ".png")).string(), img);
            write_png_gray((fs::path(cfg.out_dir) / (stem + "_mask.png")).string(), mask);
            manifest.add(stem + ".png", cls.name, stem + "_mask.png", "");
            result.images++;
        }
        break;
    }
    case FixtureKind::Iris: {
        const double eye_half_width = 12.0;
        const double cy = 56.0, left_cx = 40.0, right_cx = 88.0;
        const double iris_radius = 0.4 * 2.0 * eye_half_width;
        for (std::size_t i = 0; i < cfg.count; ++i) {
            const ToneClass& cls = scale.classes[i % scale.classes.size()];
            RgbColor color = lab_to_rgb(cls.reference);

            ImageBuffer img = make_image(side, side, RgbColor{225, 218, 210});
            for (double cx : {left_cx, right_cx}) {
                fill_disk(img, cx, cy, iris_radius, color, cfg.noise_sigma, rng);
                fill_disk(img, cx, cy, 0.35 * iris_radius, RgbColor{12, 10, 10},
                          cfg.noise_sigma, rng);
            }
            Landmarks lm = face_landmarks(left_cx, right_cx, cy, eye_half_width);

            std::string stem = "iris_" + zero_pad(i);
            write_png((fs::path(cfg.out_dir) / (stem + ".png")).string(), img);
            write_landmarks((fs::path(cfg.out_dir) / (stem + ".txt")).string(), lm);
            manifest.add(stem + ".png", cls.name, "", stem + ".txt");
            result.images++;
        }
        break;
    }
    case FixtureKind::Vein: {
        UndertoneThresholds thresholds = vein_fixture_thresholds();
        LabThresholds box = vein_sampling_box();
        const RgbColor wrist = lab_to_rgb(LabColor{88.0, 6.0, 12.0});

        // Sampled vein colors must survive the fixture thresholds after
        // 8-bit quantization: inside the vein box, outside the skin box.
        auto admissible = [&](const LabColor& lab) {
            const LabThresholds& v = thresholds.vein;
            const LabThresholds& s = thresholds.skin;
            bool in_vein = lab.l >= v.l_min && lab.l <= v.l_max && lab.a >= v.a_min &&
                           lab.a <= v.a_max && lab.b >= v.b_min && lab.b <= v.b_max;
            bool in_skin = lab.l >= s.l_min && lab.l <= s.l_max && lab.a >= s.a_min &&
                           lab.a <= s.a_max && lab.b >= s.b_min && lab.b <= s.b_max;
            return in_vein && !in_skin;
        };

        for (std::size_t i = 0; i < cfg.count; ++i) {
            LabColor injected;
            if (i == 0) {
                injected = refs.warm;
            } else if (i == 1) {
                injected = refs.cool;
            } else {
                for (;;) {
                    injected.l = box.l_min + canonical_u01(rng) * (box.l_max - box.l_min);
                    injected.a = box.a_min + canonical_u01(rng) * (box.a_max - box.a_min);
                    injected.b = box.b_min + canonical_u01(rng) * (box.b_max - box.b_min);
                    bool clamped = false;
                    RgbColor q = lab_to_rgb(injected, &clamped);
                    if (!clamped && admissible(rgb_to_lab(q))) break;
                }
            }
            RgbColor vein_rgb = lab_to_rgb(injected);
            LabColor achieved = rgb_to_lab(vein_rgb); // what the image can carry
            std::string label =
                ciede2000(achieved, refs.warm) <= ciede2000(achieved, refs.cool)
                    ? "Warm"
                    : "Cool";

            const int w = 96, h = 96;
            ImageBuffer img = make_image(w, h, wrist);
            if (cfg.noise_sigma > 0.0)
                fill_rect(img, 0, 0, w, h, wrist, cfg.noise_sigma, rng);
            // Two solid vein strokes; closing keeps rectangles unchanged, so a
            // noise-free corpus preserves the injected color exactly.
            fill_rect(img, 26, 14, 8, 68, vein_rgb, cfg.noise_sigma, rng);
            fill_rect(img, 58, 14, 8, 68, vein_rgb, cfg.noise_sigma, rng);

            std::string stem = "vein_" + zero_pad(i);
            write_png((fs::path(cfg.out_dir) / (stem + ".png")).string(), img);
            manifest.add(stem + ".png", label, "", "");
            result.images++;
        }

        std::string tpath = (fs::path(cfg.out_dir) / "thresholds.json").string();
        std::ofstream out(tpath, std::ios::binary);
        char buf[512];
        std::snprintf(buf, sizeof(buf),
                      "{\n"
                      "  \"skin\": {\"l\": [%g, %g], \"a\": [%g, %g], \"b\": [%g, %g]},\n"
                      "  \"vein\": {\"l\": [%g, %g], \"a\": [%g, %g], \"b\": [%g, %g]}\n"
                      "}\n",
                      thresholds.skin.l_min, thresholds.skin.l_max, thresholds.skin.a_min,
                      thresholds.skin.a_max, thresholds.skin.b_min, thresholds.skin.b_max,
                      thresholds.vein.l_min, thresholds.vein.l_max, thresholds.vein.a_min,
                      thresholds.vein.a_max, thresholds.vein.b_min, thresholds.vein.b_max);
        out << buf;
        result.thresholds_path = tpath;
        break;
    }
    }

    result.manifest_path = (fs::path(cfg.out_dir) / "manifest.csv").string();
    std::ofstream mout(result.manifest_path, std::ios::binary);
    if (!mout) throw InputError("cannot write manifest: " + result.manifest_path);
    mout << manifest.text;
    return result;
}

} // namespace chromatone
