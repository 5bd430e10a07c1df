// Synthetic corpus generator: small images with known injected colors plus
// masks, landmarks, a manifest and (for vein corpora) a thresholds file.
// Ground truth is known by construction, which is what the desk-scale
// evaluation and acceptance tests run against.

#pragma once

#include "chromatone/classify.hpp"

#include <cstdint>
#include <string>

namespace chromatone {

enum class FixtureKind { Skin, Hair, Iris, Vein };
FixtureKind parse_fixture_kind(const std::string& name);

struct FixtureConfig {
    std::string out_dir;
    FixtureKind kind = FixtureKind::Skin;
    std::size_t count = 8;
    double noise_sigma = 0.0;
    std::uint64_t seed = 42;
};

struct FixtureResult {
    std::string manifest_path;
    std::string thresholds_path; // vein corpora only
    std::size_t images = 0;
};

// For skin/hair/iris the scale supplies the classes to inject; for vein the
// refs drive the ground-truth labels. The first two vein images always carry
// exactly the warm and cool reference colors.
FixtureResult generate_fixtures(const FixtureConfig& cfg, const ToneScale& scale,
                                const UndertoneRefs& refs = {});

// The LAB sampling box vein colors are drawn from, and the thresholds file
// contents that isolate them; exposed so tests can reason about membership.
LabThresholds vein_sampling_box();
UndertoneThresholds vein_fixture_thresholds();

} // namespace chromatone
