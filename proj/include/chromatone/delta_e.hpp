// Color-difference metrics: Euclidean, CIE76, CIE94 (graphic arts) and
// CIEDE2000 with the full chroma/hue weighting and rotation terms.

#pragma once

#include "chromatone/color.hpp"

#include <array>
#include <string>

namespace chromatone {

// Parametric factors kL, kC, kH. 1.0 each for reference conditions.
struct DeltaEParams {
    double k_l = 1.0;
    double k_c = 1.0;
    double k_h = 1.0;
};

enum class DistanceMetric {
    EuclideanRgb,
    EuclideanLab,
    Cie76,
    Cie94,
    Ciede2000,
};

// Canonical names used by config files and CLI flags:
// euclidean-rgb, euclidean-lab, cie76, cie94, ciede2000.
std::string metric_name(DistanceMetric metric);
DistanceMetric parse_metric(const std::string& name); // throws ConfigError

double euclidean_distance(const std::array<double, 3>& p,
                          const std::array<double, 3>& q);

double cie76(const LabColor& a, const LabColor& b);

// Graphic-arts CIE94 (K1=0.045, K2=0.015, SL=1). Asymmetric: the first
// argument is the reference whose chroma feeds SC and SH.
double cie94(const LabColor& a, const LabColor& b, const DeltaEParams& params = {});

// Full CIEDE2000 with a' rescaling, hue-angle case analysis and the RT
// rotation term. Symmetric in its arguments.
double ciede2000(const LabColor& a, const LabColor& b, const DeltaEParams& params = {});

// Dispatch on RGB endpoints: euclidean-rgb compares raw channels, all other
// metrics convert through rgb_to_lab first.
double color_distance(DistanceMetric metric, RgbColor a, RgbColor b,
                      const DeltaEParams& params = {});

// Same dispatch for LAB endpoints; euclidean-rgb converts through lab_to_rgb.
double lab_distance(DistanceMetric metric, const LabColor& a, const LabColor& b,
                    const DeltaEParams& params = {});

} // namespace chromatone
