// Color types and conversions among sRGB, HSV, XYZ and CIELAB.
// All math is done in double precision; 8-bit quantization happens only at
// the RGB boundary. White point is D65 (2 degree observer), standard sRGB
// companding.

#pragma once

#include <cstdint>

namespace chromatone {

// 8-bit sRGB.
struct RgbColor {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const RgbColor&) const = default;
};

// Hexcone HSV: h in degrees [0,360), s and v in [0,1]. h is 0 when s is 0.
struct HsvColor {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

// CIE XYZ tristimulus, scaled so the reference white has Y = 100.
struct XyzColor {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// CIELAB. l in [0,100]; a and b signed, typically within [-128,127].
struct LabColor {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// sRGB transfer curve, both directions, on [0,1] values.
double srgb_decompand(double channel);
double srgb_compand(double linear);

HsvColor rgb_to_hsv(RgbColor c);
RgbColor hsv_to_rgb(const HsvColor& c);

XyzColor rgb_to_xyz(RgbColor c);
LabColor xyz_to_lab(const XyzColor& c);
XyzColor lab_to_xyz(const LabColor& c);
LabColor rgb_to_lab(RgbColor c);

// Inverse chain with per-channel clamping to [0,255]. When `clamped` is
// non-null it is set to true iff any channel fell outside the sRGB gamut.
RgbColor lab_to_rgb(const LabColor& c, bool* clamped = nullptr);

// Single-channel gamma map: v -> 255*(v/255)^(1/gamma). Throws ConfigError
// for gamma <= 0.
std::uint8_t gamma_map(std::uint8_t value, double gamma);

} // namespace chromatone
