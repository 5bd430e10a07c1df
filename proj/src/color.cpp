#include "chromatone/color.hpp"
#include "chromatone/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chromatone {

namespace {

// sRGB <-> XYZ (D65). Rows of the forward matrix sum exactly to the white
// point so that pure white maps to L=100, a=b=0 with no residual.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721749},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.24045482746824254, -1.53713881874096914, -0.49853170937866470},
    {-0.96926637943688776, 1.87601089056701875, 0.04155628068326540},
    {0.05564341846894406, -0.20402585010504332, 1.05722514088780262},
};
constexpr double kWhiteX = 95.047;
constexpr double kWhiteY = 100.0;
constexpr double kWhiteZ = 108.883;

// CIE constants as exact rationals.
constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

std::uint8_t quantize(double v01) {
    double v = std::lround(std::clamp(v01, 0.0, 1.0) * 255.0);
    return static_cast<std::uint8_t>(v);
}

} // namespace

double srgb_decompand(double channel) {
    return channel <= 0.04045 ? channel / 12.92
                              : std::pow((channel + 0.055) / 1.055, 2.4);
}

double srgb_compand(double linear) {
    return linear <= 0.0031308 ? 12.92 * linear
                               : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

HsvColor rgb_to_hsv(RgbColor c) {
    double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
    double mx = std::max({r, g, b});
    double mn = std::min({r, g, b});
    double delta = mx - mn;

    HsvColor out;
    out.v = mx;
    out.s = mx == 0.0 ? 0.0 : delta / mx;
    if (delta == 0.0) {
        out.h = 0.0; // achromatic
        return out;
    }
    double h;
    if (mx == r)
        h = 60.0 * std::fmod((g - b) / delta, 6.0);
    else if (mx == g)
        h = 60.0 * ((b - r) / delta + 2.0);
    else
        h = 60.0 * ((r - g) / delta + 4.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

RgbColor hsv_to_rgb(const HsvColor& c) {
    if (c.s == 0.0) {
        std::uint8_t v = quantize(c.v);
        return {v, v, v};
    }
    double h = c.h;
    h = std::fmod(h, 360.0);
    if (h < 0.0) h += 360.0;
    double sector = h / 60.0;
    int i = static_cast<int>(sector) % 6;
    double f = sector - std::floor(sector);
    double p = c.v * (1.0 - c.s);
    double q = c.v * (1.0 - c.s * f);
    double t = c.v * (1.0 - c.s * (1.0 - f));

    double r, g, b;
    switch (i) {
    case 0: r = c.v; g = t; b = p; break;
    case 1: r = q; g = c.v; b = p; break;
    case 2: r = p; g = c.v; b = t; break;
    case 3: r = p; g = q; b = c.v; break;
    case 4: r = t; g = p; b = c.v; break;
    default: r = c.v; g = p; b = q; break;
    }
    return {quantize(r), quantize(g), quantize(b)};
}

XyzColor rgb_to_xyz(RgbColor c) {
    double lin[3] = {
        srgb_decompand(c.r / 255.0),
        srgb_decompand(c.g / 255.0),
        srgb_decompand(c.b / 255.0),
    };
    XyzColor out;
    out.x = 100.0 * (kRgbToXyz[0][0] * lin[0] + kRgbToXyz[0][1] * lin[1] + kRgbToXyz[0][2] * lin[2]);
    out.y = 100.0 * (kRgbToXyz[1][0] * lin[0] + kRgbToXyz[1][1] * lin[1] + kRgbToXyz[1][2] * lin[2]);
    out.z = 100.0 * (kRgbToXyz[2][0] * lin[0] + kRgbToXyz[2][1] * lin[1] + kRgbToXyz[2][2] * lin[2]);
    return out;
}

LabColor xyz_to_lab(const XyzColor& c) {
    auto f = [](double t) {
        return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
    };
    double fx = f(c.x / kWhiteX);
    double fy = f(c.y / kWhiteY);
    double fz = f(c.z / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

XyzColor lab_to_xyz(const LabColor& c) {
    double fy = (c.l + 16.0) / 116.0;
    double fx = fy + c.a / 500.0;
    double fz = fy - c.b / 200.0;
    auto finv = [](double t) {
        double t3 = t * t * t;
        return t3 > kEpsilon ? t3 : (116.0 * t - 16.0) / kKappa;
    };
    return {finv(fx) * kWhiteX, finv(fy) * kWhiteY, finv(fz) * kWhiteZ};
}

LabColor rgb_to_lab(RgbColor c) {
    return xyz_to_lab(rgb_to_xyz(c));
}

RgbColor lab_to_rgb(const LabColor& c, bool* clamped) {
    XyzColor xyz = lab_to_xyz(c);
    double x = xyz.x / 100.0, y = xyz.y / 100.0, z = xyz.z / 100.0;
    double lin[3] = {
        kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z,
        kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z,
        kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z,
    };
    bool out_of_gamut = false;
    std::uint8_t ch[3];
    for (int i = 0; i < 3; ++i) {
        // Sign-extended companding so the clamp check happens on the output
        // scale with half a quantization step of slack; round-trip float
        // dust around 0 and 1 must not trip the flag.
        double sign = lin[i] < 0.0 ? -1.0 : 1.0;
        double raw = sign * srgb_compand(std::fabs(lin[i])) * 255.0;
        if (raw < -0.5 || raw > 255.5) out_of_gamut = true;
        ch[i] = static_cast<std::uint8_t>(std::lround(std::clamp(raw, 0.0, 255.0)));
    }
    if (clamped) *clamped = out_of_gamut;
    return {ch[0], ch[1], ch[2]};
}

std::uint8_t gamma_map(std::uint8_t value, double gamma) {
    if (!(gamma > 0.0))
        throw ConfigError("gamma must be positive, got " + std::to_string(gamma));
    if (gamma == 1.0) return value;
    double v = 255.0 * std::pow(value / 255.0, 1.0 / gamma);
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

} // namespace chromatone
