#include "chromatone/delta_e.hpp"
#include "chromatone/errors.hpp"

#include <cmath>

namespace chromatone {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPow25To7 = 6103515625.0; // 25^7

double deg_to_rad(double d) { return d * kPi / 180.0; }
double rad_to_deg(double r) { return r * 180.0 / kPi; }

// atan2 mapped to degrees in [0,360); 0 for the (0,0) degenerate input.
double hue_angle_deg(double y, double x) {
    if (x == 0.0 && y == 0.0) return 0.0;
    double h = rad_to_deg(std::atan2(y, x));
    if (h < 0.0) h += 360.0;
    return h;
}

} // namespace

std::string metric_name(DistanceMetric metric) {
    switch (metric) {
    case DistanceMetric::EuclideanRgb: return "euclidean-rgb";
    case DistanceMetric::EuclideanLab: return "euclidean-lab";
    case DistanceMetric::Cie76: return "cie76";
    case DistanceMetric::Cie94: return "cie94";
    case DistanceMetric::Ciede2000: return "ciede2000";
    }
    return "ciede2000";
}

DistanceMetric parse_metric(const std::string& name) {
    if (name == "euclidean-rgb") return DistanceMetric::EuclideanRgb;
    if (name == "euclidean-lab") return DistanceMetric::EuclideanLab;
    if (name == "cie76") return DistanceMetric::Cie76;
    if (name == "cie94") return DistanceMetric::Cie94;
    if (name == "ciede2000") return DistanceMetric::Ciede2000;
    throw ConfigError("unknown distance metric: " + name);
}

double euclidean_distance(const std::array<double, 3>& p,
                          const std::array<double, 3>& q) {
    double dx = p[0] - q[0];
    double dy = p[1] - q[1];
    double dz = p[2] - q[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double cie76(const LabColor& a, const LabColor& b) {
    return euclidean_distance({a.l, a.a, a.b}, {b.l, b.a, b.b});
}

double cie94(const LabColor& a, const LabColor& b, const DeltaEParams& params) {
    double c1 = std::hypot(a.a, a.b);
    double c2 = std::hypot(b.a, b.b);
    double dl = a.l - b.l;
    double dc = c1 - c2;
    double da = a.a - b.a;
    double db = a.b - b.b;
    // dH^2 can go epsilon-negative from cancellation.
    double dh2 = std::max(0.0, da * da + db * db - dc * dc);

    double sl = 1.0;
    double sc = 1.0 + 0.045 * c1;
    double sh = 1.0 + 0.015 * c1;
    double tl = dl / (params.k_l * sl);
    double tc = dc / (params.k_c * sc);
    double th2 = dh2 / (params.k_h * sh * params.k_h * sh);
    return std::sqrt(tl * tl + tc * tc + th2);
}

// Implementation follows the standard CIEDE2000 procedure (Sharma et al.
// implementation notes): a' rescaling through G, hue angles in degrees with
// the >180 case analysis for mean hue, SL/SC/SH weighting and the RT
// rotation coupling the chroma and hue terms.
double ciede2000(const LabColor& a, const LabColor& b, const DeltaEParams& params) {
    double c1 = std::hypot(a.a, a.b);
    double c2 = std::hypot(b.a, b.b);
    double c_mean = (c1 + c2) / 2.0;

    double c7 = std::pow(c_mean, 7.0);
    double g = 0.5 * (1.0 - std::sqrt(c7 / (c7 + kPow25To7)));

    double ap1 = (1.0 + g) * a.a;
    double ap2 = (1.0 + g) * b.a;
    double cp1 = std::hypot(ap1, a.b);
    double cp2 = std::hypot(ap2, b.b);
    double hp1 = hue_angle_deg(a.b, ap1);
    double hp2 = hue_angle_deg(b.b, ap2);

    double dlp = b.l - a.l;
    double dcp = cp2 - cp1;

    double dhp = 0.0;
    if (cp1 * cp2 != 0.0) {
        dhp = hp2 - hp1;
        if (dhp > 180.0)
            dhp -= 360.0;
        else if (dhp < -180.0)
            dhp += 360.0;
    }
    double dHp = 2.0 * std::sqrt(cp1 * cp2) * std::sin(deg_to_rad(dhp) / 2.0);

    double lp_mean = (a.l + b.l) / 2.0;
    double cp_mean = (cp1 + cp2) / 2.0;

    double hp_mean;
    if (cp1 * cp2 == 0.0) {
        hp_mean = hp1 + hp2;
    } else if (std::fabs(hp1 - hp2) <= 180.0) {
        hp_mean = (hp1 + hp2) / 2.0;
    } else if (hp1 + hp2 < 360.0) {
        hp_mean = (hp1 + hp2 + 360.0) / 2.0;
    } else {
        hp_mean = (hp1 + hp2 - 360.0) / 2.0;
    }

    double t = 1.0 - 0.17 * std::cos(deg_to_rad(hp_mean - 30.0)) +
               0.24 * std::cos(deg_to_rad(2.0 * hp_mean)) +
               0.32 * std::cos(deg_to_rad(3.0 * hp_mean + 6.0)) -
               0.20 * std::cos(deg_to_rad(4.0 * hp_mean - 63.0));

    double dtheta = 30.0 * std::exp(-((hp_mean - 275.0) / 25.0) * ((hp_mean - 275.0) / 25.0));
    double cpm7 = std::pow(cp_mean, 7.0);
    double rc = 2.0 * std::sqrt(cpm7 / (cpm7 + kPow25To7));
    double rt = -std::sin(deg_to_rad(2.0 * dtheta)) * rc;

    double l50 = (lp_mean - 50.0) * (lp_mean - 50.0);
    double sl = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
    double sc = 1.0 + 0.045 * cp_mean;
    double sh = 1.0 + 0.015 * cp_mean * t;

    double tl = dlp / (params.k_l * sl);
    double tc = dcp / (params.k_c * sc);
    double th = dHp / (params.k_h * sh);
    return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

double color_distance(DistanceMetric metric, RgbColor a, RgbColor b,
                      const DeltaEParams& params) {
    if (metric == DistanceMetric::EuclideanRgb) {
        return euclidean_distance(
            {static_cast<double>(a.r), static_cast<double>(a.g), static_cast<double>(a.b)},
            {static_cast<double>(b.r), static_cast<double>(b.g), static_cast<double>(b.b)});
    }
    return lab_distance(metric, rgb_to_lab(a), rgb_to_lab(b), params);
}

double lab_distance(DistanceMetric metric, const LabColor& a, const LabColor& b,
                    const DeltaEParams& params) {
    switch (metric) {
    case DistanceMetric::EuclideanRgb: {
        RgbColor ra = lab_to_rgb(a);
        RgbColor rb = lab_to_rgb(b);
        return euclidean_distance(
            {static_cast<double>(ra.r), static_cast<double>(ra.g), static_cast<double>(ra.b)},
            {static_cast<double>(rb.r), static_cast<double>(rb.g), static_cast<double>(rb.b)});
    }
    case DistanceMetric::EuclideanLab:
    case DistanceMetric::Cie76:
        return cie76(a, b);
    case DistanceMetric::Cie94:
        return cie94(a, b, params);
    case DistanceMetric::Ciede2000:
        return ciede2000(a, b, params);
    }
    return ciede2000(a, b, params);
}

} // namespace chromatone
