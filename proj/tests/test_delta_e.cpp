#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chromatone/delta_e.hpp"
#include "chromatone/errors.hpp"

#include <cmath>
#include <random>

using namespace chromatone;

namespace {

// Independent CIEDE2000 oracle for cross-checking: written against the
// published procedure in radians, separately from the library's
// degree-based implementation.
double oracle_ciede2000(const LabColor& x, const LabColor& y) {
    const double pi = 3.14159265358979323846;
    double c1 = std::sqrt(x.a * x.a + x.b * x.b);
    double c2 = std::sqrt(y.a * y.a + y.b * y.b);
    double cm = 0.5 * (c1 + c2);
    double cm7 = std::pow(cm, 7.0);
    double g = 0.5 * (1.0 - std::sqrt(cm7 / (cm7 + std::pow(25.0, 7.0))));
    double ap1 = (1.0 + g) * x.a, ap2 = (1.0 + g) * y.a;
    double cp1 = std::sqrt(ap1 * ap1 + x.b * x.b);
    double cp2 = std::sqrt(ap2 * ap2 + y.b * y.b);

    auto hue = [&](double b, double ap) {
        if (b == 0.0 && ap == 0.0) return 0.0;
        double h = std::atan2(b, ap);
        return h < 0.0 ? h + 2.0 * pi : h;
    };
    double hp1 = hue(x.b, ap1), hp2 = hue(y.b, ap2);

    double dl = y.l - x.l;
    double dc = cp2 - cp1;
    double dh = 0.0;
    if (cp1 * cp2 != 0.0) {
        dh = hp2 - hp1;
        if (dh > pi) dh -= 2.0 * pi;
        if (dh < -pi) dh += 2.0 * pi;
    }
    double dbigh = 2.0 * std::sqrt(cp1 * cp2) * std::sin(dh / 2.0);

    double lm = 0.5 * (x.l + y.l);
    double cpm = 0.5 * (cp1 + cp2);
    double hm = hp1 + hp2;
    if (cp1 * cp2 != 0.0) {
        if (std::fabs(hp1 - hp2) > pi) {
            if (hp1 + hp2 < 2.0 * pi)
                hm += 2.0 * pi;
            else
                hm -= 2.0 * pi;
        }
        hm *= 0.5;
    }
    double t = 1.0 - 0.17 * std::cos(hm - pi / 6.0) + 0.24 * std::cos(2.0 * hm) +
               0.32 * std::cos(3.0 * hm + pi / 30.0) -
               0.20 * std::cos(4.0 * hm - 63.0 * pi / 180.0);
    double hm_deg = hm * 180.0 / pi;
    double dtheta = 30.0 * std::exp(-std::pow((hm_deg - 275.0) / 25.0, 2.0));
    double cpm7 = std::pow(cpm, 7.0);
    double rc = 2.0 * std::sqrt(cpm7 / (cpm7 + std::pow(25.0, 7.0)));
    double rt = -std::sin(2.0 * dtheta * pi / 180.0) * rc;
    double l2 = (lm - 50.0) * (lm - 50.0);
    double sl = 1.0 + 0.015 * l2 / std::sqrt(20.0 + l2);
    double sc = 1.0 + 0.045 * cpm;
    double sh = 1.0 + 0.015 * cpm * t;
    double vl = dl / sl, vc = dc / sc, vh = dbigh / sh;
    return std::sqrt(vl * vl + vc * vc + vh * vh + rt * vc * vh);
}

// Independent CIE94 (graphic arts) oracle.
double oracle_cie94(const LabColor& ref, const LabColor& sample) {
    double c1 = std::sqrt(ref.a * ref.a + ref.b * ref.b);
    double c2 = std::sqrt(sample.a * sample.a + sample.b * sample.b);
    double dl = ref.l - sample.l;
    double dc = c1 - c2;
    double da = ref.a - sample.a, db = ref.b - sample.b;
    double dh2 = da * da + db * db - dc * dc;
    if (dh2 < 0.0) dh2 = 0.0;
    double t1 = dl;
    double t2 = dc / (1.0 + 0.045 * c1);
    double t3 = std::sqrt(dh2) / (1.0 + 0.015 * c1);
    return std::sqrt(t1 * t1 + t2 * t2 + t3 * t3);
}

// The published CIEDE2000 verification pairs (Sharma, Wu & Dalal), including
// the hue-discontinuity cases 9-16.
struct GoldenPair {
    LabColor a, b;
    double expected;
};
const GoldenPair kGolden[] = {
    {{50.0000, 2.6772, -79.7751}, {50.0000, 0.0000, -82.7485}, 2.0425},
    {{50.0000, 3.1571, -77.2803}, {50.0000, 0.0000, -82.7485}, 2.8615},
    {{50.0000, 2.8361, -74.0200}, {50.0000, 0.0000, -82.7485}, 3.4412},
    {{50.0000, -1.3802, -84.2814}, {50.0000, 0.0000, -82.7485}, 1.0000},
    {{50.0000, -1.1848, -84.8006}, {50.0000, 0.0000, -82.7485}, 1.0000},
    {{50.0000, -0.9009, -85.5211}, {50.0000, 0.0000, -82.7485}, 1.0000},
    {{50.0000, 0.0000, 0.0000}, {50.0000, -1.0000, 2.0000}, 2.3669},
    {{50.0000, -1.0000, 2.0000}, {50.0000, 0.0000, 0.0000}, 2.3669},
    {{50.0000, 2.4900, -0.0010}, {50.0000, -2.4900, 0.0009}, 7.1792},
    {{50.0000, 2.4900, -0.0010}, {50.0000, -2.4900, 0.0010}, 7.1792},
    {{50.0000, 2.4900, -0.0010}, {50.0000, -2.4900, 0.0011}, 7.2195},
    {{50.0000, 2.4900, -0.0010}, {50.0000, -2.4900, 0.0012}, 7.2195},
    {{50.0000, -0.0010, 2.4900}, {50.0000, 0.0009, -2.4900}, 4.8045},
    {{50.0000, -0.0010, 2.4900}, {50.0000, 0.0010, -2.4900}, 4.8045},
    {{50.0000, -0.0010, 2.4900}, {50.0000, 0.0011, -2.4900}, 4.7461},
    {{50.0000, 2.5000, 0.0000}, {50.0000, 0.0000, -2.5000}, 4.3065},
    {{50.0000, 2.5000, 0.0000}, {73.0000, 25.0000, -18.0000}, 27.1492},
    {{50.0000, 2.5000, 0.0000}, {61.0000, -5.0000, 29.0000}, 22.8977},
    {{50.0000, 2.5000, 0.0000}, {56.0000, -27.0000, -3.0000}, 31.9030},
    {{50.0000, 2.5000, 0.0000}, {58.0000, 24.0000, 15.0000}, 19.4535},
    {{50.0000, 2.5000, 0.0000}, {50.0000, 3.1736, 0.5854}, 1.0000},
    {{50.0000, 2.5000, 0.0000}, {50.0000, 3.2972, 0.0000}, 1.0000},
    {{50.0000, 2.5000, 0.0000}, {50.0000, 1.8634, 0.5757}, 1.0000},
    {{50.0000, 2.5000, 0.0000}, {50.0000, 3.2592, 0.3350}, 1.0000},
    {{60.2574, -34.0099, 36.2677}, {60.4626, -34.1751, 39.4387}, 1.2644},
    {{63.0109, -31.0961, -5.8663}, {62.8187, -29.7946, -4.0864}, 1.2630},
    {{61.2901, 3.7196, -5.3901}, {61.4292, 2.2480, -4.9620}, 1.8731},
    {{35.0831, -44.1164, 3.7933}, {35.0232, -40.0716, 1.5901}, 1.8645},
    {{22.7233, 20.0904, -46.6940}, {23.0331, 14.9730, -42.5619}, 2.0373},
    {{36.4612, 47.8580, 18.3852}, {36.2715, 50.5065, 21.2231}, 1.4146},
    {{90.8027, -2.0831, 1.4410}, {91.1528, -1.6435, 0.0447}, 1.4441},
    {{90.9257, -0.5406, -0.9208}, {88.6381, -0.8985, -0.7239}, 1.5381},
    {{6.7747, -0.2908, -2.4247}, {5.8714, -0.0985, -2.2286}, 0.6377},
    {{2.0776, 0.0795, -1.1350}, {0.9033, -0.0636, -0.5514}, 0.9082},
};

std::mt19937_64 test_rng(20240811);

double u01() {
    return static_cast<double>(test_rng() >> 11) * 0x1.0p-53;
}

LabColor random_lab() {
    return {u01() * 100.0, u01() * 160.0 - 80.0, u01() * 160.0 - 80.0};
}

} // namespace

TEST_CASE("euclidean_distance") {
    CHECK(euclidean_distance({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0));
    CHECK(euclidean_distance({1.5, -2, 7}, {1.5, -2, 7}) == 0.0);
    CHECK(euclidean_distance({1, 2, 3}, {4, 6, 3}) == doctest::Approx(5.0));
}

TEST_CASE("cie76") {
    CHECK(cie76({50, 10, -3}, {50, 10, -3}) == 0.0);
    CHECK(cie76({50, 0, 0}, {50, 3, 4}) == doctest::Approx(5.0));
    // Hand evaluation: sqrt(2.6772^2 + 2.9734^2).
    CHECK(cie76({50, 2.6772, -79.7751}, {50, 0, -82.7485}) ==
          doctest::Approx(4.00106).epsilon(1e-5));
}

TEST_CASE("cie94 examples and oracle agreement") {
    CHECK(cie94({50, 10, 10}, {50, 10, 10}) == 0.0);
    CHECK(cie94({50, 0, 0}, {55, 0, 0}) == doctest::Approx(5.0));
    CHECK(cie94({50, 2.6772, -79.7751}, {50, 0, -82.7485}) ==
          doctest::Approx(1.39504).epsilon(1e-4));

    for (int i = 0; i < 200; ++i) {
        LabColor a = random_lab(), b = random_lab();
        CHECK(cie94(a, b) == doctest::Approx(oracle_cie94(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("cie94 asymmetry stays small on nearby pairs") {
    // The reference-first convention is asymmetric by construction; for
    // small differences around chromatic colors the asymmetry is bounded.
    int checked = 0;
    while (checked < 200) {
        LabColor a = random_lab();
        if (std::hypot(a.a, a.b) < 20.0) continue;
        LabColor b{a.l + (u01() * 4.0 - 2.0), a.a + (u01() * 4.0 - 2.0),
                   a.b + (u01() * 4.0 - 2.0)};
        double ab = cie94(a, b), ba = cie94(b, a);
        double larger = std::max(ab, ba);
        if (larger == 0.0) continue;
        CHECK(std::fabs(ab - ba) / larger <= 0.10);
        ++checked;
    }
}

TEST_CASE("ciede2000 matches the published pair set to 1e-4") {
    for (const GoldenPair& p : kGolden) {
        double got = ciede2000(p.a, p.b);
        CHECK(std::fabs(got - p.expected) <= 1e-4);
    }
}

TEST_CASE("ciede2000 identity, symmetry and oracle agreement") {
    CHECK(ciede2000({31, -5, 8}, {31, -5, 8}) == 0.0);
    for (int i = 0; i < 300; ++i) {
        LabColor a = random_lab(), b = random_lab();
        double ab = ciede2000(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(ciede2000(b, a)).epsilon(1e-12));
        CHECK(ab == doctest::Approx(oracle_ciede2000(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("parametric factors") {
    DeltaEParams doubled_l{2.0, 1.0, 1.0};
    DeltaEParams defaults;
    for (int i = 0; i < 100; ++i) {
        LabColor a = random_lab(), b = random_lab();
        if (std::fabs(a.l - b.l) < 1e-9) continue;
        CHECK(ciede2000(a, b, doubled_l) < ciede2000(a, b, defaults));
        CHECK(cie94(a, b, doubled_l) < cie94(a, b, defaults));
        CHECK(ciede2000(a, b, defaults) == ciede2000(a, b)); // unit factors are the default
    }
}

TEST_CASE("ciede2000 continuity near branch points") {
    // Perturbing one coordinate by <=1e-6 must not move the result by more
    // than 1e-3, including near-neutral colors where the hue branch flips.
    auto probe = [](const LabColor& a, const LabColor& b) {
        double base = ciede2000(a, b);
        for (int axis = 0; axis < 3; ++axis) {
            LabColor nudged = b;
            (axis == 0 ? nudged.l : axis == 1 ? nudged.a : nudged.b) += 1e-6;
            CHECK(std::fabs(ciede2000(a, nudged) - base) <= 1e-3);
        }
    };
    probe({50, 0, 0}, {50, 0, 0});
    probe({50, 2.49, -0.001}, {50, -2.49, 0.0009});
    probe({50, 0.0001, 0.0001}, {50, -0.0001, -0.0001});
    for (int i = 0; i < 200; ++i) {
        LabColor a = random_lab();
        LabColor b = random_lab();
        if (i % 3 == 0) { // force near-neutral samples into the mix
            b.a = u01() * 0.002 - 0.001;
            b.b = u01() * 0.002 - 0.001;
        }
        probe(a, b);
    }
}

TEST_CASE("color_distance dispatch") {
    CHECK(color_distance(DistanceMetric::EuclideanRgb, {0, 0, 0}, {255, 255, 255}) ==
          doctest::Approx(255.0 * std::sqrt(3.0)));
    for (DistanceMetric m :
         {DistanceMetric::EuclideanRgb, DistanceMetric::EuclideanLab,
          DistanceMetric::Cie76, DistanceMetric::Cie94, DistanceMetric::Ciede2000}) {
        CHECK(color_distance(m, {12, 200, 96}, {12, 200, 96}) == 0.0);
    }

    // Chained conversion cross-check against the independent oracle.
    LabColor red = rgb_to_lab({255, 0, 0});
    LabColor blue = rgb_to_lab({0, 0, 255});
    double expected = oracle_ciede2000(red, blue);
    CHECK(color_distance(DistanceMetric::Ciede2000, {255, 0, 0}, {0, 0, 255}) ==
          doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected == doctest::Approx(52.8814).epsilon(1e-4));

    CHECK(color_distance(DistanceMetric::EuclideanLab, {10, 20, 30}, {40, 50, 60}) ==
          doctest::Approx(cie76(rgb_to_lab({10, 20, 30}), rgb_to_lab({40, 50, 60}))));
}

TEST_CASE("metric names round trip") {
    for (DistanceMetric m :
         {DistanceMetric::EuclideanRgb, DistanceMetric::EuclideanLab,
          DistanceMetric::Cie76, DistanceMetric::Cie94, DistanceMetric::Ciede2000}) {
        CHECK(parse_metric(metric_name(m)) == m);
    }
    CHECK_THROWS_AS(parse_metric("cmc"), ConfigError);
}
