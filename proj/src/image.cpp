#include "chromatone/image.hpp"
#include "chromatone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace chromatone {

namespace {

std::string dims(int w, int h) {
    return std::to_string(w) + "x" + std::to_string(h);
}

void require_same_dims(int aw, int ah, int bw, int bh, const char* what) {
    if (aw != bw || ah != bh)
        throw DimensionMismatchError(std::string(what) + ": " + dims(aw, ah) +
                                     " vs " + dims(bw, bh));
}

// Reflect-101 fold: ...cb|abcdef|ed...
int fold_index(int i, int n) {
    if (n == 1) return 0;
    int period = 2 * n - 2;
    i = ((i % period) + period) % period;
    return i < n ? i : period - i;
}

} // namespace

ImageBuffer make_image(int width, int height, RgbColor fill) {
    ImageBuffer img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

PixelMask make_mask(int width, int height, bool fill) {
    PixelMask m;
    m.width = width;
    m.height = height;
    m.bits.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
    return m;
}

std::size_t PixelMask::count() const {
    return static_cast<std::size_t>(
        std::accumulate(bits.begin(), bits.end(), std::size_t{0}));
}

ImageBuffer gamma_correct(const ImageBuffer& img, double gamma) {
    if (!(gamma > 0.0))
        throw ConfigError("gamma must be positive, got " + std::to_string(gamma));
    if (gamma == 1.0) return img;

    // 256-entry LUT; the map is per channel value only.
    std::array<std::uint8_t, 256> lut;
    for (int v = 0; v < 256; ++v)
        lut[v] = gamma_map(static_cast<std::uint8_t>(v), gamma);

    ImageBuffer out = img;
    for (auto& p : out.pixels) {
        p.r = lut[p.r];
        p.g = lut[p.g];
        p.b = lut[p.b];
    }
    return out;
}

int blur_kernel_size(int width, int height, int kernel_divisor) {
    if (kernel_divisor < 1)
        throw ConfigError("kernel divisor must be >= 1, got " +
                          std::to_string(kernel_divisor));
    int k = static_cast<int>(
        std::lround(static_cast<double>(std::min(width, height)) / kernel_divisor));
    k = std::max(3, k);
    if (k % 2 == 0) ++k;
    return k;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, int kernel_divisor) {
    int k = blur_kernel_size(img.width, img.height, kernel_divisor);
    int half = k / 2;
    double sigma = 0.3 * ((k - 1) * 0.5 - 1.0) + 0.8;

    std::vector<double> kernel(k);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        double x = i - half;
        kernel[i] = std::exp(-(x * x) / (2.0 * sigma * sigma));
        sum += kernel[i];
    }
    for (double& w : kernel) w /= sum;

    int w = img.width, h = img.height;
    std::vector<double> tmp(static_cast<std::size_t>(w) * h * 3);

    // Horizontal pass into doubles.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0, 0, 0};
            for (int i = 0; i < k; ++i) {
                const RgbColor& p = img.at(fold_index(x + i - half, w), y);
                acc[0] += kernel[i] * p.r;
                acc[1] += kernel[i] * p.g;
                acc[2] += kernel[i] * p.b;
            }
            double* t = &tmp[(static_cast<std::size_t>(y) * w + x) * 3];
            t[0] = acc[0];
            t[1] = acc[1];
            t[2] = acc[2];
        }
    }

    // Vertical pass with final quantization.
    ImageBuffer out = make_image(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0, 0, 0};
            for (int i = 0; i < k; ++i) {
                const double* t =
                    &tmp[(static_cast<std::size_t>(fold_index(y + i - half, h)) * w + x) * 3];
                acc[0] += kernel[i] * t[0];
                acc[1] += kernel[i] * t[1];
                acc[2] += kernel[i] * t[2];
            }
            out.at(x, y) = {
                static_cast<std::uint8_t>(std::lround(std::clamp(acc[0], 0.0, 255.0))),
                static_cast<std::uint8_t>(std::lround(std::clamp(acc[1], 0.0, 255.0))),
                static_cast<std::uint8_t>(std::lround(std::clamp(acc[2], 0.0, 255.0))),
            };
        }
    }
    return out;
}

PixelMask morphological_close(const PixelMask& mask, int radius) {
    if (radius < 1)
        throw ConfigError("closing radius must be >= 1, got " + std::to_string(radius));
    int r = radius;
    int cw = mask.width + 2 * r, ch = mask.height + 2 * r;

    // Dilation on a padded canvas (separable: rows then columns).
    auto canvas = make_mask(cw, ch, false);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            canvas.set(x + r, y + r, mask.get(x, y));

    auto pass = [&](const PixelMask& in, bool horizontal, bool dilate) {
        PixelMask out = make_mask(cw, ch, false);
        for (int y = 0; y < ch; ++y) {
            for (int x = 0; x < cw; ++x) {
                bool acc = !dilate;
                for (int o = -r; o <= r; ++o) {
                    int sx = horizontal ? x + o : x;
                    int sy = horizontal ? y : y + o;
                    bool v = (sx >= 0 && sx < cw && sy >= 0 && sy < ch)
                                 ? in.get(sx, sy)
                                 : false;
                    if (dilate)
                        acc = acc || v;
                    else
                        acc = acc && v;
                    if (dilate == acc && dilate) break;
                    if (!dilate && !acc) break;
                }
                out.set(x, y, acc);
            }
        }
        return out;
    };

    PixelMask dilated = pass(pass(canvas, true, true), false, true);
    PixelMask eroded = pass(pass(dilated, true, false), false, false);

    PixelMask out = make_mask(mask.width, mask.height, false);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            out.set(x, y, eroded.get(x + r, y + r));
    return out;
}

PixelMask lab_threshold_mask(const ImageBuffer& img, const LabThresholds& t) {
    if (t.l_min > t.l_max || t.a_min > t.a_max || t.b_min > t.b_max)
        throw ConfigError("LAB threshold intervals must have min <= max");
    PixelMask out = make_mask(img.width, img.height, false);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        LabColor lab = rgb_to_lab(img.pixels[i]);
        bool in = lab.l >= t.l_min && lab.l <= t.l_max && lab.a >= t.a_min &&
                  lab.a <= t.a_max && lab.b >= t.b_min && lab.b <= t.b_max;
        out.bits[i] = in ? 1 : 0;
    }
    return out;
}

PixelMask subtract_mask(const PixelMask& a, const PixelMask& b) {
    require_same_dims(a.width, a.height, b.width, b.height, "mask subtraction");
    PixelMask out = a;
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        out.bits[i] = (a.bits[i] != 0 && b.bits[i] == 0) ? 1 : 0;
    return out;
}

std::vector<RgbColor> masked_pixels(const ImageBuffer& img, const PixelMask& mask) {
    require_same_dims(img.width, img.height, mask.width, mask.height,
                      "image/mask");
    std::vector<RgbColor> out;
    out.reserve(mask.count());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        if (mask.bits[i] != 0) out.push_back(img.pixels[i]);
    return out;
}

LabColor mean_lab(const std::vector<RgbColor>& pixels) {
    if (pixels.empty())
        throw EmptyRegionError("cannot average an empty pixel set");
    double l = 0, a = 0, b = 0;
    for (const RgbColor& p : pixels) {
        LabColor lab = rgb_to_lab(p);
        l += lab.l;
        a += lab.a;
        b += lab.b;
    }
    double n = static_cast<double>(pixels.size());
    return {l / n, a / n, b / n};
}

PixelMask circular_mask(double cx, double cy, double radius, int width, int height) {
    if (!(radius > 0.0))
        throw ConfigError("circle radius must be positive");
    PixelMask out = make_mask(width, height, false);
    int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
    int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + radius)));
    int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
    int y1 = std::min(height - 1, static_cast<int>(std::ceil(cy + radius)));
    double r2 = radius * radius;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r2) out.set(x, y, true);
        }
    }
    return out;
}

namespace {

// Exact box-filter average of the source rectangle covered by each
// destination pixel.
template <typename Get>
void area_average(int sw, int sh, int dw, int dh, Get&& get,
                  std::vector<std::array<double, 3>>& out) {
    double sx = static_cast<double>(sw) / dw;
    double sy = static_cast<double>(sh) / dh;
    out.assign(static_cast<std::size_t>(dw) * dh, {0, 0, 0});
    for (int dy = 0; dy < dh; ++dy) {
        double yb = dy * sy, ye = (dy + 1) * sy;
        int iy0 = static_cast<int>(std::floor(yb));
        int iy1 = std::min(sh - 1, static_cast<int>(std::ceil(ye)) - 1);
        for (int dx = 0; dx < dw; ++dx) {
            double xb = dx * sx, xe = (dx + 1) * sx;
            int ix0 = static_cast<int>(std::floor(xb));
            int ix1 = std::min(sw - 1, static_cast<int>(std::ceil(xe)) - 1);
            double acc[3] = {0, 0, 0};
            double area = 0.0;
            for (int y = iy0; y <= iy1; ++y) {
                double wy = std::min<double>(y + 1, ye) - std::max<double>(y, yb);
                for (int x = ix0; x <= ix1; ++x) {
                    double wx = std::min<double>(x + 1, xe) - std::max<double>(x, xb);
                    double wgt = wx * wy;
                    auto px = get(x, y);
                    acc[0] += wgt * px[0];
                    acc[1] += wgt * px[1];
                    acc[2] += wgt * px[2];
                    area += wgt;
                }
            }
            auto& o = out[static_cast<std::size_t>(dy) * dw + dx];
            o = {acc[0] / area, acc[1] / area, acc[2] / area};
        }
    }
}

void scaled_dims(int w, int h, int max_side, int& dw, int& dh) {
    int longside = std::max(w, h);
    double scale = static_cast<double>(max_side) / longside;
    dw = std::max(1, static_cast<int>(std::lround(w * scale)));
    dh = std::max(1, static_cast<int>(std::lround(h * scale)));
}

} // namespace

ImageBuffer resize_to_max_side(const ImageBuffer& img, int max_side) {
    if (max_side < 1) throw ConfigError("resize target must be >= 1");
    if (std::max(img.width, img.height) <= max_side) return img;
    int dw, dh;
    scaled_dims(img.width, img.height, max_side, dw, dh);

    std::vector<std::array<double, 3>> acc;
    area_average(img.width, img.height, dw, dh,
                 [&](int x, int y) {
                     const RgbColor& p = img.at(x, y);
                     return std::array<double, 3>{
                         static_cast<double>(p.r), static_cast<double>(p.g),
                         static_cast<double>(p.b)};
                 },
                 acc);

    ImageBuffer out = make_image(dw, dh);
    for (std::size_t i = 0; i < acc.size(); ++i) {
        out.pixels[i] = {
            static_cast<std::uint8_t>(std::lround(std::clamp(acc[i][0], 0.0, 255.0))),
            static_cast<std::uint8_t>(std::lround(std::clamp(acc[i][1], 0.0, 255.0))),
            static_cast<std::uint8_t>(std::lround(std::clamp(acc[i][2], 0.0, 255.0))),
        };
    }
    return out;
}

PixelMask resize_mask_to_max_side(const PixelMask& mask, int max_side) {
    if (max_side < 1) throw ConfigError("resize target must be >= 1");
    if (std::max(mask.width, mask.height) <= max_side) return mask;
    int dw, dh;
    scaled_dims(mask.width, mask.height, max_side, dw, dh);

    std::vector<std::array<double, 3>> acc;
    area_average(mask.width, mask.height, dw, dh,
                 [&](int x, int y) {
                     double v = mask.get(x, y) ? 1.0 : 0.0;
                     return std::array<double, 3>{v, v, v};
                 },
                 acc);

    PixelMask out = make_mask(dw, dh, false);
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.bits[i] = acc[i][0] >= 0.5 ? 1 : 0;
    return out;
}

} // namespace chromatone
