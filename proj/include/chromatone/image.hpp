// Raster buffers, binary masks and the pixel-level transforms the pipelines
// are built from: decode, blur, gamma, morphology, LAB thresholding, masked
// extraction and mean color.

#pragma once

#include "chromatone/color.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace chromatone {

struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<RgbColor> pixels; // row-major, size = width*height

    RgbColor& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const RgbColor& at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

ImageBuffer make_image(int width, int height, RgbColor fill = {0, 0, 0});

struct PixelMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // row-major, 0 or 1

    bool get(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
    std::size_t count() const;
};

PixelMask make_mask(int width, int height, bool fill = false);

// Closed per-axis intervals in LAB.
struct LabThresholds {
    double l_min = 0.0, l_max = 100.0;
    double a_min = -128.0, a_max = 127.0;
    double b_min = -128.0, b_max = 127.0;
};

// 68-point facial landmarks, pixel coordinates.
struct Landmarks {
    std::array<std::array<double, 2>, 68> points{};
};

// --- file I/O ------------------------------------------------------------

// PNG or JPEG, sniffed by magic bytes. Alpha is dropped, 16-bit reduced to 8.
// Throws MissingFileError / DecodeError.
ImageBuffer decode_image(const std::string& path);

// Grayscale or RGB mask image; a pixel is a member when its channel mean is
// >= 128. Dimensions must match `img` or DimensionMismatchError is thrown.
PixelMask load_mask(const std::string& path, const ImageBuffer& img);

// 8-bit RGB PNG / grayscale PNG writers (fixed settings, deterministic bytes).
void write_png(const std::string& path, const ImageBuffer& img);
void write_png_gray(const std::string& path, const PixelMask& mask);

// Plain text, one "x y" pair per line, exactly 68 lines.
Landmarks load_landmarks(const std::string& path);
void write_landmarks(const std::string& path, const Landmarks& lm);

// --- transforms ----------------------------------------------------------

// Per-channel map c -> 255*(c/255)^(1/gamma); gamma=1 is the identity.
ImageBuffer gamma_correct(const ImageBuffer& img, double gamma);

// Separable Gaussian with kernel size k = max(3, round(min(w,h)/divisor))
// forced odd, sigma = 0.3*((k-1)*0.5 - 1) + 0.8, reflected borders.
ImageBuffer gaussian_blur(const ImageBuffer& img, int kernel_divisor);
int blur_kernel_size(int width, int height, int kernel_divisor);

// Dilation then erosion with a (2*radius+1)^2 square element, computed on a
// padded canvas so the result equals the infinite-plane closing cropped to
// the image; that form is idempotent.
PixelMask morphological_close(const PixelMask& mask, int radius);

// Membership = pixel LAB inside all three closed intervals.
PixelMask lab_threshold_mask(const ImageBuffer& img, const LabThresholds& t);

// True where a is true and b is false.
PixelMask subtract_mask(const PixelMask& a, const PixelMask& b);

// Pixels where the mask is true, row-major order.
std::vector<RgbColor> masked_pixels(const ImageBuffer& img, const PixelMask& mask);

// Convert each pixel to LAB, then average. Throws EmptyRegionError on an
// empty input.
LabColor mean_lab(const std::vector<RgbColor>& pixels);

// True iff hypot(x-cx, y-cy) <= radius, clipped at image borders.
PixelMask circular_mask(double cx, double cy, double radius, int width, int height);

// Area-averaged downscale so the long side is at most `max_side`; images
// already small enough come back unchanged. Aspect ratio is preserved.
ImageBuffer resize_to_max_side(const ImageBuffer& img, int max_side);

// Nearest-membership resize for masks, matching resize_to_max_side geometry.
PixelMask resize_mask_to_max_side(const PixelMask& mask, int max_side);

} // namespace chromatone
