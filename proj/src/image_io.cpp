#include "chromatone/errors.hpp"
#include "chromatone/image.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <jpeglib.h>

namespace chromatone {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_png_signature(const unsigned char* bytes, std::size_t n) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return n >= 8 && std::memcmp(bytes, sig, 8) == 0;
}

bool has_jpeg_signature(const unsigned char* bytes, std::size_t n) {
    return n >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

ImageBuffer decode_png(const std::string& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str()))
        throw DecodeError("PNG read failed for " + path + ": " + png.message);

    png.format = PNG_FORMAT_RGB;
    ImageBuffer img = make_image(static_cast<int>(png.width), static_cast<int>(png.height));
    if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw DecodeError("PNG decode failed for " + path + ": " + msg);
    }
    return img;
}

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

ImageBuffer decode_jpeg(const std::string& path, std::FILE* file) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("JPEG decode failed for " + path + ": " + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    ImageBuffer img = make_image(static_cast<int>(cinfo.output_width),
                                 static_cast<int>(cinfo.output_height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = reinterpret_cast<JSAMPROW>(
            img.pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * img.width);
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

} // namespace

ImageBuffer decode_image(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw MissingFileError("cannot open image file: " + path);

    unsigned char head[8] = {};
    std::size_t got = std::fread(head, 1, sizeof(head), file.get());

    if (has_png_signature(head, got)) {
        file.reset();
        return decode_png(path);
    }
    if (has_jpeg_signature(head, got)) {
        std::rewind(file.get());
        return decode_jpeg(path, file.get());
    }
    throw DecodeError("unsupported or corrupt image format: " + path);
}

PixelMask load_mask(const std::string& path, const ImageBuffer& img) {
    ImageBuffer raw = decode_image(path);
    if (raw.width != img.width || raw.height != img.height)
        throw DimensionMismatchError(
            "mask " + std::to_string(raw.width) + "x" + std::to_string(raw.height) +
            " does not match image " + std::to_string(img.width) + "x" +
            std::to_string(img.height));
    PixelMask mask = make_mask(raw.width, raw.height, false);
    for (std::size_t i = 0; i < raw.pixels.size(); ++i) {
        const RgbColor& p = raw.pixels[i];
        int mean = (static_cast<int>(p.r) + p.g + p.b) / 3;
        mask.bits[i] = mean >= 128 ? 1 : 0;
    }
    return mask;
}

void write_png(const std::string& path, const ImageBuffer& img) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.c_str(), 0, img.pixels.data(), 0, nullptr))
        throw Error("PNG write failed for " + path + ": " + png.message);
}

void write_png_gray(const std::string& path, const PixelMask& mask) {
    std::vector<std::uint8_t> gray(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        gray[i] = mask.bits[i] ? 255 : 0;

    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(mask.width);
    png.height = static_cast<png_uint_32>(mask.height);
    png.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.c_str(), 0, gray.data(), 0, nullptr))
        throw Error("PNG write failed for " + path + ": " + png.message);
}

Landmarks load_landmarks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError("cannot open landmarks file: " + path);
    Landmarks lm;
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (count >= 68)
            throw DecodeError("landmarks file has more than 68 points: " + path);
        std::istringstream ss(line);
        double x, y;
        if (!(ss >> x >> y))
            throw DecodeError("bad landmark line " + std::to_string(count + 1) +
                              " in " + path + ": '" + line + "'");
        lm.points[count] = {x, y};
        ++count;
    }
    if (count != 68)
        throw DecodeError("landmarks file has " + std::to_string(count) +
                          " points, expected 68: " + path);
    return lm;
}

void write_landmarks(const std::string& path, const Landmarks& lm) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write landmarks file: " + path);
    for (const auto& p : lm.points)
        out << static_cast<long>(std::lround(p[0])) << " "
            << static_cast<long>(std::lround(p[1])) << "\n";
}

} // namespace chromatone
