#include "hazstereo/io/png_io.hpp"

#include <cmath>
#include <csetjmp>
#include <cstring>

#include <png.h>

#include "hazstereo/core/error.hpp"
#include "hazstereo/io/pfm.hpp"
#include "hazstereo/match/matchers.hpp"

namespace hazstereo {

namespace {

struct MemReader {
    const std::vector<uint8_t>* bytes;
    size_t pos;
};

void read_cb(png_structp png, png_bytep out, png_size_t count) {
    auto* r = static_cast<MemReader*>(png_get_io_ptr(png));
    if (r->pos + count > r->bytes->size()) png_error(png, "unexpected end of stream");
    std::memcpy(out, r->bytes->data() + r->pos, count);
    r->pos += count;
}

void write_cb(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void flush_cb(png_structp) {}

struct PngRead {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngRead() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) raise(Errc::IoError, "png reader allocation failed");
    }
    ~PngRead() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWrite {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWrite() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) raise(Errc::IoError, "png writer allocation failed");
    }
    ~PngWrite() { png_destroy_write_struct(&png, &info); }
};

void check_signature(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        raise(Errc::ParseError, "not a png stream");
}

template <typename T>
std::vector<uint8_t> encode_common(const Image<T>& image, int bit_depth, int color_type) {
    if (image.width() <= 0 || image.height() <= 0)
        raise(Errc::ShapeMismatch, "png needs positive dimensions");
    PngWrite ctx;
    std::vector<uint8_t> out;
    if (setjmp(png_jmpbuf(ctx.png))) raise(Errc::IoError, "png encode failed");
    png_set_write_fn(ctx.png, &out, write_cb, flush_cb);
    png_set_IHDR(ctx.png, ctx.info, image.width(), image.height(), bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    if constexpr (sizeof(T) == 2) png_set_swap(ctx.png); // host little-endian rows
    std::vector<png_bytep> rows(image.height());
    for (int y = 0; y < image.height(); ++y)
        rows[y] = reinterpret_cast<png_bytep>(const_cast<T*>(image.row(y)));
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
    return out;
}

} // namespace

std::vector<uint8_t> encode_png8(const ImageU8& image) {
    if (image.channels() != 1 && image.channels() != 3)
        raise(Errc::ShapeMismatch, "png8 supports 1 or 3 channels");
    return encode_common(image, 8, image.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY);
}

ImageU8 decode_png8(const std::vector<uint8_t>& bytes) {
    check_signature(bytes);
    PngRead ctx;
    MemReader reader{&bytes, 0};
    if (setjmp(png_jmpbuf(ctx.png))) raise(Errc::ParseError, "png decode failed");
    png_set_read_fn(ctx.png, &reader, read_cb);
    png_read_info(ctx.png, ctx.info);

    const int depth = png_get_bit_depth(ctx.png, ctx.info);
    if (depth == 16) raise(Errc::WrongBitDepth, "expected 8-bit png, got 16-bit");
    const int color = png_get_color_type(ctx.png, ctx.info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const int w = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    const int h = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    const int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 1 && channels != 3) raise(Errc::ParseError, "unsupported png channel layout");

    ImageU8 img(w, h, channels);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = img.row(y);
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return img;
}

std::vector<uint8_t> encode_png16(const ImageU16& image) {
    if (image.channels() != 1) raise(Errc::ShapeMismatch, "png16 is single channel");
    return encode_common(image, 16, PNG_COLOR_TYPE_GRAY);
}

ImageU16 decode_png16(const std::vector<uint8_t>& bytes) {
    check_signature(bytes);
    PngRead ctx;
    MemReader reader{&bytes, 0};
    if (setjmp(png_jmpbuf(ctx.png))) raise(Errc::ParseError, "png decode failed");
    png_set_read_fn(ctx.png, &reader, read_cb);
    png_read_info(ctx.png, ctx.info);

    if (png_get_bit_depth(ctx.png, ctx.info) != 16)
        raise(Errc::WrongBitDepth, "expected 16-bit png");
    if (png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_GRAY)
        raise(Errc::WrongBitDepth, "expected grayscale 16-bit png");
    png_set_swap(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const int w = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    const int h = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    ImageU16 img(w, h, 1);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = reinterpret_cast<png_bytep>(img.row(y));
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return img;
}

std::vector<uint8_t> write_disp_png16(const ImageF& disp) {
    if (disp.channels() != 1) raise(Errc::ShapeMismatch, "disparity map must be single channel");
    ImageU16 stored(disp.width(), disp.height(), 1);
    for (size_t i = 0; i < disp.size(); ++i) {
        const float d = disp.data()[i];
        if (!std::isfinite(d) || d < 0.f) {
            stored.data()[i] = 0;
            continue;
        }
        // round(d*256); values that collapse to 0 become invalid by convention
        const long v = std::lround(static_cast<double>(d) * 256.0);
        stored.data()[i] = static_cast<uint16_t>(v > 65535 ? 65535 : v);
    }
    return encode_png16(stored);
}

ImageF read_disp_png16(const std::vector<uint8_t>& bytes) {
    const ImageU16 stored = decode_png16(bytes);
    ImageF disp(stored.width(), stored.height(), 1);
    for (size_t i = 0; i < stored.size(); ++i) {
        const uint16_t v = stored.data()[i];
        disp.data()[i] = v == 0 ? kInvalidDisparity : static_cast<float>(v) / 256.f;
    }
    return disp;
}

void write_png8_file(const std::string& path, const ImageU8& image) {
    write_file_bytes(path, encode_png8(image));
}

ImageU8 read_png8_file(const std::string& path) { return decode_png8(read_file_bytes(path)); }

void write_png16_file(const std::string& path, const ImageU16& image) {
    write_file_bytes(path, encode_png16(image));
}

ImageU16 read_png16_file(const std::string& path) { return decode_png16(read_file_bytes(path)); }

void write_mask_file(const std::string& path, const Mask& mask) {
    ImageU8 img(mask.width(), mask.height(), 1);
    for (size_t i = 0; i < mask.size(); ++i) img.data()[i] = mask.data()[i] ? 255 : 0;
    write_file_bytes(path, encode_png8(img));
}

Mask read_mask_file(const std::string& path) {
    const ImageU8 img = read_png8_file(path);
    if (img.channels() != 1) raise(Errc::ParseError, "mask png must be grayscale");
    Mask mask(img.width(), img.height(), 1);
    for (size_t i = 0; i < img.size(); ++i) mask.data()[i] = img.data()[i] >= 128 ? 1 : 0;
    return mask;
}

} // namespace hazstereo
