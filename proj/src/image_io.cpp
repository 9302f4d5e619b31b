#include "weldkit/image_io.hpp"

#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <jpeglib.h>
#include <png.h>

#include "weldkit/error.hpp"

namespace weldkit {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string read_text(const std::filesystem::path& path) {
    const auto b = read_bytes(path);
    return {b.begin(), b.end()};
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
    const std::string header = fmt::format("P5\n{} {}\n255\n", image.width(), image.height());
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.data().begin(), image.data().end());
    return out;
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto number = [&]() -> std::size_t {
        skip_space();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw DecodeError("pgm: malformed header");
        std::size_t v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
        return v;
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw DecodeError("pgm: not a binary P5 file");
    pos = 2;
    const std::size_t w = number();
    const std::size_t h = number();
    const std::size_t maxval = number();
    if (maxval != 255) throw DecodeError(fmt::format("pgm: unsupported maxval {}", maxval));
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw DecodeError("pgm: malformed header");
    ++pos;
    if (w == 0 || h == 0 || bytes.size() - pos != w * h)
        throw DecodeError(fmt::format("pgm: expected {} samples, found {}", w * h, bytes.size() - pos));
    return GrayImage(w, h, std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end()));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) { write_bytes(path, encode_pgm(image)); }

GrayImage read_pgm(const std::filesystem::path& path) {
    try {
        return decode_pgm(read_bytes(path));
    } catch (const DecodeError& e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
}

void write_png(const std::filesystem::path& path, const GrayImage& image) {
    png_image png;
    std::memset(&png, 0, sizeof png);
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width());
    png.height = static_cast<png_uint_32>(image.height());
    png.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, image.data().data(), 0, nullptr))
        throw InputError(fmt::format("png: cannot write {}: {}", path.string(), png.message));
}

Raster read_png(const std::filesystem::path& path) {
    png_image png;
    std::memset(&png, 0, sizeof png);
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str()))
        throw DecodeError(fmt::format("png: {}: {}", path.string(), png.message));
    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    Raster r{png.width, png.height, color ? 3 : 1, {}};
    r.data.resize(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, r.data.data(), 0, nullptr)) {
        png_image_free(&png);
        throw DecodeError(fmt::format("png: {}: {}", path.string(), png.message));
    }
    return r;
}

namespace {

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    std::longjmp(reinterpret_cast<JpegErrorManager*>(cinfo->err)->jump, 1);
}

}  // namespace

Raster read_jpeg(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    Raster r;
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    char message[JMSG_LENGTH_MAX] = {};
    if (setjmp(err.jump)) {
        (*cinfo.err->format_message)(reinterpret_cast<j_common_ptr>(&cinfo), message);
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError(fmt::format("jpeg: {}: {}", path.string(), message));
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    r.width = cinfo.output_width;
    r.height = cinfo.output_height;
    r.channels = cinfo.output_components;
    r.data.resize(r.width * r.height * static_cast<std::size_t>(r.channels));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = r.data.data() + cinfo.output_scanline * r.width * static_cast<std::size_t>(r.channels);
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return r;
}

}  // namespace weldkit
