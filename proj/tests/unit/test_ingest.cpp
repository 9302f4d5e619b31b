#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weldkit/error.hpp"
#include "weldkit/image_io.hpp"
#include "weldkit/ingest.hpp"
#include "weldkit/rng.hpp"

using namespace weldkit;

namespace {

const std::filesystem::path kData = WELDKIT_TEST_DATA;

RawSpec spec16(std::size_t w, std::size_t h, double lo, double hi, Endian e = Endian::Little) {
    RawSpec s;
    s.width = w;
    s.height = h;
    s.bit_depth = 16;
    s.endian = e;
    s.window_lo = lo;
    s.window_hi = hi;
    return s;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("decode_raw 8-bit passes through") {
    RawSpec s;
    s.width = 2;
    s.height = 1;
    s.bit_depth = 8;
    const std::vector<std::uint8_t> bytes{0, 255};
    CHECK(decode_raw(bytes, s) == GrayImage(2, 1, bytes));
}

TEST_CASE("decode_raw 16-bit windowing") {
    const std::vector<std::uint8_t> le{0x00, 0x02};
    CHECK(decode_raw(le, spec16(1, 1, 0, 1024)).at(0, 0) == 128);
    const std::vector<std::uint8_t> be{0x02, 0x00};
    CHECK(decode_raw(be, spec16(1, 1, 0, 1024, Endian::Big)).at(0, 0) == 128);
    // Outside the window clamps.
    const std::vector<std::uint8_t> hi{0xff, 0xff};
    CHECK(decode_raw(hi, spec16(1, 1, 0, 1024)).at(0, 0) == 255);
}

TEST_CASE("decode_raw errors") {
    const std::vector<std::uint8_t> three{1, 2, 3};
    CHECK_THROWS_AS(decode_raw(three, spec16(2, 1, 0, 65535)), DecodeError);
    const std::vector<std::uint8_t> two{1, 2};
    CHECK_THROWS_AS(decode_raw(two, spec16(1, 1, 10, 10)), SpecError);
    RawSpec bad = spec16(1, 1, 0, 10);
    bad.bit_depth = 12;
    CHECK_THROWS_AS(bad.validate(), SpecError);
}

TEST_CASE("decode_raw is monotone") {
    const RawSpec s = spec16(1, 1, 1000, 50000);
    int last = -1;
    for (unsigned v = 0; v < 65536; v += 37) {
        const std::vector<std::uint8_t> b{std::uint8_t(v & 0xff), std::uint8_t(v >> 8)};
        const int px = decode_raw(b, s).at(0, 0);
        CHECK(px >= last);
        last = px;
    }
}

TEST_CASE("to_grayscale") {
    for (int v = 0; v < 256; ++v) {
        const std::vector<std::uint8_t> rgb(3, std::uint8_t(v));
        CHECK(to_grayscale(rgb, 1, 1).at(0, 0) == v);
    }
    const std::vector<std::uint8_t> red{255, 0, 0};
    CHECK(to_grayscale(red, 1, 1).at(0, 0) == 76);
    const std::vector<std::uint8_t> rgb(3 * 4 * 5, 9);
    CHECK(to_grayscale(rgb, 4, 5).size() == rgb.size() / 3);
}

TEST_CASE("crop") {
    const GrayImage img = oracle::random_image(30, 20, 5);
    CHECK(crop(img, {0, 0, 30, 20}) == img);
    const GrayImage one = crop(img, {7, 4, 8, 5});
    CHECK(one.width() == 1);
    CHECK(one.at(0, 0) == img.at(7, 4));
    CHECK_THROWS_AS(crop(img, {25, 0, 31, 5}), GeometryError);
    CHECK_THROWS_AS(crop(img, {1.5, 0, 4, 5}), GeometryError);
}

TEST_CASE("crop pieces reassemble the original") {
    const GrayImage img = oracle::random_image(41, 29, 77);
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t cx = 1 + rng() % 40, cy = 1 + rng() % 28;
        const GrayImage parts[4] = {
            crop(img, {0, 0, double(cx), double(cy)}),
            crop(img, {double(cx), 0, 41, double(cy)}),
            crop(img, {0, double(cy), double(cx), 29}),
            crop(img, {double(cx), double(cy), 41, 29}),
        };
        GrayImage back(41, 29);
        const std::size_t ox[4] = {0, cx, 0, cx}, oy[4] = {0, 0, cy, cy};
        for (int p = 0; p < 4; ++p)
            for (std::size_t y = 0; y < parts[p].height(); ++y)
                for (std::size_t x = 0; x < parts[p].width(); ++x) back.at(ox[p] + x, oy[p] + y) = parts[p].at(x, y);
        CHECK(back == img);
    }
}

TEST_CASE("crop composition") {
    const GrayImage img = oracle::random_image(50, 40, 9);
    const GrayImage twice = crop(crop(img, {5, 6, 45, 36}), {3, 2, 20, 25});
    CHECK(twice == crop(img, {8, 8, 25, 31}));
}

TEST_CASE("letterbox examples") {
    const GrayImage square = oracle::random_image(640, 640, 1);
    auto [same, t0] = letterbox(square, 640, 32);
    CHECK(same == square);
    CHECK(t0.scale == 1.0);
    CHECK(t0.pad_left == 0);
    CHECK(t0.pad_top == 0);

    const GrayImage wide(1280, 720, 50);
    auto [out, t] = letterbox(wide, 640, 32);
    CHECK(out.width() == 640);
    CHECK(out.height() == 384);
    CHECK(t.scale == 0.5);
    CHECK(t.pad_left == 0);
    CHECK(t.pad_top == 12);
    CHECK(out.at(0, 0) == kLetterboxFill);
    CHECK(out.at(0, 11) == kLetterboxFill);
    CHECK(out.at(0, 12) == 50);
    CHECK(out.at(639, 371) == 50);
    CHECK(out.at(639, 372) == kLetterboxFill);
}

TEST_CASE("letterbox dimensions, aspect and box round trip") {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t w = 20 + rng() % 300, h = 20 + rng() % 300;
        const GrayImage img(w, h, 10);
        auto [out, t] = letterbox(img, 256, 32);
        CHECK(out.width() % 32 == 0);
        CHECK(out.height() % 32 == 0);
        CHECK(std::max(out.width(), out.height()) == 256);
        // Content region keeps the aspect ratio within a pixel.
        std::size_t cw = 0, ch = 0;
        for (std::size_t x = 0; x < out.width(); ++x) cw += out.at(x, out.height() / 2) == 10;
        for (std::size_t y = 0; y < out.height(); ++y) ch += out.at(out.width() / 2, y) == 10;
        CHECK(std::abs(double(cw) - double(w) * t.scale) <= 1.0);
        CHECK(std::abs(double(ch) - double(h) * t.scale) <= 1.0);
        const BBox b{uniform(rng, 0, 10), uniform(rng, 0, 10), uniform(rng, 11, 19), uniform(rng, 11, 19)};
        const BBox back = t.invert(t.apply(b));
        CHECK(std::abs(back.xmin - b.xmin) < 1e-6);
        CHECK(std::abs(back.ymax - b.ymax) < 1e-6);
    }
}

TEST_CASE("PGM round trip and parse errors") {
    const GrayImage img = oracle::random_image(13, 7, 4);
    CHECK(decode_pgm(encode_pgm(img)) == img);
    const std::string with_comment = "P5\n# made by hand\n2 1\n255\n\x01\x02";
    const std::vector<std::uint8_t> bytes(with_comment.begin(), with_comment.end());
    CHECK(decode_pgm(bytes) == GrayImage(2, 1, std::vector<std::uint8_t>{1, 2}));
    const std::string truncated = "P5\n2 2\n255\n\x01";
    CHECK_THROWS_AS(decode_pgm(std::vector<std::uint8_t>(truncated.begin(), truncated.end())), DecodeError);
    const std::string p2 = "P2\n1 1\n255\n1";
    CHECK_THROWS_AS(decode_pgm(std::vector<std::uint8_t>(p2.begin(), p2.end())), DecodeError);
}

TEST_CASE("PNG and JPEG decoding") {
    oracle::TempDir dir("png");
    const GrayImage img = oracle::random_image(19, 5, 6);
    write_png(dir.path() / "a.png", img);
    CHECK(load_gray(dir.path() / "a.png") == img);

    const GrayImage rgb = load_gray(kData / "rgb3x2.png");
    CHECK(rgb.width() == 3);
    CHECK(rgb.at(2, 1) == 124);

    const GrayImage gray = load_gray(kData / "gray8x6.jpg");
    CHECK(gray.width() == 8);
    CHECK(gray.height() == 6);
    CHECK(std::abs(int(gray.at(3, 3)) - 200) <= 1);
    const GrayImage red = load_gray(kData / "red5x4.jpg");
    CHECK(red.width() == 5);
    CHECK(std::abs(int(red.at(2, 2)) - 76) <= 2);
}

TEST_CASE("load_gray errors") {
    oracle::TempDir dir("bad");
    write_text(dir.path() / "x.raw", "ab");
    CHECK_THROWS_AS(load_gray(dir.path() / "x.raw"), ParameterError);
    write_text(dir.path() / "x.png", "not a png");
    CHECK_THROWS_AS(load_gray(dir.path() / "x.png"), InputError);
    write_text(dir.path() / "x.jpg", "not a jpeg");
    CHECK_THROWS_AS(load_gray(dir.path() / "x.jpg"), InputError);
    CHECK_THROWS_AS(load_gray(dir.path() / "missing.pgm"), InputError);
    CHECK_THROWS_AS(load_gray(dir.path() / "x.bmp"), InputError);
}

}  // TEST_SUITE
