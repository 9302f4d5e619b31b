#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "weldkit/augment.hpp"
#include "weldkit/error.hpp"
#include "weldkit/parallel.hpp"
#include "weldkit/rng.hpp"

using namespace weldkit;

namespace {

std::vector<Annotation> random_boxes(std::size_t w, std::size_t h, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Annotation> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double bw = uniform(rng, 4, double(w) / 4), bh = uniform(rng, 4, double(h) / 4);
        const double x = uniform(rng, 0, double(w) - bw), y = uniform(rng, 0, double(h) - bh);
        out.push_back({{x, y, x + bw, y + bh}, int(i % kNumClasses)});
    }
    return out;
}

bool near(const BBox& a, const BBox& b, double tol) {
    return std::abs(a.xmin - b.xmin) <= tol && std::abs(a.ymin - b.ymin) <= tol && std::abs(a.xmax - b.xmax) <= tol &&
           std::abs(a.ymax - b.ymax) <= tol;
}

// Independent corner map for each geometric kind, before clipping.
BBox oracle_transform(AugmentKind kind, const ParamMap& p, const BBox& b, std::size_t w, std::size_t h) {
    switch (kind) {
        case AugmentKind::Rotation:
            return oracle::rotate_enclose(b, p.at("angle_deg"), 0.5 * double(w), 0.5 * double(h));
        case AugmentKind::HFlip:
            return {double(w) - b.xmax, b.ymin, double(w) - b.xmin, b.ymax};
        case AugmentKind::Resize: {
            const double nw = std::max(1.0, std::floor(double(w) * p.at("scale") + 0.5));
            const double nh = std::max(1.0, std::floor(double(h) * p.at("scale") + 0.5));
            const double sx = nw / double(w), sy = nh / double(h);
            return {b.xmin * sx, b.ymin * sy, b.xmax * sx, b.ymax * sy};
        }
        case AugmentKind::RandomCrop:
            return {b.xmin - p.at("x"), b.ymin - p.at("y"), b.xmax - p.at("x"), b.ymax - p.at("y")};
        default:
            return b;
    }
}

}  // namespace

TEST_SUITE("augment") {

TEST_CASE("kind names round trip and the kind list has eight entries") {
    CHECK(kAugmentKinds.size() == 8);
    for (AugmentKind k : kAugmentKinds) CHECK(kind_from_name(kind_name(k)) == k);
    CHECK_THROWS_AS(kind_from_name("mixup"), ParameterError);
}

TEST_CASE("hflip example and involution") {
    const GrayImage img = oracle::random_image(100, 60, 3);
    const std::vector<Annotation> anns = {{{10, 20, 30, 40}, 0}};
    const Augmented once = augment_one(img, anns, AugmentKind::HFlip, 9);
    REQUIRE(once.annotations.size() == 1);
    CHECK(once.annotations[0].bbox == BBox{70, 20, 90, 40});
    const Augmented twice = augment_one(once.image, once.annotations, AugmentKind::HFlip, 9);
    CHECK(twice.image == img);
    CHECK(twice.annotations == anns);
}

TEST_CASE("rotation boxes match corner rotation") {
    const GrayImage img(200, 160, 90);
    const std::vector<Annotation> anns = {{{80, 60, 120, 100}, 3}};
    AugmentOptions opt;
    opt.drop_truncated = false;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Augmented a = augment_one(img, anns, AugmentKind::Rotation, s, opt);
        REQUIRE(a.annotations.size() == 1);
        const BBox want = oracle::rotate_enclose(anns[0].bbox, a.record.params.at("angle_deg"), 100, 80);
        CHECK(near(a.annotations[0].bbox, want, 1e-6));
    }
}

TEST_CASE("geometric kinds agree with independent corner maps") {
    const std::size_t w = 180, h = 140;
    const GrayImage img = oracle::random_image(w, h, 17);
    AugmentOptions opt;
    opt.drop_truncated = false;
    for (AugmentKind kind : {AugmentKind::Rotation, AugmentKind::HFlip, AugmentKind::Resize, AugmentKind::RandomCrop})
        for (std::uint64_t s = 0; s < 25; ++s) {
            const auto anns = random_boxes(w, h, 6, s);
            const Augmented a = augment_one(img, anns, kind, s, opt);
            std::vector<Annotation> want;
            for (const auto& b : anns) {
                const auto c = clip_to(oracle_transform(kind, a.record.params, b.bbox, w, h), double(a.image.width()),
                                       double(a.image.height()));
                if (c) want.push_back({*c, b.class_id});
            }
            CAPTURE(kind_name(kind));
            REQUIRE(a.annotations.size() == want.size());
            for (std::size_t i = 0; i < want.size(); ++i) {
                CHECK(a.annotations[i].class_id == want[i].class_id);
                CHECK(near(a.annotations[i].bbox, want[i].bbox, 1e-6));
            }
        }
}

TEST_CASE("photometric kinds and cutout leave boxes untouched") {
    const GrayImage img = oracle::random_image(120, 90, 4);
    const auto anns = random_boxes(120, 90, 5, 4);
    for (AugmentKind kind :
         {AugmentKind::Brightness, AugmentKind::GaussianNoise, AugmentKind::ColorJitter, AugmentKind::Cutout})
        for (std::uint64_t s = 0; s < 10; ++s) {
            const Augmented a = augment_one(img, anns, kind, s);
            CHECK(a.annotations == anns);
            CHECK(a.image.width() == img.width());
        }
}

TEST_CASE("cutout zeroes a rectangle in range") {
    const GrayImage img(100, 100, 200);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Augmented a = augment_one(img, {}, AugmentKind::Cutout, s);
        std::size_t zeros = 0;
        for (auto v : a.image.data()) zeros += v == 0;
        CHECK(zeros >= 400);
        CHECK(zeros <= 2200);
    }
}

TEST_CASE("output boxes are valid and inside the frame") {
    const GrayImage img = oracle::random_image(160, 120, 8);
    for (AugmentKind kind : kAugmentKinds)
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto anns = random_boxes(160, 120, 8, s + 100);
            const Augmented a = augment_one(img, anns, kind, s);
            for (const auto& b : a.annotations) {
                CHECK(b.bbox.valid());
                CHECK(b.bbox.xmin >= 0);
                CHECK(b.bbox.ymin >= 0);
                CHECK(b.bbox.xmax <= double(a.image.width()));
                CHECK(b.bbox.ymax <= double(a.image.height()));
            }
        }
}

TEST_CASE("truncated boxes are dropped below a quarter of their area") {
    const GrayImage img(100, 100, 50);
    const std::vector<Annotation> anns = {{{0, 40, 10, 50}, 0}, {{40, 40, 60, 60}, 1}};
    const ParamMap crop = {{"x", 8}, {"y", 0}, {"w", 80}, {"h", 100}};
    const Augmented kept = apply_augment(img, anns, AugmentKind::RandomCrop, crop, 0);
    REQUIRE(kept.annotations.size() == 1);
    CHECK(kept.annotations[0].class_id == 1);
    AugmentOptions keep_all;
    keep_all.drop_truncated = false;
    CHECK(apply_augment(img, anns, AugmentKind::RandomCrop, crop, 0, keep_all).annotations.size() == 2);
}

TEST_CASE("replay reproduces every kind byte for byte") {
    const GrayImage img = oracle::random_image(96, 64, 21);
    const auto anns = random_boxes(96, 64, 4, 21);
    for (AugmentKind kind : kAugmentKinds) {
        const Augmented a = augment_one(img, anns, kind, 77);
        const Augmented b = replay(img, anns, a.record);
        CHECK(a.image == b.image);
        CHECK(a.annotations == b.annotations);
    }
}

TEST_CASE("variant kinds cycle through the list") {
    CHECK(variant_kind(1, false) == AugmentKind::Brightness);
    CHECK(variant_kind(8, false) == AugmentKind::RandomCrop);
    CHECK(variant_kind(9, false) == AugmentKind::Brightness);
    CHECK_FALSE(variant_kind(1, true).has_value());
    CHECK(variant_kind(2, true) == AugmentKind::Brightness);
    CHECK(variant_id("f01", 3) == "f01_v3");
}

TEST_CASE("expansion scales per-class counts exactly") {
    std::vector<Sample> samples;
    std::map<int, std::size_t> original;
    for (int i = 0; i < 12; ++i) {
        Sample s{"s" + std::to_string(i), oracle::random_image(48, 40, i), random_boxes(48, 40, 3, i)};
        for (const auto& a : s.annotations) ++original[a.class_id];
        samples.push_back(std::move(s));
    }
    for (int n : {1, 9}) {
        ExpandOptions opt;
        opt.multiplier = n;
        opt.master_seed = 5;
        opt.augment.drop_truncated = false;
        const auto out = expand_dataset(samples, opt);
        CHECK(out.size() == samples.size() * std::size_t(n));
        std::map<int, std::size_t> counts;
        for (const auto& a : out)
            for (const auto& b : a.annotations) ++counts[b.class_id];
        for (const auto& [cls, c] : original) CHECK(counts[cls] == c * std::size_t(n));
    }
}

TEST_CASE("expansion is deterministic and independent of the worker count") {
    std::vector<Sample> samples;
    for (int i = 0; i < 6; ++i) samples.push_back({"p" + std::to_string(i), oracle::random_image(40, 40, i), {}});
    ExpandOptions opt;
    opt.master_seed = 123;
    set_jobs(1);
    const auto a = expand_dataset(samples, opt);
    set_jobs(3);
    const auto b = expand_dataset(samples, opt);
    set_jobs(0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].image == b[i].image);
        CHECK(record_to_json_line(a[i].record) == record_to_json_line(b[i].record));
    }
    CHECK_THROWS_AS(expand_sample(samples[0], {.multiplier = 0}), ParameterError);
}

TEST_CASE("mosaic without boxes has the exact side") {
    const GrayImage img = oracle::random_image(30, 20, 1);
    const std::array<MosaicTile, 4> tiles = {{{&img, {}}, {&img, {}}, {&img, {}}, {&img, {}}}};
    const auto [canvas, boxes] = mosaic(tiles, 64, 3);
    CHECK(canvas.width() == 64);
    CHECK(canvas.height() == 64);
    CHECK(boxes.empty());
    CHECK_THROWS_AS(mosaic(tiles, 1, 3), ParameterError);
}

TEST_CASE("mosaic centered on identical tiles has identical quadrants") {
    const GrayImage img = oracle::random_image(50, 50, 2);
    const std::array<MosaicTile, 4> tiles = {{{&img, {}}, {&img, {}}, {&img, {}}, {&img, {}}}};
    const auto [canvas, boxes] = mosaic(tiles, 80, 0, {}, Point{40, 40});
    for (std::size_t y = 0; y < 40; ++y)
        for (std::size_t x = 0; x < 40; ++x) {
            const auto v = canvas.at(x, y);
            if (canvas.at(x + 40, y) != v || canvas.at(x, y + 40) != v || canvas.at(x + 40, y + 40) != v)
                FAIL("quadrants differ at " << x << "," << y);
        }
}

TEST_CASE("mosaic boxes stay inside their quadrant") {
    const GrayImage img = oracle::random_image(64, 48, 6);
    for (std::uint64_t s = 0; s < 100; ++s) {
        std::array<std::vector<Annotation>, 4> anns;
        for (std::size_t q = 0; q < 4; ++q) {
            anns[q] = random_boxes(64, 48, 3, s * 4 + q);
            for (auto& a : anns[q]) a.class_id = int(q);
        }
        const std::array<MosaicTile, 4> tiles = {{{&img, anns[0]}, {&img, anns[1]}, {&img, anns[2]}, {&img, anns[3]}}};
        const auto [canvas, boxes] = mosaic(tiles, 128, s);
        for (const auto& b : boxes) {
            if (!(b.bbox.valid() && b.bbox.xmin >= 0 && b.bbox.ymin >= 0 && b.bbox.xmax <= 128 && b.bbox.ymax <= 128))
                FAIL("box outside canvas");
        }
        Rng rng(s);
        const double cx = std::floor(uniform(rng, 32, 96)), cy = std::floor(uniform(rng, 32, 96));
        for (const auto& b : boxes) {
            const bool right = b.class_id % 2 == 1, bottom = b.class_id >= 2;
            const bool ok = (right ? b.bbox.xmin >= cx : b.bbox.xmax <= cx) && (bottom ? b.bbox.ymin >= cy : b.bbox.ymax <= cy);
            if (!ok) FAIL("box leaves quadrant " << b.class_id << " in trial " << s);
        }
    }
}

TEST_CASE("provenance record serializes one JSON object") {
    AugmentRecord r{"f1", 2, AugmentKind::Rotation, {{"angle_deg", 3.5}}, 42};
    const std::string line = record_to_json_line(r);
    CHECK(line.find('\n') == line.size() - 1);
    CHECK(line.find("\"kind\":\"rotation\"") != std::string::npos);
    CHECK(line.find("\"parent_id\":\"f1\"") != std::string::npos);
}

}
