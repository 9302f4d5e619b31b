#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "weldkit/anchors.hpp"
#include "weldkit/dataset.hpp"
#include "weldkit/error.hpp"
#include "weldkit/formats.hpp"
#include "weldkit/manifest.hpp"
#include "weldkit/rng.hpp"

using namespace weldkit;

namespace {

std::vector<Annotation> seeded_boxes(std::size_t w, std::size_t h, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Annotation> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double bw = uniform(rng, 1, double(w) / 2), bh = uniform(rng, 1, double(h) / 2);
        const double x = uniform(rng, 0, double(w) - bw), y = uniform(rng, 0, double(h) - bh);
        out.push_back({{x, y, x + bw, y + bh}, int(rng() % kNumClasses)});
    }
    return out;
}

bool within(const BBox& a, const BBox& b, double tol) {
    return std::abs(a.xmin - b.xmin) <= tol && std::abs(a.ymin - b.ymin) <= tol && std::abs(a.xmax - b.xmax) <= tol &&
           std::abs(a.ymax - b.ymax) <= tol;
}

Manifest grouped_manifest(std::size_t originals, int variants) {
    Manifest m;
    for (std::size_t i = 0; i < originals; ++i) {
        const std::string id = "g" + std::to_string(i);
        m.records.push_back({id, "images/" + id + ".pgm", 64, 64, {}, Split::Unassigned, std::nullopt});
        for (int v = 1; v <= variants; ++v) {
            const std::string vid = id + "_v" + std::to_string(v);
            m.records.push_back({vid, "images/" + vid + ".pgm", 64, 64, {}, Split::Unassigned, id});
        }
    }
    return m;
}

std::size_t count_split(const Manifest& m, Split s) {
    return std::size_t(std::count_if(m.records.begin(), m.records.end(), [&](const auto& r) { return r.split == s; }));
}

}  // namespace

TEST_SUITE("datasets") {

TEST_CASE("labelme: corner normalization and class lookup") {
    const std::string doc = R"({"imagePath":"a.png","imageWidth":64,"imageHeight":48,"shapes":[
        {"label":"crack","points":[[30,10],[10,40]],"shape_type":"rectangle"},
        {"label":"crack","points":[[1,1],[2,2],[3,1]],"shape_type":"polygon"}]})";
    const LabeledImage li = parse_labelme(doc);
    REQUIRE(li.annotations.size() == 1);
    CHECK(li.annotations[0].bbox == BBox{10, 10, 30, 40});
    CHECK(li.annotations[0].class_id == 3);
    CHECK(li.skipped_shapes == 1);
    CHECK(li.width == 64);
}

TEST_CASE("labelme: empty shapes, unknown label and malformed JSON") {
    CHECK(parse_labelme(R"({"imagePath":"a","imageWidth":4,"imageHeight":4,"shapes":[]})").annotations.empty());
    const std::string bad = R"({"imagePath":"a","imageWidth":4,"imageHeight":4,"shapes":[
        {"label":"porosity","points":[[0,0],[1,1]],"shape_type":"rectangle"}]})";
    CHECK_THROWS_WITH_AS(parse_labelme(bad), "unknown label: porosity", ClassError);
    try {
        parse_labelme(R"({"imagePath": )");
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("yolo: example line, empty file and errors") {
    const std::vector<Annotation> one = {{{100, 50, 300, 150}, 3}};
    CHECK(write_yolo(one, 400, 200) == "3 0.500000 0.500000 0.500000 0.500000\n");
    CHECK(write_yolo({}, 400, 200).empty());
    CHECK(parse_yolo("", 10, 10).empty());
    CHECK_THROWS_WITH_AS(parse_yolo("0 0.5 0.5 0.1\n", 10, 10), "yolo line 1: expected 5 fields, found 4", FormatError);
    CHECK_THROWS_AS(parse_yolo("0 0.5 0.5 0.1 0.1\n1 1.5 0.5 0.1 0.1\n", 10, 10), FormatError);
}

TEST_CASE("voc: inclusive one-based corners and idempotent writer") {
    LabeledImage li{"x.png", 64, 64, {{{10, 10, 30, 40}, 4}}, 0};
    const std::string xml = write_voc(li);
    CHECK(xml.find("<xmin>11</xmin>") != std::string::npos);
    CHECK(xml.find("<ymin>11</ymin>") != std::string::npos);
    CHECK(xml.find("<xmax>30</xmax>") != std::string::npos);
    CHECK(xml.find("<ymax>40</ymax>") != std::string::npos);
    CHECK(xml.find("<depth>1</depth>") != std::string::npos);
    const LabeledImage back = parse_voc(xml);
    CHECK(back.annotations == li.annotations);
    CHECK(write_voc(back) == xml);
}

TEST_CASE("voc: missing bndbox child is named") {
    const std::string xml = "<annotation><filename>a</filename><size><width>8</width><height>8</height>"
                            "<depth>1</depth></size><object><name>crack</name><bndbox><xmin>1</xmin>"
                            "<ymin>1</ymin><xmax>4</xmax></bndbox></object></annotation>";
    try {
        parse_voc(xml);
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("ymax") != std::string::npos);
    }
}

TEST_CASE("format round trips stay within half a pixel") {
    const std::size_t w = 640, h = 480;
    const auto boxes = seeded_boxes(w, h, 1000, 2024);
    LabeledImage li{"img.png", w, h, boxes, 0};
    const auto via_labelme = parse_labelme(write_labelme(li));
    const auto yolo = parse_yolo(write_yolo(via_labelme.annotations, w, h), w, h);
    const LabeledImage back = parse_labelme(write_labelme({"img.png", w, h, yolo, 0}));
    REQUIRE(back.annotations.size() == boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        CHECK(back.annotations[i].class_id == boxes[i].class_id);
        if (!within(back.annotations[i].bbox, boxes[i].bbox, 0.5)) FAIL("labelme/yolo drift at " << i);
    }
    const auto voc = parse_voc(write_voc({"img.png", w, h, yolo, 0}));
    const auto yolo2 = parse_yolo(write_yolo(voc.annotations, w, h), w, h);
    // Integer VOC corners plus half a 6-decimal YOLO step.
    const double bound = 0.5 + 0.5e-6 * double(w);
    for (std::size_t i = 0; i < boxes.size(); ++i)
        if (!within(yolo2[i].bbox, yolo[i].bbox, bound)) FAIL("yolo/voc drift at " << i);
}

TEST_CASE("manifest: JSON lines round trip and validation") {
    Manifest m = grouped_manifest(3, 2);
    m.records[0].annotations = {{{1, 2, 10, 12}, 5}};
    m.records[1].split = Split::Val;
    const Manifest back = manifest_from_jsonl(manifest_to_jsonl(m));
    CHECK(manifest_to_jsonl(back) == manifest_to_jsonl(m));
    CHECK(back.records[1].parent_id == std::optional<std::string>("g0"));
    CHECK_NOTHROW(m.validate());
    Manifest dup = m;
    dup.records[1].frame_id = "g0";
    CHECK_THROWS_AS(dup.validate(), InputError);
    Manifest outside = m;
    outside.records[0].annotations = {{{50, 50, 70, 60}, 0}};
    CHECK_THROWS_AS(outside.validate(), InputError);
}

TEST_CASE("split: group counts") {
    CHECK(val_group_count(3408, {}) == 682);
    CHECK(val_group_count(10, {}) == 2);
    Manifest m = grouped_manifest(10, 0);
    split(m, {}, 1);
    CHECK(count_split(m, Split::Val) == 2);
    CHECK(count_split(m, Split::Train) == 8);
    Manifest empty;
    CHECK_THROWS_AS(split(empty, {}, 1), InputError);
    CHECK_THROWS_AS(split(m, {0, 2}, 1), ParameterError);
}

TEST_CASE("split: seeded determinism") {
    Manifest a = grouped_manifest(20, 0), b = a, c = a;
    split(a, {}, 7);
    split(b, {}, 7);
    split(c, {}, 8);
    bool differs = false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].split == b.records[i].split);
        differs = differs || a.records[i].split != c.records[i].split;
    }
    CHECK(differs);
}

TEST_CASE("split: partition and group integrity") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Manifest m = grouped_manifest(5 + seed, 3);
        split(m, {}, seed, true);
        std::map<std::string, std::set<Split>> per_group;
        for (const auto& r : m.records) {
            CHECK(r.split != Split::Unassigned);
            per_group[r.group_key()].insert(r.split);
        }
        for (const auto& [key, splits] : per_group) CHECK(splits.size() == 1);
        std::size_t val_groups = 0;
        for (const auto& [key, splits] : per_group) val_groups += splits.count(Split::Val);
        CHECK(val_groups == val_group_count(per_group.size(), {}));
    }
}

TEST_CASE("split: ungrouped mode splits every record") {
    Manifest m = grouped_manifest(4, 4);
    split(m, {}, 3, false);
    CHECK(count_split(m, Split::Val) == val_group_count(m.records.size(), {}));
}

TEST_CASE("stats: single box and class counts") {
    Manifest m;
    m.records.push_back({"a", "a.png", 100, 100, {{{0, 0, 20, 10}, 0}}, Split::Train, std::nullopt});
    const DatasetStats s = dataset_stats(m);
    REQUIRE(s.centers.size() == 1);
    CHECK(s.centers[0].x == doctest::Approx(0.10));
    CHECK(s.centers[0].y == doctest::Approx(0.05));
    CHECK(s.aspect_mean == doctest::Approx(2.0));
    CHECK(s.wider_fraction == 1.0);
    m.records[0].annotations.push_back({{5, 5, 10, 20}, 3});
    const DatasetStats t = dataset_stats(m);
    CHECK(t.class_counts == std::array<std::size_t, kNumClasses>{1, 0, 0, 1, 0, 0, 0, 0});
    CHECK(dataset_stats(Manifest{}).total_boxes == 0);
}

TEST_CASE("stats: counts match a recount") {
    Manifest m;
    for (int i = 0; i < 40; ++i)
        m.records.push_back({"r" + std::to_string(i), "x", 320, 240, seeded_boxes(320, 240, std::size_t(i % 7), i),
                             Split::Unassigned, std::nullopt});
    std::array<std::size_t, kNumClasses> tally{};
    std::size_t total = 0;
    for (const auto& r : m.records)
        for (const auto& a : r.annotations) {
            ++tally[std::size_t(a.class_id)];
            ++total;
        }
    const DatasetStats s = dataset_stats(m);
    CHECK(s.class_counts == tally);
    CHECK(s.total_boxes == total);
    std::size_t sum = 0;
    for (auto c : s.class_counts) sum += c;
    CHECK(sum == s.total_boxes);
    const std::string svg = stats_to_svg(s);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(stats_to_json(s).find("\"total_boxes\"") != std::string::npos);
}

TEST_CASE("anchors: degenerate and separable clusters") {
    const std::vector<BoxSize> same(12, BoxSize{14, 9});
    const AnchorSet one = cluster_anchors(same, 1, 20, 0);
    REQUIRE(one.anchors.size() == 1);
    CHECK(one.anchors[0] == BoxSize{14, 9});
    CHECK(one.mean_iou == 1.0);
    const std::vector<BoxSize> two = {{20, 20}, {10, 10}, {20, 20}, {10, 10}};
    const AnchorSet sep = cluster_anchors(two, 2, 20, 3);
    CHECK(sep.anchors == std::vector<BoxSize>{{10, 10}, {20, 20}});
    CHECK_THROWS_AS(cluster_anchors(two, 3, 20, 3), ParameterError);
}

TEST_CASE("anchors: single anchor meets the grid search") {
    const std::vector<BoxSize> boxes = {{10, 20}, {20, 10}};
    const AnchorSet a = cluster_anchors(boxes, 1, 30, 1);
    CHECK(a.mean_iou >= oracle::grid_search_single_anchor(boxes, 5, 30) - 1e-6);
    Rng rng(9);
    std::vector<BoxSize> mixed;
    for (int i = 0; i < 60; ++i) mixed.push_back({std::floor(uniform(rng, 4, 40)), std::floor(uniform(rng, 4, 40))});
    const AnchorSet b = cluster_anchors(mixed, 1, 30, 1);
    CHECK(b.mean_iou >= oracle::grid_search_single_anchor(mixed, 1, 45) - 1e-6);
}

TEST_CASE("anchors: mean IoU never drops across iterations") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        std::vector<BoxSize> boxes;
        for (int i = 0; i < 80; ++i) boxes.push_back({uniform(rng, 3, 60), uniform(rng, 3, 60)});
        const AnchorSet a = cluster_anchors(boxes, 5, 40, seed);
        for (std::size_t i = 1; i < a.history.size(); ++i) CHECK(a.history[i] >= a.history[i - 1] - 1e-12);
        for (std::size_t i = 1; i < a.anchors.size(); ++i)
            CHECK(a.anchors[i - 1].w * a.anchors[i - 1].h <= a.anchors[i].w * a.anchors[i].h);
        CHECK(a.mean_iou == doctest::Approx(mean_best_iou(boxes, a.anchors)).epsilon(1e-12));
    }
}

TEST_CASE("anchors: iou_wh") {
    CHECK(iou_wh({10, 10}, {10, 10}) == 1.0);
    CHECK(iou_wh({10, 20}, {20, 10}) == doctest::Approx(100.0 / 300.0));
}

}
