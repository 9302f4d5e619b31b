#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "weldkit/error.hpp"
#include "weldkit/eval.hpp"
#include "weldkit/rng.hpp"
#include "weldkit/synth.hpp"

using namespace weldkit;

namespace {

BBox random_box(Rng& rng, double span) {
    const double x = uniform(rng, 0, span), y = uniform(rng, 0, span);
    return {x, y, x + uniform(rng, 0.5, span / 2), y + uniform(rng, 0.5, span / 2)};
}

// Frames with at most `per_class` boxes per class, perturbed by the synthetic detector.
struct Instance {
    std::vector<FrameTruth> truth;
    std::vector<Detection> detections;
};

Instance random_instance(std::uint64_t seed, std::size_t per_class) {
    Rng rng(seed);
    Instance in;
    std::vector<FrameSize> sizes;
    const std::size_t frames = 1 + rng() % 4;
    std::vector<std::size_t> left(kNumClasses, per_class);
    for (std::size_t f = 0; f < frames; ++f) {
        FrameTruth t{"f" + std::to_string(f), {}};
        for (int c = 0; c < 3; ++c) {
            const int cls = int(rng() % 3);
            if (left[std::size_t(cls)] == 0) continue;
            --left[std::size_t(cls)];
            const double x = uniform(rng, 0, 80), y = uniform(rng, 0, 80);
            t.annotations.push_back({{x, y, x + uniform(rng, 4, 20), y + uniform(rng, 4, 20)}, cls});
        }
        in.truth.push_back(t);
        sizes.push_back({128, 128});
    }
    DetectorErrorModel model;
    model.miss_rate = 0.2;
    model.false_positive_rate = 0.5;
    model.jitter_sigma = 2.5;
    in.detections = perturb_to_detections(in.truth, sizes, model, seed);
    std::vector<Detection> capped;
    std::vector<std::size_t> per(kNumClasses, 0);
    for (const auto& d : in.detections)
        if (per[std::size_t(d.class_id)]++ < per_class) capped.push_back(d);
    in.detections = capped;
    return in;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("iou examples") {
    const BBox a{0, 0, 10, 10};
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, {5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0));
    CHECK(iou({0, 0, 1, 1}, {2, 2, 3, 3}) == 0.0);
}

TEST_CASE("giou examples and limit") {
    const BBox a{0, 0, 1, 1};
    CHECK(giou(a, a) == 1.0);
    CHECK(giou(a, {2, 0, 3, 1}) == doctest::Approx(-1.0 / 3.0));
    CHECK(giou(a, {2, 0, 3, 1}) == doctest::Approx(oracle::raster_giou(a, {2, 0, 3, 1})));
    double prev = 0;
    for (double d : {10.0, 100.0, 1000.0}) {
        const double g = giou(a, {d, d, d + 1, d + 1});
        CHECK(g < prev);
        CHECK(g > -1);
        prev = g;
    }
    CHECK(prev < -0.999);
}

TEST_CASE("giou never exceeds iou and matches the raster count") {
    Rng rng(31);
    for (int i = 0; i < 10000; ++i) {
        const BBox a = random_box(rng, 50), b = random_box(rng, 50);
        if (giou(a, b) > iou(a, b) + 1e-15) FAIL("giou above iou");
    }
    for (int i = 0; i < 200; ++i) {
        auto snap = [](BBox b) {
            for (double* v : {&b.xmin, &b.ymin, &b.xmax, &b.ymax}) *v = std::round(*v * 4) / 4;
            return b;
        };
        const BBox a = snap(random_box(rng, 12)), b = snap(random_box(rng, 12));
        CHECK(giou(a, b) == doctest::Approx(oracle::raster_giou(a, b)).epsilon(1e-12));
        CHECK(iou(a, b) == doctest::Approx(oracle::box_iou(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("matching examples") {
    const std::vector<FrameTruth> truth = {{"a", {{{0, 0, 10, 10}, 0}}}};
    const BBox hit{0, 0, 10, 6.0};       // IoU 0.6
    const BBox weak{0, 0, 10, 4.0};      // IoU 0.4
    auto counts = [&](std::vector<Detection> d) { return match_detections(d, truth).at(0).counts; };
    const ClassCounts one = counts({{"a", hit, 0, 0.9}});
    CHECK(one.tp == 1);
    CHECK(one.fp == 0);
    CHECK(one.fn == 0);
    const auto two = match_detections(std::vector<Detection>{{"a", hit, 0, 0.8}, {"a", hit, 0, 0.9}}, truth).at(0);
    CHECK(two.counts.tp == 1);
    CHECK(two.counts.fp == 1);
    CHECK(two.ranked[0].detection_index == 1);
    CHECK(two.ranked[0].true_positive);
    const ClassCounts low = counts({{"a", weak, 0, 0.9}});
    CHECK(low.tp == 0);
    CHECK(low.fp == 1);
    CHECK(low.fn == 1);
}

TEST_CASE("precision, recall and f1") {
    CHECK(precision({1, 0, 0}).value == 1.0);
    CHECK(precision({1, 3, 0}).value == 0.25);
    CHECK(precision({0, 0, 0}).undefined);
    CHECK(precision({0, 0, 0}).value == 0.0);
    CHECK(recall({9, 0, 1}).value == doctest::Approx(0.9));
    CHECK(recall({0, 0, 5}).value == 0.0);
    CHECK_FALSE(recall({0, 0, 5}).undefined);
    CHECK(recall({0, 0, 0}).undefined);
    // Rounded inputs give 0.66184; a 0.661 target is 8.4e-4 away.
    CHECK(f1(0.505, 0.96) == doctest::Approx(0.9696 / 1.465).epsilon(1e-15));
    CHECK(std::round(f1(0.505, 0.96) * 100) / 100 == 0.66);
    CHECK(std::round(f1(0.99, 0.99) * 100) / 100 == 0.99);
    CHECK(f1(1, 0) == 0.0);
}

TEST_CASE("pr curve and interpolated AP examples") {
    const std::vector<RankedMatch> single = {{0, 0.9, true}};
    const PrCurve c1 = pr_curve(single, 1);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].recall == 1.0);
    CHECK(c1[0].precision == 1.0);
    CHECK(interpolated_ap(c1) == 1.0);
    const std::vector<RankedMatch> tft = {{0, 0.9, true}, {1, 0.8, false}, {2, 0.7, true}};
    const PrCurve c3 = pr_curve(tft, 2);
    REQUIRE(c3.size() == 3);
    CHECK(c3[0].recall == 0.5);
    CHECK(c3[1].precision == 0.5);
    CHECK(c3[2].precision == doctest::Approx(2.0 / 3.0));
    CHECK(interpolated_ap(c3) == doctest::Approx(5.0 / 6.0));
    CHECK_THROWS_AS(pr_curve(tft, 0), ParameterError);
    const PrCurve flat = {{0.25, 0.7}, {0.5, 0.7}, {0.75, 0.7}, {1.0, 0.7}};
    CHECK(interpolated_ap(flat) == doctest::Approx(0.7));
}

TEST_CASE("interpolated AP agrees with the step-sum oracle on random sequences") {
    Rng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 30, gt = 1 + rng() % 20;
        std::vector<RankedMatch> ranked;
        std::size_t tps = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool tp = tps < gt && rng() % 2 == 0;
            tps += tp;
            ranked.push_back({i, 1.0 - double(i) / double(n), tp});
        }
        const PrCurve c = pr_curve(ranked, gt);
        std::vector<double> r, p;
        for (std::size_t i = 0; i < c.size(); ++i) {
            r.push_back(c[i].recall);
            p.push_back(c[i].precision);
            if (i > 0 && c[i].recall < c[i - 1].recall) FAIL("recall decreased");
            if (c[i].recall < 0 || c[i].recall > 1 || c[i].precision < 0 || c[i].precision > 1) FAIL("out of range");
        }
        CHECK(std::abs(interpolated_ap(c) - oracle::step_sum_ap(r, p)) <= 1e-12);
    }
}

TEST_CASE("mAP examples") {
    const std::vector<double> table = {0.951, 0.995, 0.992, 0.995, 0.995, 0.995, 0.978, 0.995};
    CHECK(std::abs(map_50(table) - 0.987) <= 0.0005);
    CHECK(map_50(std::vector<double>{0.7}) == doctest::Approx(0.7));
    CHECK(map_50(std::vector<double>(5, 1.0)) == 1.0);
    CHECK_THROWS_AS(map_50(std::vector<double>{}), ParameterError);
}

TEST_CASE("evaluate: perfect and empty detectors") {
    const std::vector<FrameTruth> truth = {{"a", {{{0, 0, 10, 10}, 0}, {{20, 20, 30, 40}, 3}}},
                                           {"b", {{{5, 5, 9, 9}, 0}}}};
    std::vector<Detection> perfect;
    for (const auto& t : truth)
        for (const auto& a : t.annotations) perfect.push_back({t.frame_id, a.bbox, a.class_id, 1.0});
    const MetricReport r = evaluate(truth, perfect);
    CHECK(r.map_50 == 1.0);
    for (const auto& c : r.classes) {
        CHECK(c.precision.value == 1.0);
        CHECK(c.recall.value == 1.0);
        CHECK(c.f1 == 1.0);
        CHECK(c.ap == 1.0);
    }
    const MetricReport e = evaluate(truth, {});
    CHECK(e.map_50 == 0.0);
    for (const auto& c : e.classes) {
        CHECK(c.precision.undefined);
        CHECK(c.recall.value == 0.0);
    }
}

TEST_CASE("evaluate: unknown frames are listed") {
    const std::vector<FrameTruth> truth = {{"a", {}}};
    const std::vector<Detection> d = {{"zz", {0, 0, 1, 1}, 0, 0.5}};
    CHECK_THROWS_WITH_AS(evaluate(truth, d), doctest::Contains("zz"), InputError);
}

TEST_CASE("evaluate agrees with the brute-force evaluator") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Instance in = random_instance(seed, 10);
        const MetricReport r = evaluate(in.truth, in.detections, 0.5, 0.25);
        const oracle::EvalResult o = oracle::brute_force_evaluate(in.truth, in.detections, 0.5, 0.25);
        CAPTURE(seed);
        CHECK(std::abs(r.map_50 - o.map) <= 1e-9);
        for (const auto& c : r.classes) {
            const auto it = o.classes.find(c.class_id);
            if (it == o.classes.end()) continue;
            CHECK(c.gt_count == it->second.gt);
            CHECK(c.counts.tp == it->second.tp);
            CHECK(c.counts.fp == it->second.fp);
            CHECK(c.counts.fn == it->second.fn);
            CHECK(std::abs(c.ap - it->second.ap) <= 1e-9);
        }
    }
}

TEST_CASE("AP is invariant under monotone confidence rescaling") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Instance in = random_instance(seed + 1000, 10);
        std::vector<Detection> scaled = in.detections;
        for (auto& d : scaled) d.confidence = 0.1 + 0.5 * d.confidence * d.confidence;
        const MetricReport a = evaluate(in.truth, in.detections, 0.5, 0.0);
        const MetricReport b = evaluate(in.truth, scaled, 0.5, 0.0);
        CHECK(a.map_50 == doctest::Approx(b.map_50).epsilon(1e-12));
        REQUIRE(a.classes.size() == b.classes.size());
        for (std::size_t i = 0; i < a.classes.size(); ++i) CHECK(a.classes[i].ap == b.classes[i].ap);
    }
}

TEST_CASE("detections file and report JSON round trip") {
    const std::vector<Detection> d = {{"f1", {1.5, 2, 10, 12.25}, 3, 0.875}, {"f2", {0, 0, 4, 4}, 0, 0.5}};
    const auto back = parse_detections(write_detections(d));
    REQUIRE(back.size() == 2);
    CHECK(back[0].bbox == d[0].bbox);
    CHECK(back[0].confidence == d[0].confidence);
    CHECK(back[1].frame_id == "f2");
    CHECK_THROWS_AS(parse_detections("f1 0 0.5 1 1 2\n"), FormatError);
    const std::vector<FrameTruth> truth = {{"f1", {{{1, 2, 10, 12}, 3}}}, {"f2", {{{0, 0, 4, 4}, 0}}}};
    MetricReport r = evaluate(truth, d);
    r.model = "m";
    r.time_per_image_s = 0.12;
    const MetricReport again = report_from_json(report_to_json(r));
    CHECK(report_to_json(again) == report_to_json(r));
    const std::string table = render_report_table(r);
    CHECK(table.find("mAP@0.5") != std::string::npos);
    MetricReport other = r;
    other.model = "n";
    const std::vector<MetricReport> both = {r, other};
    const std::string cmp = render_comparison(both);
    CHECK(cmp.find("m") != std::string::npos);
    CHECK(cmp.find("n") != std::string::npos);
    CHECK_THROWS_AS(render_comparison(std::span<const MetricReport>(both.data(), 1)), ParameterError);
}

}
