#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "weldkit/error.hpp"
#include "weldkit/eval.hpp"

namespace weldkit {

using nlohmann::json;

std::string write_detections(std::span<const Detection> detections) {
    std::string out;
    for (const auto& d : detections)
        out += fmt::format("{} {} {:.6f} {:.6f} {:.6f} {:.6f} {:.6f}\n", d.frame_id, d.class_id, d.confidence,
                           d.bbox.xmin, d.bbox.ymin, d.bbox.xmax, d.bbox.ymax);
    return out;
}

std::vector<Detection> parse_detections(const std::string& text) {
    std::vector<Detection> out;
    std::istringstream lines(text);
    std::string line;
    for (std::size_t n = 1; std::getline(lines, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream in(line);
        Detection d;
        std::string extra;
        if (!(in >> d.frame_id >> d.class_id >> d.confidence >> d.bbox.xmin >> d.bbox.ymin >> d.bbox.xmax >>
              d.bbox.ymax) ||
            (in >> extra))
            throw FormatError(fmt::format("detections line {}: expected 7 fields", n));
        if (!(d.confidence >= 0 && d.confidence <= 1))
            throw FormatError(fmt::format("detections line {}: confidence {} outside [0, 1]", n, d.confidence));
        if (!d.bbox.valid()) throw FormatError(fmt::format("detections line {}: invalid box", n));
        try {
            class_label(d.class_id);
        } catch (const ClassError& e) {
            throw FormatError(fmt::format("detections line {}: {}", n, e.what()));
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::string report_to_json(const MetricReport& r) {
    json j;
    j["model"] = r.model;
    j["iou_threshold"] = r.iou_threshold;
    j["confidence_threshold"] = r.confidence_threshold;
    j["classes"] = json::array();
    for (const auto& c : r.classes) {
        json curve = json::array();
        for (const auto& p : c.curve) curve.push_back({p.recall, p.precision});
        j["classes"].push_back({{"class_id", c.class_id},
                                {"label", std::string(class_label(c.class_id))},
                                {"gt", c.gt_count},
                                {"tp", c.counts.tp},
                                {"fp", c.counts.fp},
                                {"fn", c.counts.fn},
                                {"precision", c.precision.value},
                                {"precision_undefined", c.precision.undefined},
                                {"recall", c.recall.value},
                                {"recall_undefined", c.recall.undefined},
                                {"f1", c.f1},
                                {"ap", c.ap},
                                {"curve", curve}});
    }
    j["map_50"] = r.map_50;
    j["time_per_image_s"] = r.time_per_image_s ? json(*r.time_per_image_s) : json(nullptr);
    return j.dump(2) + "\n";
}

MetricReport report_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        MetricReport r;
        r.model = j.value("model", "");
        r.iou_threshold = j.at("iou_threshold").get<double>();
        r.confidence_threshold = j.at("confidence_threshold").get<double>();
        r.map_50 = j.at("map_50").get<double>();
        if (j.contains("time_per_image_s") && !j["time_per_image_s"].is_null())
            r.time_per_image_s = j["time_per_image_s"].get<double>();
        for (const auto& c : j.at("classes")) {
            ClassReport row;
            row.class_id = c.at("class_id").get<int>();
            row.gt_count = c.at("gt").get<std::size_t>();
            row.counts = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(), c.at("fn").get<std::size_t>()};
            row.precision = {c.at("precision").get<double>(), c.value("precision_undefined", false)};
            row.recall = {c.at("recall").get<double>(), c.value("recall_undefined", false)};
            row.f1 = c.at("f1").get<double>();
            row.ap = c.at("ap").get<double>();
            for (const auto& p : c.value("curve", json::array())) row.curve.push_back({p.at(0), p.at(1)});
            r.classes.push_back(std::move(row));
        }
        return r;
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("report: malformed JSON at byte {}", e.byte));
    } catch (const json::exception& e) {
        throw FormatError(std::string("report: ") + e.what());
    }
}

std::string render_report_table(const MetricReport& r) {
    std::string out = fmt::format("IoU threshold {:.2f}, confidence threshold {:.2f}{}\n", r.iou_threshold,
                                  r.confidence_threshold, r.model.empty() ? "" : ", model " + r.model);
    out += fmt::format("{:<10}", "Type");
    for (const auto& c : r.classes) out += fmt::format(" {:>15}", class_label(c.class_id));
    out += "\n";
    auto row = [&](const char* name, auto value) {
        out += fmt::format("{:<10}", name);
        for (const auto& c : r.classes) out += fmt::format(" {:>15}", value(c));
        out += "\n";
    };
    auto ratio = [](const Ratio& v) { return v.undefined ? std::string("undef") : fmt::format("{:.3f}", v.value); };
    row("Precision", [&](const ClassReport& c) { return ratio(c.precision); });
    row("Recall", [&](const ClassReport& c) { return ratio(c.recall); });
    row("F1 score", [](const ClassReport& c) { return fmt::format("{:.3f}", c.f1); });
    row("AP", [](const ClassReport& c) { return c.gt_count ? fmt::format("{:.3f}", c.ap) : std::string("-"); });
    out += fmt::format("{:<10} {:.3f}\n", "mAP@0.5", r.map_50);
    if (r.time_per_image_s) out += fmt::format("{:<10} {:.3f} s/image\n", "Time", *r.time_per_image_s);
    return out;
}

std::string render_comparison(std::span<const MetricReport> reports) {
    if (reports.size() < 2) throw ParameterError("compare needs at least two reports");
    std::string out = fmt::format("{:<28} {:>12} {:>10} {:>18}\n", "Object detection model", "Precision/%",
                                  "mAP@0.5/%", "Time per picture/s");
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        ClassCounts total;
        for (const auto& c : r.classes) {
            total.tp += c.counts.tp;
            total.fp += c.counts.fp;
        }
        const Ratio p = precision(total);
        const std::string name = r.model.empty() ? fmt::format("model-{}", i + 1) : r.model;
        out += fmt::format("{:<28} {:>12} {:>10.1f} {:>18}\n", name,
                           p.undefined ? std::string("undef") : fmt::format("{:.1f}", 100 * p.value), 100 * r.map_50,
                           r.time_per_image_s ? fmt::format("{:.3f}", *r.time_per_image_s) : std::string("-"));
    }
    return out;
}

}  // namespace weldkit
