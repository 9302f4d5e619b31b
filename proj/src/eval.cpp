#include "weldkit/eval.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "weldkit/error.hpp"

namespace weldkit {

double iou(const BBox& a, const BBox& b) {
    const double inter = intersection_area(a, b);
    if (inter <= 0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

double giou(const BBox& a, const BBox& b) {
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    const BBox c{std::min(a.xmin, b.xmin), std::min(a.ymin, b.ymin), std::max(a.xmax, b.xmax), std::max(a.ymax, b.ymax)};
    // The enclosing box never covers less than the union; rounding can say otherwise.
    return inter / uni - std::max(0.0, (c.area() - uni) / c.area());
}

Ratio precision(const ClassCounts& c) {
    if (c.tp + c.fp == 0) return {0.0, true};
    return {double(c.tp) / double(c.tp + c.fp), false};
}

Ratio recall(const ClassCounts& c) {
    if (c.tp + c.fn == 0) return {0.0, true};
    return {double(c.tp) / double(c.tp + c.fn), false};
}

double f1(double p, double r) {
    if (p + r == 0) return 0.0;
    return 2 * p * r / (p + r);
}

std::map<int, ClassMatches> match_detections(std::span<const Detection> detections, std::span<const FrameTruth> truth,
                                             double iou_threshold) {
    std::unordered_map<std::string, std::size_t> frame_index;
    for (std::size_t i = 0; i < truth.size(); ++i) frame_index.emplace(truth[i].frame_id, i);

    std::map<int, ClassMatches> out;
    for (const auto& frame : truth)
        for (const auto& a : frame.annotations) ++out[a.class_id].gt_count;

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < detections.size(); ++i) by_class[detections[i].class_id].push_back(i);

    for (auto& [cls, order] : by_class) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (detections[a].confidence != detections[b].confidence)
                return detections[a].confidence > detections[b].confidence;
            return detections[a].frame_id < detections[b].frame_id;
        });
        ClassMatches& cm = out[cls];
        // matched[frame][annotation index]
        std::unordered_map<std::size_t, std::vector<bool>> matched;
        for (std::size_t di : order) {
            const Detection& d = detections[di];
            bool tp = false;
            if (auto it = frame_index.find(d.frame_id); it != frame_index.end()) {
                const auto& anns = truth[it->second].annotations;
                auto& used = matched.try_emplace(it->second, anns.size(), false).first->second;
                double best = -1;
                std::size_t best_j = anns.size();
                for (std::size_t j = 0; j < anns.size(); ++j) {
                    if (anns[j].class_id != cls || used[j]) continue;
                    const double v = iou(d.bbox, anns[j].bbox);
                    if (v > best) {
                        best = v;
                        best_j = j;
                    }
                }
                if (best_j < anns.size() && best >= iou_threshold) {
                    used[best_j] = true;
                    tp = true;
                }
            }
            cm.ranked.push_back({di, d.confidence, tp});
            ++(tp ? cm.counts.tp : cm.counts.fp);
        }
    }
    for (auto& [cls, cm] : out) cm.counts.fn = cm.gt_count - cm.counts.tp;
    return out;
}

PrCurve pr_curve(std::span<const RankedMatch> ranked, std::size_t gt_count) {
    if (gt_count == 0) throw ParameterError("pr_curve: class has no ground truth");
    PrCurve curve;
    curve.reserve(ranked.size());
    std::size_t tp = 0;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        tp += ranked[k].true_positive;
        curve.push_back({double(tp) / double(gt_count), double(tp) / double(k + 1)});
    }
    return curve;
}

double interpolated_ap(const PrCurve& curve) {
    // Suffix maximum gives P_interp(k) = max_{j >= k} P(j).
    std::vector<double> interp(curve.size());
    double running = 0;
    for (std::size_t k = curve.size(); k-- > 0;) {
        running = std::max(running, curve[k].precision);
        interp[k] = running;
    }
    double ap = 0, prev_recall = 0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double dr = curve[k].recall - prev_recall;
        if (dr > 0) ap += interp[k] * dr;
        prev_recall = std::max(prev_recall, curve[k].recall);
    }
    return ap;
}

double map_50(std::span<const double> aps) {
    if (aps.empty()) throw ParameterError("mAP needs at least one class with ground truth");
    return std::accumulate(aps.begin(), aps.end(), 0.0) / double(aps.size());
}

MetricReport evaluate(std::span<const FrameTruth> truth, std::span<const Detection> detections, double iou_threshold,
                      double confidence_threshold) {
    std::set<std::string> known;
    for (const auto& f : truth) known.insert(f.frame_id);
    std::set<std::string> unknown;
    for (const auto& d : detections)
        if (!known.count(d.frame_id)) unknown.insert(d.frame_id);
    if (!unknown.empty()) {
        std::string list;
        for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
        throw InputError("detections reference unknown frames: " + list);
    }

    MetricReport report;
    report.iou_threshold = iou_threshold;
    report.confidence_threshold = confidence_threshold;
    std::vector<double> aps;
    for (const auto& [cls, cm] : match_detections(detections, truth, iou_threshold)) {
        ClassReport row;
        row.class_id = cls;
        row.gt_count = cm.gt_count;
        for (const auto& m : cm.ranked) {
            if (m.confidence < confidence_threshold) break;
            ++(m.true_positive ? row.counts.tp : row.counts.fp);
        }
        row.counts.fn = cm.gt_count - row.counts.tp;
        row.precision = precision(row.counts);
        row.recall = recall(row.counts);
        row.f1 = f1(row.precision.value, row.recall.value);
        if (cm.gt_count > 0) {
            row.curve = pr_curve(cm.ranked, cm.gt_count);
            row.ap = interpolated_ap(row.curve);
            aps.push_back(row.ap);
        }
        report.classes.push_back(std::move(row));
    }
    report.map_50 = aps.empty() ? 0.0 : map_50(aps);
    return report;
}

}  // namespace weldkit
