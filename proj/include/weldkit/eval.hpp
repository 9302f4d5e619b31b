#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weldkit/classes.hpp"
#include "weldkit/geometry.hpp"

namespace weldkit {

struct Detection {
    std::string frame_id;
    BBox bbox;
    int class_id = 0;
    double confidence = 0;
};

/// Ground truth for one frame.
struct FrameTruth {
    std::string frame_id;
    std::vector<Annotation> annotations;
};

double iou(const BBox& a, const BBox& b);
/// IoU minus the fraction of the enclosing box not covered by the union.
double giou(const BBox& a, const BBox& b);

struct ClassCounts {
    std::size_t tp = 0, fp = 0, fn = 0;
};

/// A ratio whose denominator may be zero; value is 0 in that case.
struct Ratio {
    double value = 0;
    bool undefined = false;
};

Ratio precision(const ClassCounts& c);
Ratio recall(const ClassCounts& c);
double f1(double p, double r);

/// One detection after matching, in the class's ranked order.
struct RankedMatch {
    std::size_t detection_index = 0;  // into the input span
    double confidence = 0;
    bool true_positive = false;
};

struct ClassMatches {
    std::size_t gt_count = 0;
    std::vector<RankedMatch> ranked;  // confidence descending
    ClassCounts counts;
};

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr double kDefaultConfidenceThreshold = 0.25;

/// Greedy VOC-style matching per class: detections by confidence descending
/// (ties: lower frame id, then input order) each take the unmatched same-frame
/// ground truth of highest IoU if that IoU reaches the threshold.
std::map<int, ClassMatches> match_detections(std::span<const Detection> detections, std::span<const FrameTruth> truth,
                                             double iou_threshold = kDefaultIouThreshold);

struct PrPoint {
    double recall = 0;
    double precision = 0;
};
using PrCurve = std::vector<PrPoint>;

/// r(k) = TP_k / gt_count, P(k) = TP_k / k over the ranked detections.
/// Throws ParameterError when gt_count == 0.
PrCurve pr_curve(std::span<const RankedMatch> ranked, std::size_t gt_count);

/// All-point interpolated AP: sum over k of max_{j>=k} P(j) * (r(k) - r(k-1)), r(0) = 0.
double interpolated_ap(const PrCurve& curve);

/// Mean AP; throws ParameterError when empty.
double map_50(std::span<const double> aps);

struct ClassReport {
    int class_id = 0;
    std::size_t gt_count = 0;
    ClassCounts counts;  // at the confidence threshold
    Ratio precision, recall;
    double f1 = 0;
    double ap = 0;
    PrCurve curve;
};

struct MetricReport {
    std::string model;
    double iou_threshold = kDefaultIouThreshold;
    double confidence_threshold = kDefaultConfidenceThreshold;
    std::vector<ClassReport> classes;  // classes with ground truth or detections, by id
    double map_50 = 0;
    std::optional<double> time_per_image_s;
};

/// AP over the full confidence sweep; P/R/F1 at `confidence_threshold`.
/// mAP averages classes present in ground truth. Throws InputError listing
/// detections that reference unknown frames.
MetricReport evaluate(std::span<const FrameTruth> truth, std::span<const Detection> detections,
                      double iou_threshold = kDefaultIouThreshold,
                      double confidence_threshold = kDefaultConfidenceThreshold);

// Detections file: `frame_id class_id confidence xmin ymin xmax ymax` per line.
std::string write_detections(std::span<const Detection> detections);
std::vector<Detection> parse_detections(const std::string& text);

std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& text);
/// Per-class Precision/Recall/F1/AP rows plus mAP@0.5.
std::string render_report_table(const MetricReport& report);
/// Side-by-side comparison of at least two reports: model, precision %,
/// mAP@0.5 %, seconds per image.
std::string render_comparison(std::span<const MetricReport> reports);

}  // namespace weldkit
