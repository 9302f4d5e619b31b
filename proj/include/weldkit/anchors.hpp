#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "weldkit/manifest.hpp"

namespace weldkit {

struct BoxSize {
    double w = 0, h = 0;
    bool operator==(const BoxSize&) const = default;
};

struct AnchorSet {
    std::vector<BoxSize> anchors;  // ascending area
    double mean_iou = 0;           // mean best-anchor IoU over the input
    std::vector<double> history;   // mean best-anchor IoU after each iteration
};

/// IoU of two boxes aligned at a common corner.
double iou_wh(const BoxSize& a, const BoxSize& b);

/// Mean over boxes of the best IoU against any anchor.
double mean_best_iou(std::span<const BoxSize> boxes, std::span<const BoxSize> anchors);

/// k-means under 1 - IoU: k-means++ seeding, median updates accepted only
/// when they do not lower the cluster's IoU sum (medoid otherwise), and a
/// final per-cluster grid refinement. Ties in assignment go to the lower
/// anchor index. Throws ParameterError when k exceeds the distinct sizes.
AnchorSet cluster_anchors(std::span<const BoxSize> boxes, std::size_t k, int iterations, std::uint64_t seed);
AnchorSet cluster_anchors(const Manifest& manifest, std::size_t k, int iterations, std::uint64_t seed);

}  // namespace weldkit
