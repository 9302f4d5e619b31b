#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "weldkit/manifest.hpp"

namespace weldkit {

struct SplitRatio {
    unsigned train = 8;
    unsigned val = 2;
};

/// Number of validation groups: round-half-up of val/(train+val) * groups.
std::size_t val_group_count(std::size_t groups, const SplitRatio& ratio);

/// Deterministic seeded shuffle of grouping keys; the first
/// val_group_count groups go to val, the rest to train. With
/// group_by_parent, variants always share their original's split.
/// Throws InputError on an empty manifest.
void split(Manifest& manifest, const SplitRatio& ratio, std::uint64_t seed, bool group_by_parent = true);

struct ScatterPoint {
    double x = 0, y = 0;
    int class_id = 0;
};

struct DatasetStats {
    std::array<std::size_t, kNumClasses> class_counts{};
    std::size_t total_boxes = 0;
    std::vector<ScatterPoint> centers;  // normalized by image size
    std::vector<ScatterPoint> sizes;    // absolute w, h in pixels
    double wider_fraction = 0;          // share of boxes with w > h
    double aspect_min = 0, aspect_max = 0, aspect_mean = 0, aspect_median = 0;  // w / h
};

DatasetStats dataset_stats(const Manifest& manifest);
std::string stats_to_json(const DatasetStats& stats);
/// Two scatter panels: normalized centers and absolute (w, h), colored by class.
std::string stats_to_svg(const DatasetStats& stats);

}  // namespace weldkit
