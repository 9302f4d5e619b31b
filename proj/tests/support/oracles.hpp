#pragma once

// Independent reference computations used to check the library. Nothing
// here calls the library code it is meant to check.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "weldkit/anchors.hpp"
#include "weldkit/eval.hpp"
#include "weldkit/image.hpp"

namespace oracle {

using weldkit::BBox;

double box_iou(const BBox& a, const BBox& b);

/// GIoU from cell counts on a 1/`cells_per_px` grid; exact for boxes whose
/// corners lie on that grid.
double raster_giou(const BBox& a, const BBox& b, int cells_per_px = 4);

struct ClassResult {
    std::size_t gt = 0;
    std::size_t tp = 0, fp = 0, fn = 0;  // at the confidence threshold
    double ap = 0;
    std::vector<double> recall, precision;
};

struct EvalResult {
    std::map<int, ClassResult> classes;
    double map = 0;
};

/// Greedy protocol by repeated selection of the best remaining detection,
/// AP by an O(n^2) max-over-suffix step sum.
EvalResult brute_force_evaluate(const std::vector<weldkit::FrameTruth>& truth,
                                const std::vector<weldkit::Detection>& detections, double iou_threshold,
                                double confidence_threshold);

/// Step sum of max-over-suffix precision times recall increments.
double step_sum_ap(const std::vector<double>& recall, const std::vector<double>& precision);

/// Best mean IoU of a single anchor over a 1-px grid [lo, hi]^2.
double grid_search_single_anchor(const std::vector<weldkit::BoxSize>& boxes, int lo, int hi);

/// Rotates the corners about (cx, cy) by `angle_deg` counter-clockwise as
/// seen on screen (y down), then encloses them.
BBox rotate_enclose(const BBox& box, double angle_deg, double cx, double cy);

/// MSE in long double straight off the buffers.
long double direct_mse(const weldkit::GrayImage& a, const weldkit::GrayImage& b);

/// Seeded random image.
weldkit::GrayImage random_image(std::size_t w, std::size_t h, std::uint64_t seed);

/// FNV-1a over every regular file (relative path + bytes), sorted by path.
std::uint64_t tree_hash(const std::filesystem::path& root);

/// Removes the directory on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace oracle
