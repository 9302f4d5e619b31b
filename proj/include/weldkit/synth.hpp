#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "weldkit/classes.hpp"
#include "weldkit/eval.hpp"
#include "weldkit/image.hpp"

namespace weldkit {

enum class Primitive { Ellipse, Polyline, Blob };

struct DefectSpec {
    int class_id = 0;
    Primitive primitive = Primitive::Ellipse;
    Point center;
    double length = 8;       // extent along the primitive's axis
    double thickness = 6;    // extent across it
    double angle_deg = 0;    // screen-space orientation of the axis
    double contrast = -60;   // added to the background, scaled by coverage
    std::uint64_t shape_seed = 0;  // polyline wiggle / blob lobes
};

/// A weld radiograph: bright rippled band between two straight edges through
/// the image center, plus defect primitives and additive Gaussian noise.
struct SynthScene {
    std::size_t width = 256;
    std::size_t height = 256;
    double seam_angle_deg = 0;
    double band_width = 80;
    double background = 50;
    double band_level = 170;
    double ripple_amplitude = 50;  // RMS of the bead ripple texture inside the band
    double ripple_period = 4;      // shortest ripple period along the seam, px
    std::vector<DefectSpec> defects;
    double noise_sigma = 2;
    std::uint64_t seed = 0;
};

struct SceneRender {
    GrayImage image;
    std::vector<Annotation> annotations;
};

/// Exact enclosing box of a primitive's footprint.
BBox defect_bounds(const DefectSpec& defect);

/// Throws SceneError if a primitive's box leaves the image.
SceneRender generate_scene(const SynthScene& scene);

/// Class-characteristic defects placed inside the band, one per entry of
/// `classes`, all fully inside the image.
SynthScene random_scene(std::size_t width, std::size_t height, double seam_angle_deg, std::span<const int> classes,
                        std::uint64_t seed, double noise_sigma = 2);

/// Motion blur with motion_psf(angle, length) then seeded noise.
GrayImage blur_scene(const GrayImage& image, double angle_deg, int length_px, double noise_sigma, std::uint64_t seed);

struct DetectorErrorModel {
    double miss_rate = 0;
    double false_positive_rate = 0;  // expected false boxes per ground-truth box
    double jitter_sigma = 0;         // px, per corner
    double true_confidence_floor = 0.5;
    double false_confidence_ceiling = 0.6;
};

struct FrameSize {
    std::size_t width = 0, height = 0;
};

/// Deterministic stand-in detector. Kept boxes get confidence from their
/// IoU with the truth (1 when unjittered); false boxes get low-biased
/// confidence. `sizes[i]` bounds false boxes of `truth[i]`.
std::vector<Detection> perturb_to_detections(std::span<const FrameTruth> truth, std::span<const FrameSize> sizes,
                                             const DetectorErrorModel& model, std::uint64_t seed);

}  // namespace weldkit
