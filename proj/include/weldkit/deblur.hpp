#pragma once

#include <cstddef>
#include <span>

#include "weldkit/hough.hpp"
#include "weldkit/image.hpp"
#include "weldkit/kernel.hpp"

namespace weldkit {

struct BlurEstimate {
    double angle_deg = 0;  // [0, 180)
    int length_px = 1;     // >= 1
};

inline constexpr std::size_t kDefaultTopLines = 5;
inline constexpr double kDefaultNsr = 1e-2;

/// Vote-weighted circular mean (period 180) of the strongest `top_k` line
/// directions. The weld edge runs along the motion, so this is the blur
/// direction. Throws InputError("no lines") on an empty list.
double estimate_blur_angle(std::span<const LineDetection> lines, std::size_t top_k = kDefaultTopLines);

/// round(speed * exposure), at least 1. Throws ParameterError unless both > 0.
int estimate_blur_length(double surface_speed_px_per_s, double exposure_s);

/// Linear-motion PSF: `length` unit-spaced samples along a segment through
/// the center, bilinearly splatted and normalized. Side = next odd >= length.
Kernel motion_psf(double angle_deg, int length_px);

/// Frequency-domain Wiener filter conj(H) / (|H|^2 + nsr) with the zero
/// frequency held at unit gain. The image is extended smoothly to a
/// periodic transform size and cropped back.
GrayImage wiener_deconvolve(const GrayImage& blurred, const Kernel& psf, double nsr = kDefaultNsr);

struct Kinematics {
    double speed_px_per_s = 0;
    double exposure_s = 0;
};

struct DeblurOptions {
    HoughParams hough;
    std::size_t top_k = kDefaultTopLines;
    double nsr = kDefaultNsr;
};

enum class DeblurStatus { Deblurred, Skipped };

struct DeblurResult {
    GrayImage image;
    BlurEstimate estimate;
    DeblurStatus status = DeblurStatus::Skipped;
};

/// hough_lines -> estimate_blur_angle -> estimate_blur_length -> motion_psf
/// -> wiener_deconvolve. With no detected lines the input comes back
/// unchanged and the status is Skipped.
DeblurResult deblur_auto(const GrayImage& image, const Kinematics& kin, const DeblurOptions& options = {});

}  // namespace weldkit
