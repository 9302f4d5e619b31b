#pragma once

#include <cstdint>
#include <vector>

#include "weldkit/image.hpp"

namespace weldkit {

/// A (rho, theta) accumulator peak. theta is the normal angle in degrees,
/// rho = x*cos(theta) + y*sin(theta) with (x, y) pixel indices, y down.
struct LineDetection {
    double rho = 0;
    double theta = 0;
    std::uint32_t votes = 0;

    /// Direction of the line itself in [0, 180), counter-clockwise from +x
    /// as seen on screen (so a horizontal line is 0 and a vertical one 90).
    double direction_deg() const;
};

struct HoughParams {
    double edge_threshold = 150;   // Sobel magnitude
    std::uint32_t vote_threshold = 80;
    double theta_step = 1.0;       // must divide 180
    double rho_step = 1.0;
};

/// Sobel edge map into a standard accumulator; returns local maxima at or
/// above the vote threshold, strongest first. Throws ParameterError on bad
/// steps or thresholds.
std::vector<LineDetection> hough_lines(const GrayImage& image, const HoughParams& params);
std::vector<LineDetection> hough_lines_reference(const GrayImage& image, const HoughParams& params);

}  // namespace weldkit
