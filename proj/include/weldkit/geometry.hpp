#pragma once

#include <algorithm>
#include <array>
#include <optional>

namespace weldkit {

/// Axis-aligned box in continuous pixel coordinates; pixel (i, j) covers
/// [i, i+1) x [j, j+1).
struct BBox {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double cx() const { return 0.5 * (xmin + xmax); }
    double cy() const { return 0.5 * (ymin + ymax); }

    /// Positive area and finite corners.
    bool valid() const;

    bool operator==(const BBox&) const = default;
};

/// Throws GeometryError unless `valid()`.
BBox checked(const BBox& box);

double intersection_area(const BBox& a, const BBox& b);

/// Intersection with [0,w) x [0,h); empty when it has no area.
std::optional<BBox> clip_to(const BBox& box, double width, double height);

struct Point {
    double x = 0, y = 0;
};

std::array<Point, 4> corners(const BBox& box);

/// Smallest box enclosing the points.
template <class Range>
BBox enclose(const Range& points) {
    BBox out{points.begin()->x, points.begin()->y, points.begin()->x, points.begin()->y};
    for (const auto& p : points) {
        out.xmin = std::min(out.xmin, p.x);
        out.ymin = std::min(out.ymin, p.y);
        out.xmax = std::max(out.xmax, p.x);
        out.ymax = std::max(out.ymax, p.y);
    }
    return out;
}

/// Exact sine/cosine at multiples of 90 degrees, std::sin/cos elsewhere.
void sincos_deg(double deg, double& s, double& c);

/// Reduce an undirected angle to [0, 180).
double normalize_half_turn(double deg);

}  // namespace weldkit
