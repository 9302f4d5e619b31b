#include "weldkit/hough.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "weldkit/error.hpp"
#include "weldkit/filter.hpp"
#include "weldkit/geometry.hpp"

namespace weldkit {

double LineDetection::direction_deg() const { return normalize_half_turn(90.0 - theta); }

namespace {

struct Grid {
    std::size_t n_theta = 0;
    std::size_t half_rho = 0;  // rho index r maps to (r - half_rho) * rho_step
    std::size_t n_rho = 0;
    std::vector<double> cos_t, sin_t;
};

Grid make_grid(std::size_t w, std::size_t h, const HoughParams& p) {
    if (!(p.theta_step > 0) || !(p.rho_step > 0)) throw ParameterError("hough: steps must be positive");
    if (!(p.edge_threshold > 0) || p.vote_threshold == 0) throw ParameterError("hough: thresholds must be positive");
    const double n = 180.0 / p.theta_step;
    if (std::abs(n - std::round(n)) > 1e-9)
        throw ParameterError(fmt::format("hough: theta step {} does not divide 180", p.theta_step));
    Grid g;
    g.n_theta = static_cast<std::size_t>(std::round(n));
    const double diag = std::hypot(double(w), double(h));
    g.half_rho = static_cast<std::size_t>(std::ceil(diag / p.rho_step)) + 1;
    g.n_rho = 2 * g.half_rho + 1;
    g.cos_t.resize(g.n_theta);
    g.sin_t.resize(g.n_theta);
    for (std::size_t t = 0; t < g.n_theta; ++t) sincos_deg(double(t) * p.theta_step, g.sin_t[t], g.cos_t[t]);
    return g;
}

struct EdgePixel {
    double x, y;
};

std::vector<EdgePixel> edge_pixels(const Field& mag, double threshold) {
    std::vector<EdgePixel> out;
    for (std::size_t y = 0; y < mag.height; ++y)
        for (std::size_t x = 0; x < mag.width; ++x)
            if (mag.at(x, y) >= threshold) out.push_back({double(x), double(y)});
    return out;
}

inline std::size_t rho_index(const Grid& g, const EdgePixel& e, std::size_t t, double rho_step) {
    const double rho = e.x * g.cos_t[t] + e.y * g.sin_t[t];
    return static_cast<std::size_t>(std::lround(rho / rho_step) + static_cast<long>(g.half_rho));
}

std::vector<LineDetection> find_peaks(const Grid& g, const std::vector<std::uint32_t>& acc, const HoughParams& p) {
    const auto nt = static_cast<std::ptrdiff_t>(g.n_theta);
    const auto nr = static_cast<std::ptrdiff_t>(g.n_rho);
    // Neighbor across the theta wrap: (theta - 180, -rho).
    auto value = [&](std::ptrdiff_t t, std::ptrdiff_t r, std::ptrdiff_t& linear) -> std::uint32_t {
        if (t < 0) {
            t += nt;
            r = nr - 1 - r;
        } else if (t >= nt) {
            t -= nt;
            r = nr - 1 - r;
        }
        if (r < 0 || r >= nr) {
            linear = -1;
            return 0;
        }
        linear = t * nr + r;
        return acc[static_cast<std::size_t>(linear)];
    };
    std::vector<LineDetection> out;
    for (std::ptrdiff_t t = 0; t < nt; ++t) {
        for (std::ptrdiff_t r = 0; r < nr; ++r) {
            const std::uint32_t v = acc[static_cast<std::size_t>(t * nr + r)];
            if (v < p.vote_threshold) continue;
            const std::ptrdiff_t self = t * nr + r;
            bool peak = true;
            for (std::ptrdiff_t dt = -1; dt <= 1 && peak; ++dt) {
                for (std::ptrdiff_t dr = -1; dr <= 1 && peak; ++dr) {
                    if (dt == 0 && dr == 0) continue;
                    std::ptrdiff_t linear = 0;
                    const std::uint32_t n = value(t + dt, r + dr, linear);
                    // Plateaus: the cell with the lowest linear index wins.
                    if (n > v || (n == v && linear >= 0 && linear < self)) peak = false;
                }
            }
            if (peak)
                out.push_back({double(r - static_cast<std::ptrdiff_t>(g.half_rho)) * p.rho_step, double(t) * p.theta_step, v});
        }
    }
    std::sort(out.begin(), out.end(), [](const LineDetection& a, const LineDetection& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.rho < b.rho;
    });
    return out;
}

}  // namespace

std::vector<LineDetection> hough_lines(const GrayImage& image, const HoughParams& params) {
    const Grid g = make_grid(image.width(), image.height(), params);
    const auto edges = edge_pixels(sobel_magnitude(image), params.edge_threshold);
    std::vector<std::uint32_t> acc(g.n_theta * g.n_rho, 0);
    // Each theta row is owned by one thread: no atomics, deterministic counts.
    const auto nt = static_cast<long long>(g.n_theta);
#pragma omp parallel for schedule(static)
    for (long long tt = 0; tt < nt; ++tt) {
        const auto t = static_cast<std::size_t>(tt);
        std::uint32_t* row = acc.data() + t * g.n_rho;
        for (const EdgePixel& e : edges) ++row[rho_index(g, e, t, params.rho_step)];
    }
    return find_peaks(g, acc, params);
}

std::vector<LineDetection> hough_lines_reference(const GrayImage& image, const HoughParams& params) {
    const Grid g = make_grid(image.width(), image.height(), params);
    const auto edges = edge_pixels(sobel_magnitude_reference(image), params.edge_threshold);
    std::vector<std::uint32_t> acc(g.n_theta * g.n_rho, 0);
    for (const EdgePixel& e : edges)
        for (std::size_t t = 0; t < g.n_theta; ++t) ++acc[t * g.n_rho + rho_index(g, e, t, params.rho_step)];
    return find_peaks(g, acc, params);
}

}  // namespace weldkit
