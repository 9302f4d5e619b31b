#include "weldkit/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "weldkit/error.hpp"

namespace weldkit {

namespace {

struct Tap {
    std::ptrdiff_t dx, dy;
    double w;
};

// Nonzero taps in row-major kernel order, as source offsets for a true
// convolution: out(x,y) = sum k(i,j) * in(x + hw - i, y + hh - j).
std::vector<Tap> nonzero_taps(const Kernel& k) {
    std::vector<Tap> taps;
    const auto hw = static_cast<std::ptrdiff_t>(k.half_width());
    const auto hh = static_cast<std::ptrdiff_t>(k.half_height());
    for (std::size_t j = 0; j < k.height(); ++j)
        for (std::size_t i = 0; i < k.width(); ++i)
            if (k.at(i, j) != 0.0)
                taps.push_back({hw - static_cast<std::ptrdiff_t>(i), hh - static_cast<std::ptrdiff_t>(j), k.at(i, j)});
    return taps;
}

void check_fits(std::size_t w, std::size_t h, const Kernel& k) {
    if (k.width() > w || k.height() > h)
        throw DimensionError(fmt::format("kernel {}x{} larger than image {}x{}", k.width(), k.height(), w, h));
}

inline std::size_t clamp_index(std::ptrdiff_t v, std::size_t n) {
    if (v < 0) return 0;
    if (static_cast<std::size_t>(v) >= n) return n - 1;
    return static_cast<std::size_t>(v);
}

template <class Sample>
void convolve_rows(std::size_t w, std::size_t h, const Sample& src, const std::vector<Tap>& taps, Field& out) {
    const auto sh = static_cast<long long>(h);
#pragma omp parallel for schedule(static)
    for (long long y = 0; y < sh; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (const Tap& t : taps) {
                const std::size_t sx = clamp_index(static_cast<std::ptrdiff_t>(x) + t.dx, w);
                const std::size_t sy = clamp_index(static_cast<std::ptrdiff_t>(y) + t.dy, h);
                acc += t.w * src(sx, sy);
            }
            out.at(x, static_cast<std::size_t>(y)) = acc;
        }
    }
}

template <class Sample>
Field convolve_naive(std::size_t w, std::size_t h, const Sample& src, const Kernel& k) {
    Field out(w, h);
    const auto hw = static_cast<std::ptrdiff_t>(k.half_width());
    const auto hh = static_cast<std::ptrdiff_t>(k.half_height());
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k.height(); ++j) {
                for (std::size_t i = 0; i < k.width(); ++i) {
                    const double kw = k.at(i, j);
                    if (kw == 0.0) continue;
                    const auto sx = clamp_index(static_cast<std::ptrdiff_t>(x) + hw - static_cast<std::ptrdiff_t>(i), w);
                    const auto sy = clamp_index(static_cast<std::ptrdiff_t>(y) + hh - static_cast<std::ptrdiff_t>(j), h);
                    acc += kw * src(sx, sy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

template <class Sample>
Field sobel_at_rows(std::size_t w, std::size_t h, const Sample& p, bool parallel) {
    Field out(w, h);
    auto row = [&](std::size_t y) {
        const std::size_t ym = y == 0 ? 0 : y - 1;
        const std::size_t yp = y + 1 == h ? y : y + 1;
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t xm = x == 0 ? 0 : x - 1;
            const std::size_t xp = x + 1 == w ? x : x + 1;
            const double gx = (p(xp, ym) + 2.0 * p(xp, y) + p(xp, yp)) - (p(xm, ym) + 2.0 * p(xm, y) + p(xm, yp));
            const double gy = (p(xm, yp) + 2.0 * p(x, yp) + p(xp, yp)) - (p(xm, ym) + 2.0 * p(x, ym) + p(xp, ym));
            out.at(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    };
    if (parallel) {
        const auto sh = static_cast<long long>(h);
#pragma omp parallel for schedule(static)
        for (long long y = 0; y < sh; ++y) row(static_cast<std::size_t>(y));
    } else {
        for (std::size_t y = 0; y < h; ++y) row(y);
    }
    return out;
}

}  // namespace

GrayImage convolve(const GrayImage& image, const Kernel& kernel) {
    check_fits(image.width(), image.height(), kernel);
    Field out(image.width(), image.height());
    convolve_rows(image.width(), image.height(), [&](std::size_t x, std::size_t y) { return double(image.at(x, y)); },
                  nonzero_taps(kernel), out);
    return to_image(out);
}

GrayImage convolve_reference(const GrayImage& image, const Kernel& kernel) {
    check_fits(image.width(), image.height(), kernel);
    return to_image(convolve_naive(image.width(), image.height(),
                                   [&](std::size_t x, std::size_t y) { return double(image.at(x, y)); }, kernel));
}

Field convolve(const Field& field, const Kernel& kernel) {
    check_fits(field.width, field.height, kernel);
    Field out(field.width, field.height);
    convolve_rows(field.width, field.height, [&](std::size_t x, std::size_t y) { return field.at(x, y); },
                  nonzero_taps(kernel), out);
    return out;
}

Field convolve_reference(const Field& field, const Kernel& kernel) {
    check_fits(field.width, field.height, kernel);
    return convolve_naive(field.width, field.height, [&](std::size_t x, std::size_t y) { return field.at(x, y); },
                          kernel);
}

Field sobel_magnitude(const GrayImage& image) {
    return sobel_at_rows(image.width(), image.height(),
                         [&](std::size_t x, std::size_t y) { return double(image.at(x, y)); }, true);
}

Field sobel_magnitude_reference(const GrayImage& image) {
    return sobel_at_rows(image.width(), image.height(),
                         [&](std::size_t x, std::size_t y) { return double(image.at(x, y)); }, false);
}

Field resize_bilinear(const Field& field, std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) throw DimensionError("resize target must be positive");
    if (width == field.width && height == field.height) return field;
    Field out(width, height);
    const double sx = static_cast<double>(field.width) / static_cast<double>(width);
    const double sy = static_cast<double>(field.height) / static_cast<double>(height);
    const auto sh = static_cast<long long>(height);
#pragma omp parallel for schedule(static)
    for (long long yy = 0; yy < sh; ++yy) {
        const auto y = static_cast<std::size_t>(yy);
        const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, double(field.height - 1));
        const auto y0 = static_cast<std::size_t>(fy);
        const std::size_t y1 = std::min(y0 + 1, field.height - 1);
        const double ty = fy - static_cast<double>(y0);
        for (std::size_t x = 0; x < width; ++x) {
            const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, double(field.width - 1));
            const auto x0 = static_cast<std::size_t>(fx);
            const std::size_t x1 = std::min(x0 + 1, field.width - 1);
            const double tx = fx - static_cast<double>(x0);
            const double top = field.at(x0, y0) * (1 - tx) + field.at(x1, y0) * tx;
            const double bot = field.at(x0, y1) * (1 - tx) + field.at(x1, y1) * tx;
            out.at(x, y) = top * (1 - ty) + bot * ty;
        }
    }
    return out;
}

GrayImage resize_bilinear(const GrayImage& image, std::size_t width, std::size_t height) {
    if (width == image.width() && height == image.height()) return image;
    return to_image(resize_bilinear(to_field(image), width, height));
}

double mse(const GrayImage& reference, const GrayImage& candidate) {
    if (reference.width() != candidate.width() || reference.height() != candidate.height())
        throw DimensionError(fmt::format("psnr: {}x{} vs {}x{}", reference.width(), reference.height(),
                                         candidate.width(), candidate.height()));
    const auto a = reference.data();
    const auto b = candidate.data();
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = double(a[i]) - double(b[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr(const GrayImage& reference, const GrayImage& candidate) {
    const double e = mse(reference, candidate);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / e);
}

}  // namespace weldkit
