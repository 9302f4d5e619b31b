#include "weldkit/deblur.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "weldkit/error.hpp"
#include "weldkit/fft.hpp"
#include "weldkit/geometry.hpp"

namespace weldkit {

double estimate_blur_angle(std::span<const LineDetection> lines, std::size_t top_k) {
    if (lines.empty()) throw InputError("no lines detected");
    const std::size_t n = std::min(std::max<std::size_t>(top_k, 1), lines.size());
    double c = 0, s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double doubled = 2.0 * lines[i].direction_deg() * M_PI / 180.0;
        c += lines[i].votes * std::cos(doubled);
        s += lines[i].votes * std::sin(doubled);
    }
    const double deg = 0.5 * std::atan2(s, c) * 180.0 / M_PI;
    const double out = normalize_half_turn(deg);
    // atan2 noise can land a hair below 180.
    return std::abs(out - 180.0) < 1e-9 ? 0.0 : out;
}

int estimate_blur_length(double surface_speed_px_per_s, double exposure_s) {
    if (!(surface_speed_px_per_s > 0) || !(exposure_s > 0))
        throw ParameterError(fmt::format("blur length needs positive speed and exposure (got {}, {})",
                                         surface_speed_px_per_s, exposure_s));
    const double l = std::floor(surface_speed_px_per_s * exposure_s + 0.5);
    return std::max(1, static_cast<int>(l));
}

Kernel motion_psf(double angle_deg, int length_px) {
    if (length_px < 1) throw ParameterError("motion_psf: length must be >= 1");
    if (length_px == 1) return Kernel::identity();
    const std::size_t side = static_cast<std::size_t>(length_px % 2 ? length_px : length_px + 1);
    const double center = double(side / 2);
    double s = 0, c = 1;
    sincos_deg(normalize_half_turn(angle_deg), s, c);
    std::vector<double> w(side * side, 0.0);
    auto splat = [&](double x, double y) {
        const double fx = std::floor(x), fy = std::floor(y);
        const double tx = x - fx, ty = y - fy;
        const auto ix = static_cast<std::ptrdiff_t>(fx), iy = static_cast<std::ptrdiff_t>(fy);
        const double share[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
        const std::ptrdiff_t px[4] = {ix, ix + 1, ix, ix + 1};
        const std::ptrdiff_t py[4] = {iy, iy, iy + 1, iy + 1};
        for (int k = 0; k < 4; ++k) {
            if (share[k] == 0.0) continue;
            if (px[k] < 0 || py[k] < 0 || px[k] >= std::ptrdiff_t(side) || py[k] >= std::ptrdiff_t(side)) continue;
            w[static_cast<std::size_t>(py[k]) * side + static_cast<std::size_t>(px[k])] += share[k];
        }
    };
    // Screen-space direction: +x right, +y up, i.e. (cos, -sin) in image rows.
    const double half = 0.5 * double(length_px - 1);
    for (int i = 0; i < length_px; ++i) {
        const double t = double(i) - half;
        splat(center + t * c, center - t * s);
    }
    return Kernel::normalized(side, side, std::move(w));
}

namespace {

constexpr int kBoundaryPasses = 3;

// Extend to (pw, ph) so the periodic continuation is continuous: the pad
// blends each edge into the opposite one with a raised-cosine ramp.
Field periodic_extend(const GrayImage& img, std::size_t pw, std::size_t ph) {
    const std::size_t w = img.width(), h = img.height();
    Field f(pw, ph);
    auto ramp = [](std::size_t i, std::size_t n) { return 0.5 - 0.5 * std::cos(M_PI * double(i + 1) / double(n + 1)); };
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) f.at(x, y) = img.at(x, y);
        const double a = img.at(w - 1, y), b = img.at(0, y);
        for (std::size_t x = w; x < pw; ++x) {
            const double r = ramp(x - w, pw - w);
            f.at(x, y) = a * (1 - r) + b * r;
        }
    }
    for (std::size_t x = 0; x < pw; ++x) {
        const double a = f.at(x, h - 1), b = f.at(x, 0);
        for (std::size_t y = h; y < ph; ++y) {
            const double r = ramp(y - h, ph - h);
            f.at(x, y) = a * (1 - r) + b * r;
        }
    }
    return f;
}

}  // namespace

GrayImage wiener_deconvolve(const GrayImage& blurred, const Kernel& psf, double nsr) {
    if (!(nsr >= 0)) throw ParameterError("wiener: nsr must be >= 0");
    if (psf.width() == 1 && psf.height() == 1 && nsr == 0) return blurred;

    const std::size_t w = blurred.width(), h = blurred.height();
    const std::size_t margin = std::max(psf.width(), psf.height());
    const std::size_t pw = good_transform_size(w + 2 * margin);
    const std::size_t ph = good_transform_size(h + 2 * margin);

    // PSF zero-padded with its center tap at the origin.
    Field kernel(pw, ph);
    const std::size_t hw = psf.half_width(), hh = psf.half_height();
    for (std::size_t j = 0; j < psf.height(); ++j)
        for (std::size_t i = 0; i < psf.width(); ++i)
            kernel.at((i + pw - hw) % pw, (j + ph - hh) % ph) += psf.at(i, j);
    const ComplexField H = forward_real(kernel);

    auto restore = [&](const Field& observed) {
        ComplexField X = forward_real(observed);
        for (std::size_t k = 1; k < X.data.size(); ++k) {
            const Complex hk = H.data[k];
            double denom = std::norm(hk) + nsr;
            if (nsr == 0) denom = std::max(denom, 1e-12);
            X.data[k] *= std::conj(hk) / denom;
        }
        // X.data[0] keeps unit DC gain (H(0) = 1 for a unit-sum kernel).
        return X;
    };

    // Light outside the frame was blurred in too. The pad starts as a smooth
    // periodic blend and is then replaced by the re-blurred estimate a few
    // times, which stops the frame border from ringing along the blur.
    Field padded = periodic_extend(blurred, pw, ph);
    ComplexField X = restore(padded);
    for (int pass = 0; pass < kBoundaryPasses; ++pass) {
        ComplexField reblurred = X;
        for (std::size_t k = 0; k < reblurred.data.size(); ++k) reblurred.data[k] *= H.data[k];
        const Field estimate = inverse_real(reblurred, pw);
        for (std::size_t y = 0; y < ph; ++y)
            for (std::size_t x = (y < h ? w : 0); x < pw; ++x) padded.at(x, y) = estimate.at(x, y);
        X = restore(padded);
    }

    const Field restored = inverse_real(X, pw);
    GrayImage out(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) out.at(x, y) = quantize(restored.at(x, y));
    return out;
}

DeblurResult deblur_auto(const GrayImage& image, const Kinematics& kin, const DeblurOptions& options) {
    const int length = estimate_blur_length(kin.speed_px_per_s, kin.exposure_s);
    const auto lines = hough_lines(image, options.hough);
    if (lines.empty()) return {image, {0.0, length}, DeblurStatus::Skipped};
    const BlurEstimate est{estimate_blur_angle(lines, options.top_k), length};
    return {wiener_deconvolve(image, motion_psf(est.angle_deg, est.length_px), options.nsr), est,
            DeblurStatus::Deblurred};
}

}  // namespace weldkit
