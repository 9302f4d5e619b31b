#include "weldkit/synth.hpp"

#include <array>
#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "weldkit/deblur.hpp"
#include "weldkit/error.hpp"
#include "weldkit/filter.hpp"
#include "weldkit/rng.hpp"

namespace weldkit {

namespace {

struct Axes {
    Point u, v;  // along / across, image coordinates
};

Axes axes_of(double angle_deg) {
    double s = 0, c = 1;
    sincos_deg(angle_deg, s, c);
    return {{c, -s}, {s, c}};
}

struct Ellipse {
    Point c;
    double a, b;  // semi-axes along u, v
    Axes ax;
};

BBox ellipse_bounds(const Ellipse& e) {
    const double ex = std::sqrt(e.a * e.a * e.ax.u.x * e.ax.u.x + e.b * e.b * e.ax.v.x * e.ax.v.x);
    const double ey = std::sqrt(e.a * e.a * e.ax.u.y * e.ax.u.y + e.b * e.b * e.ax.v.y * e.ax.v.y);
    return {e.c.x - ex, e.c.y - ey, e.c.x + ex, e.c.y + ey};
}

bool inside(const Ellipse& e, double x, double y) {
    const double dx = x - e.c.x, dy = y - e.c.y;
    const double p = (dx * e.ax.u.x + dy * e.ax.u.y) / e.a;
    const double q = (dx * e.ax.v.x + dy * e.ax.v.y) / e.b;
    return p * p + q * q <= 1.0;
}

std::vector<Ellipse> blob_lobes(const DefectSpec& d) {
    const Axes ax = axes_of(d.angle_deg);
    const double a = 0.5 * d.length, b = 0.5 * d.thickness;
    std::vector<Ellipse> lobes{{d.center, a, b, ax}};
    Rng rng(d.shape_seed);
    for (int i = 0; i < 3; ++i) {
        const double along = uniform(rng, -0.45, 0.45) * a;
        const double across = uniform(rng, -0.35, 0.35) * b;
        const Point c{d.center.x + along * ax.u.x + across * ax.v.x, d.center.y + along * ax.u.y + across * ax.v.y};
        lobes.push_back({c, uniform(rng, 0.3, 0.5) * a, uniform(rng, 0.5, 0.65) * b, ax});
    }
    return lobes;
}

std::vector<Point> polyline_vertices(const DefectSpec& d) {
    const Axes ax = axes_of(d.angle_deg);
    Rng rng(d.shape_seed);
    constexpr int kSegments = 4;
    std::vector<Point> pts;
    for (int i = 0; i <= kSegments; ++i) {
        const double along = (double(i) / kSegments - 0.5) * d.length;
        const double across = (i == 0 || i == kSegments) ? 0.0 : uniform(rng, -0.08, 0.08) * d.length;
        pts.push_back({d.center.x + along * ax.u.x + across * ax.v.x, d.center.y + along * ax.u.y + across * ax.v.y});
    }
    return pts;
}

double segment_distance(Point p, Point a, Point b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

bool covers(const DefectSpec& d, const std::vector<Ellipse>& lobes, const std::vector<Point>& poly, double x, double y) {
    if (d.primitive == Primitive::Polyline) {
        for (std::size_t i = 0; i + 1 < poly.size(); ++i)
            if (segment_distance({x, y}, poly[i], poly[i + 1]) <= 0.5 * d.thickness) return true;
        return false;
    }
    for (const auto& e : lobes)
        if (inside(e, x, y)) return true;
    return false;
}

}  // namespace

BBox defect_bounds(const DefectSpec& d) {
    switch (d.primitive) {
        case Primitive::Ellipse:
            return ellipse_bounds({d.center, 0.5 * d.length, 0.5 * d.thickness, axes_of(d.angle_deg)});
        case Primitive::Blob: {
            const auto lobes = blob_lobes(d);
            BBox b = ellipse_bounds(lobes.front());
            for (const auto& e : lobes) {
                const BBox l = ellipse_bounds(e);
                b = {std::min(b.xmin, l.xmin), std::min(b.ymin, l.ymin), std::max(b.xmax, l.xmax), std::max(b.ymax, l.ymax)};
            }
            return b;
        }
        case Primitive::Polyline: {
            BBox b = enclose(polyline_vertices(d));
            const double r = 0.5 * d.thickness;
            return {b.xmin - r, b.ymin - r, b.xmax + r, b.ymax + r};
        }
    }
    return {};
}

SceneRender generate_scene(const SynthScene& scene) {
    if (scene.width == 0 || scene.height == 0) throw SceneError("scene dimensions must be positive");
    const double w = double(scene.width), h = double(scene.height);
    SceneRender out{GrayImage(scene.width, scene.height), {}};
    for (const auto& d : scene.defects) {
        class_label(d.class_id);
        const BBox b = defect_bounds(d);
        if (!(d.length > 0) || !(d.thickness > 0) || !b.valid() || b.xmin < 0 || b.ymin < 0 || b.xmax > w || b.ymax > h)
            throw SceneError(fmt::format("defect of class {} at ({:.1f}, {:.1f}) leaves the {}x{} image", d.class_id,
                                         d.center.x, d.center.y, scene.width, scene.height));
        out.annotations.push_back({b, d.class_id});
    }

    Field f(scene.width, scene.height);
    const Axes seam = axes_of(scene.seam_angle_deg);
    const double cx = 0.5 * w, cy = 0.5 * h, half = 0.5 * scene.band_width;
    // Bead ripples: a seeded sum of crescents across the seam, periods spread
    // geometrically over [period, 8 * period].
    constexpr int kRipples = 6;
    std::array<double, kRipples> phase{}, freq{};
    {
        Rng rng(derive_seed(scene.seed, "ripple"));
        for (int k = 0; k < kRipples; ++k) {
            freq[k] = 2 * M_PI / (scene.ripple_period * std::pow(8.0, double(k) / (kRipples - 1)));
            phase[k] = uniform(rng, 0, 2 * M_PI);
        }
    }
    for (std::size_t y = 0; y < scene.height; ++y) {
        for (std::size_t x = 0; x < scene.width; ++x) {
            const double px = double(x) + 0.5 - cx, py = double(y) + 0.5 - cy;
            const double d = px * seam.v.x + py * seam.v.y;
            const double cover = std::clamp(0.5 + half - std::abs(d), 0.0, 1.0);
            double level = scene.band_level;
            if (scene.ripple_amplitude != 0 && scene.ripple_period > 0) {
                const double t = px * seam.u.x + py * seam.u.y + scene.ripple_period * (d / half) * (d / half);
                double r = 0;
                for (int k = 0; k < kRipples; ++k) r += std::sin(freq[k] * t + phase[k]);
                level += scene.ripple_amplitude * r / std::sqrt(0.5 * kRipples);
            }
            f.at(x, y) = scene.background + (level - scene.background) * cover;
        }
    }

    constexpr int kSub = 4;
    for (const auto& d : scene.defects) {
        const auto lobes = d.primitive == Primitive::Polyline ? std::vector<Ellipse>{} : blob_lobes(d);
        const auto poly = d.primitive == Primitive::Polyline ? polyline_vertices(d) : std::vector<Point>{};
        const BBox b = defect_bounds(d);
        const auto x0 = static_cast<std::size_t>(std::floor(b.xmin));
        const auto y0 = static_cast<std::size_t>(std::floor(b.ymin));
        const auto x1 = std::min(scene.width, static_cast<std::size_t>(std::ceil(b.xmax)));
        const auto y1 = std::min(scene.height, static_cast<std::size_t>(std::ceil(b.ymax)));
        const auto* lobes_used = d.primitive == Primitive::Ellipse ? nullptr : &lobes;
        std::vector<Ellipse> single;
        if (!lobes_used) single = {lobes.front()};
        for (std::size_t y = y0; y < y1; ++y) {
            for (std::size_t x = x0; x < x1; ++x) {
                int hits = 0;
                for (int sy = 0; sy < kSub; ++sy)
                    for (int sx = 0; sx < kSub; ++sx)
                        hits += covers(d, lobes_used ? *lobes_used : single, poly, double(x) + (sx + 0.5) / kSub,
                                       double(y) + (sy + 0.5) / kSub);
                f.at(x, y) += d.contrast * double(hits) / (kSub * kSub);
            }
        }
    }

    Rng rng(scene.seed);
    for (std::size_t i = 0; i < f.data.size(); ++i) {
        const double n = scene.noise_sigma > 0 ? gaussian(rng, scene.noise_sigma) : 0.0;
        out.image.data()[i] = quantize(f.data[i] + n);
    }
    return out;
}

namespace {

DefectSpec class_defect(int class_id, double scale, double seam_angle, double band_width, Rng& rng) {
    DefectSpec d;
    d.class_id = class_id;
    d.shape_seed = rng();
    auto S = [&](double lo, double hi) { return std::max(1.5, uniform(rng, lo, hi) * scale); };
    switch (class_id) {
        case 0:  // blow-hole: small dark pore
            d.primitive = Primitive::Ellipse;
            d.length = S(6, 12);
            d.thickness = d.length * uniform(rng, 0.8, 1.0);
            d.angle_deg = uniform(rng, 0, 180);
            d.contrast = -70;
            break;
        case 1:  // undercut: groove hugging the band edge
            d.primitive = Primitive::Ellipse;
            d.length = S(30, 60);
            d.thickness = S(3, 5);
            d.angle_deg = seam_angle;
            d.contrast = -60;
            break;
        case 2:  // broken-arc
            d.primitive = Primitive::Blob;
            d.length = S(16, 30);
            d.thickness = S(8, 14);
            d.angle_deg = seam_angle;
            d.contrast = -50;
            break;
        case 3:  // crack: thin wiggly stroke, near-square box
            d.primitive = Primitive::Polyline;
            d.length = S(25, 50);
            d.thickness = std::max(1.5, 2.0 * scale);
            d.angle_deg = seam_angle + 45 + uniform(rng, -10, 10);
            d.contrast = -70;
            break;
        case 4:  // overlap: bright, bottom-right to top-left
            d.primitive = Primitive::Ellipse;
            d.length = S(20, 36);
            d.thickness = S(6, 10);
            d.angle_deg = 135;
            d.contrast = 40;
            break;
        case 5:  // slag-inclusion
            d.primitive = Primitive::Blob;
            d.length = S(10, 20);
            d.thickness = S(6, 10);
            d.angle_deg = uniform(rng, 0, 180);
            d.contrast = -35;
            break;
        case 6:  // lack-of-fusion: long thin line on the seam axis
            d.primitive = Primitive::Ellipse;
            d.length = S(40, 80);
            d.thickness = S(3, 6);
            d.angle_deg = seam_angle;
            d.contrast = -55;
            break;
        default:  // hollow-bead
            d.primitive = Primitive::Ellipse;
            d.length = S(30, 60);
            d.thickness = S(6, 10);
            d.angle_deg = seam_angle;
            d.contrast = -45;
            break;
    }
    d.thickness = std::min(d.thickness, 0.8 * band_width);
    return d;
}

}  // namespace

SynthScene random_scene(std::size_t width, std::size_t height, double seam_angle_deg, std::span<const int> classes,
                        std::uint64_t seed, double noise_sigma) {
    SynthScene scene;
    scene.width = width;
    scene.height = height;
    scene.seam_angle_deg = seam_angle_deg;
    const double side = double(std::min(width, height));
    scene.band_width = 0.3 * side;
    scene.noise_sigma = noise_sigma;
    scene.seed = splitmix64(seed);
    const double scale = side / 256.0;
    const Axes seam = axes_of(seam_angle_deg);
    Rng rng(seed);
    for (int cls : classes) {
        class_label(cls);
        DefectSpec d = class_defect(cls, scale, seam_angle_deg, scene.band_width, rng);
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            if (attempt > 0 && attempt % 20 == 0) {
                d.length = std::max(1.5, d.length * 0.8);
                d.thickness = std::max(1.5, d.thickness * 0.8);
            }
            const double along = uniform(rng, -0.4, 0.4) * side;
            const double room = std::max(0.0, 0.5 * scene.band_width - 0.5 * d.thickness);
            double across = uniform(rng, -0.6, 0.6) * room;
            if (cls == 1) across = (rng() & 1 ? 1.0 : -1.0) * room;
            if (cls == 6) across = 0;
            d.center = {0.5 * double(width) + along * seam.u.x + across * seam.v.x,
                        0.5 * double(height) + along * seam.u.y + across * seam.v.y};
            const BBox b = defect_bounds(d);
            placed = b.xmin >= 1 && b.ymin >= 1 && b.xmax <= double(width) - 1 && b.ymax <= double(height) - 1;
        }
        if (!placed) throw SceneError(fmt::format("cannot place a class {} defect in a {}x{} image", cls, width, height));
        scene.defects.push_back(d);
    }
    return scene;
}

GrayImage blur_scene(const GrayImage& image, double angle_deg, int length_px, double noise_sigma, std::uint64_t seed) {
    Field f = convolve(to_field(image), motion_psf(angle_deg, length_px));
    if (noise_sigma > 0) {
        Rng rng(seed);
        for (double& v : f.data) v += gaussian(rng, noise_sigma);
    }
    return to_image(f);
}

std::vector<Detection> perturb_to_detections(std::span<const FrameTruth> truth, std::span<const FrameSize> sizes,
                                             const DetectorErrorModel& model, std::uint64_t seed) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(model.miss_rate) || !in_unit(model.false_positive_rate))
        throw ParameterError("detector error rates must lie in [0, 1]");
    if (!(model.jitter_sigma >= 0)) throw ParameterError("jitter sigma must be >= 0");
    if (sizes.size() != truth.size()) throw ParameterError("one frame size per ground-truth frame required");

    std::vector<Detection> out;
    for (std::size_t f = 0; f < truth.size(); ++f) {
        const auto& frame = truth[f];
        const double W = double(sizes[f].width), H = double(sizes[f].height);
        Rng rng(derive_seed(seed, frame.frame_id));
        for (const auto& gt : frame.annotations) {
            if (uniform(rng, 0, 1) < model.miss_rate) continue;
            BBox b = gt.bbox;
            double conf = 1.0;
            if (model.jitter_sigma > 0) {
                b.xmin += gaussian(rng, model.jitter_sigma);
                b.ymin += gaussian(rng, model.jitter_sigma);
                b.xmax += gaussian(rng, model.jitter_sigma);
                b.ymax += gaussian(rng, model.jitter_sigma);
                if (b.xmin > b.xmax) std::swap(b.xmin, b.xmax);
                if (b.ymin > b.ymax) std::swap(b.ymin, b.ymax);
                if (b.width() < 1) b.xmin = b.xmax - 1;
                if (b.height() < 1) b.ymin = b.ymax - 1;
                b = clip_to(b, W, H).value_or(gt.bbox);
                conf = std::max(model.true_confidence_floor, iou(b, gt.bbox)) * uniform(rng, 0.9, 1.0);
            }
            out.push_back({frame.frame_id, b, gt.class_id, conf});
        }
        for (std::size_t i = 0; i < frame.annotations.size(); ++i) {
            if (!(uniform(rng, 0, 1) < model.false_positive_rate)) continue;
            const double bw = uniform(rng, 0.05, 0.2) * W, bh = uniform(rng, 0.05, 0.2) * H;
            const double x = uniform(rng, 0, W - bw), y = uniform(rng, 0, H - bh);
            const int cls = static_cast<int>(rng() % kNumClasses);
            const double u = uniform(rng, 0, 1);
            out.push_back({frame.frame_id, {x, y, x + bw, y + bh}, cls, model.false_confidence_ceiling * u * u});
        }
    }
    return out;
}

}  // namespace weldkit
