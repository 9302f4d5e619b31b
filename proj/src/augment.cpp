#include "weldkit/augment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "weldkit/error.hpp"
#include "weldkit/filter.hpp"
#include "weldkit/ingest.hpp"
#include "weldkit/parallel.hpp"
#include "weldkit/rng.hpp"

namespace weldkit {

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "brightness", "rotation", "cutout", "gaussian_noise", "hflip", "color_jitter", "resize", "random_crop",
};

double param(const ParamMap& p, const char* key) {
    auto it = p.find(key);
    if (it == p.end()) throw ParameterError(fmt::format("augment: missing parameter '{}'", key));
    return it->second;
}

std::size_t rounded(double v) { return static_cast<std::size_t>(std::floor(v + 0.5)); }

// Boxes through a geometric map: clip to the output frame, drop when too
// little of the transformed box survives (or nothing does).
std::vector<Annotation> settle_boxes(const std::vector<Annotation>& transformed, double w, double h,
                                     const AugmentOptions& opt) {
    std::vector<Annotation> out;
    for (const auto& a : transformed) {
        const auto clipped = clip_to(a.bbox, w, h);
        if (!clipped) continue;
        if (opt.drop_truncated && clipped->area() < opt.drop_fraction * a.bbox.area()) continue;
        out.push_back({*clipped, a.class_id});
    }
    return out;
}

double sample_bilinear_zero(const GrayImage& img, double fx, double fy) {
    const double x0f = std::floor(fx), y0f = std::floor(fy);
    const double tx = fx - x0f, ty = fy - y0f;
    const auto x0 = static_cast<std::ptrdiff_t>(x0f), y0 = static_cast<std::ptrdiff_t>(y0f);
    auto px = [&](std::ptrdiff_t x, std::ptrdiff_t y) -> double {
        if (x < 0 || y < 0 || x >= std::ptrdiff_t(img.width()) || y >= std::ptrdiff_t(img.height())) return 0.0;
        return img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    return (px(x0, y0) * (1 - tx) + px(x0 + 1, y0) * tx) * (1 - ty) +
           (px(x0, y0 + 1) * (1 - tx) + px(x0 + 1, y0 + 1) * tx) * ty;
}

}  // namespace

std::string_view kind_name(AugmentKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

AugmentKind kind_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == name) return static_cast<AugmentKind>(i);
    throw ParameterError("unknown augmentation: " + std::string(name));
}

bool is_geometric(AugmentKind kind) {
    return kind == AugmentKind::Rotation || kind == AugmentKind::HFlip || kind == AugmentKind::Resize ||
           kind == AugmentKind::RandomCrop;
}

std::string record_to_json_line(const AugmentRecord& r) {
    nlohmann::ordered_json j;
    j["parent_id"] = r.parent_id;
    j["variant_index"] = r.variant_index;
    j["kind"] = r.kind ? std::string(kind_name(*r.kind)) : std::string("original");
    j["params"] = r.params;
    j["seed"] = r.seed;
    return j.dump() + "\n";
}

ParamMap sample_params(AugmentKind kind, std::size_t width, std::size_t height, std::uint64_t seed,
                       const AugmentRanges& r) {
    Rng rng(seed);
    const double W = double(width), H = double(height);
    switch (kind) {
        case AugmentKind::Brightness:
            return {{"factor", uniform(rng, 1 - r.brightness, 1 + r.brightness)}};
        case AugmentKind::Rotation:
            return {{"angle_deg", uniform(rng, -r.rotation_deg, r.rotation_deg)}};
        case AugmentKind::Cutout: {
            const double area = uniform(rng, r.cutout_min, r.cutout_max) * W * H;
            const double aspect = std::exp(uniform(rng, std::log(0.5), std::log(2.0)));
            const double w = std::clamp(double(rounded(std::sqrt(area * aspect))), 1.0, W);
            const double h = std::clamp(double(rounded(area / w)), 1.0, H);
            const double x = std::floor(uniform(rng, 0, W - w + 1));
            const double y = std::floor(uniform(rng, 0, H - h + 1));
            return {{"x", std::min(x, W - w)}, {"y", std::min(y, H - h)}, {"w", w}, {"h", h}};
        }
        case AugmentKind::GaussianNoise:
            return {{"sigma", uniform(rng, r.noise_min, r.noise_max)}};
        case AugmentKind::HFlip:
            return {};
        case AugmentKind::ColorJitter:
            return {{"contrast", uniform(rng, 1 - r.contrast, 1 + r.contrast)},
                    {"sharpness", uniform(rng, 0, r.sharpness_max)}};
        case AugmentKind::Resize:
            return {{"scale", uniform(rng, r.resize_min, r.resize_max)}};
        case AugmentKind::RandomCrop: {
            const double side = std::sqrt(uniform(rng, r.crop_min, r.crop_max));
            const double w = std::clamp(double(rounded(W * side)), 1.0, W);
            const double h = std::clamp(double(rounded(H * side)), 1.0, H);
            const double x = std::floor(uniform(rng, 0, W - w + 1));
            const double y = std::floor(uniform(rng, 0, H - h + 1));
            return {{"x", std::min(x, W - w)}, {"y", std::min(y, H - h)}, {"w", w}, {"h", h}};
        }
    }
    return {};
}

Augmented apply_augment(const GrayImage& image, std::span<const Annotation> annotations, AugmentKind kind,
                        const ParamMap& p, std::uint64_t seed, const AugmentOptions& opt) {
    const std::size_t W = image.width(), H = image.height();
    Augmented out{image, {annotations.begin(), annotations.end()}, {"", 0, kind, p, seed}};
    switch (kind) {
        case AugmentKind::Brightness: {
            const double f = param(p, "factor");
            for (auto& v : out.image.data()) v = quantize(double(v) * f);
            break;
        }
        case AugmentKind::Rotation: {
            double s = 0, c = 1;
            sincos_deg(param(p, "angle_deg"), s, c);
            const double cx = 0.5 * double(W), cy = 0.5 * double(H);
            for (std::size_t y = 0; y < H; ++y) {
                for (std::size_t x = 0; x < W; ++x) {
                    const double dx = double(x) + 0.5 - cx, dy = double(y) + 0.5 - cy;
                    const double sx = cx + dx * c - dy * s, sy = cy + dx * s + dy * c;
                    out.image.at(x, y) = quantize(sample_bilinear_zero(image, sx - 0.5, sy - 0.5));
                }
            }
            std::vector<Annotation> moved;
            for (const auto& a : annotations) {
                std::array<Point, 4> pts = corners(a.bbox);
                for (auto& q : pts) {
                    const double dx = q.x - cx, dy = q.y - cy;
                    q = {cx + dx * c + dy * s, cy - dx * s + dy * c};
                }
                moved.push_back({enclose(pts), a.class_id});
            }
            out.annotations = settle_boxes(moved, double(W), double(H), opt);
            break;
        }
        case AugmentKind::Cutout: {
            const auto x0 = rounded(param(p, "x")), y0 = rounded(param(p, "y"));
            const auto w = rounded(param(p, "w")), h = rounded(param(p, "h"));
            for (std::size_t y = y0; y < std::min(H, y0 + h); ++y)
                for (std::size_t x = x0; x < std::min(W, x0 + w); ++x) out.image.at(x, y) = 0;
            break;
        }
        case AugmentKind::GaussianNoise: {
            const double sigma = param(p, "sigma");
            Rng rng(splitmix64(seed));
            for (auto& v : out.image.data()) v = quantize(double(v) + gaussian(rng, sigma));
            break;
        }
        case AugmentKind::HFlip: {
            for (std::size_t y = 0; y < H; ++y) {
                auto row = out.image.row(y);
                std::reverse(row.begin(), row.end());
            }
            for (auto& a : out.annotations) {
                const double xmin = a.bbox.xmin;
                a.bbox.xmin = double(W) - a.bbox.xmax;
                a.bbox.xmax = double(W) - xmin;
            }
            break;
        }
        case AugmentKind::ColorJitter: {
            const double contrast = param(p, "contrast"), sharp = param(p, "sharpness");
            const double mean = mean_intensity(image);
            Field f = to_field(image);
            for (double& v : f.data) v = mean + contrast * (v - mean);
            if (W >= 3 && H >= 3) {
                const Field blurred = convolve(f, Kernel::normalized(3, 3, std::vector<double>(9, 1.0)));
                for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] += sharp * (f.data[i] - blurred.data[i]);
            }
            out.image = to_image(f);
            break;
        }
        case AugmentKind::Resize: {
            const double scale = param(p, "scale");
            const std::size_t nw = std::max<std::size_t>(1, rounded(double(W) * scale));
            const std::size_t nh = std::max<std::size_t>(1, rounded(double(H) * scale));
            out.image = resize_bilinear(image, nw, nh);
            const double sx = double(nw) / double(W), sy = double(nh) / double(H);
            std::vector<Annotation> moved;
            for (const auto& a : annotations)
                moved.push_back({{a.bbox.xmin * sx, a.bbox.ymin * sy, a.bbox.xmax * sx, a.bbox.ymax * sy}, a.class_id});
            out.annotations = settle_boxes(moved, double(nw), double(nh), opt);
            break;
        }
        case AugmentKind::RandomCrop: {
            const double x = param(p, "x"), y = param(p, "y"), w = param(p, "w"), h = param(p, "h");
            out.image = crop(image, {x, y, x + w, y + h});
            std::vector<Annotation> moved;
            for (const auto& a : annotations)
                moved.push_back({{a.bbox.xmin - x, a.bbox.ymin - y, a.bbox.xmax - x, a.bbox.ymax - y}, a.class_id});
            out.annotations = settle_boxes(moved, w, h, opt);
            break;
        }
    }
    return out;
}

Augmented augment_one(const GrayImage& image, std::span<const Annotation> annotations, AugmentKind kind,
                      std::uint64_t seed, const AugmentOptions& options) {
    return apply_augment(image, annotations, kind, sample_params(kind, image.width(), image.height(), seed, options.ranges),
                         seed, options);
}

Augmented replay(const GrayImage& image, std::span<const Annotation> annotations, const AugmentRecord& record,
                 const AugmentOptions& options) {
    if (!record.kind) return {image, {annotations.begin(), annotations.end()}, record};
    Augmented out = apply_augment(image, annotations, *record.kind, record.params, record.seed, options);
    out.record = record;
    return out;
}

std::string variant_id(std::string_view parent_id, int variant_index) {
    return fmt::format("{}_v{}", parent_id, variant_index);
}

std::optional<AugmentKind> variant_kind(int variant_index, bool include_original) {
    if (include_original) {
        if (variant_index == 1) return std::nullopt;
        return kAugmentKinds[static_cast<std::size_t>(variant_index - 2) % kAugmentKinds.size()];
    }
    return kAugmentKinds[static_cast<std::size_t>(variant_index - 1) % kAugmentKinds.size()];
}

std::vector<Augmented> expand_sample(const Sample& sample, const ExpandOptions& options) {
    if (options.multiplier < 1) throw ParameterError("multiplier must be >= 1");
    std::vector<Augmented> out;
    out.reserve(static_cast<std::size_t>(options.multiplier));
    for (int i = 1; i <= options.multiplier; ++i) {
        const std::uint64_t seed = derive_seed(options.master_seed, sample.frame_id, static_cast<std::uint64_t>(i));
        const auto kind = variant_kind(i, options.include_original);
        Augmented a = kind ? augment_one(sample.image, sample.annotations, *kind, seed, options.augment)
                           : Augmented{sample.image, sample.annotations, {}};
        a.record.parent_id = sample.frame_id;
        a.record.variant_index = i;
        a.record.kind = kind;
        a.record.seed = seed;
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Augmented> expand_dataset(std::span<const Sample> samples, const ExpandOptions& options) {
    if (options.multiplier < 1) throw ParameterError("multiplier must be >= 1");
    std::vector<std::vector<Augmented>> per_parent(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { per_parent[i] = expand_sample(samples[i], options); });
    std::vector<Augmented> out;
    out.reserve(samples.size() * static_cast<std::size_t>(options.multiplier));
    for (auto& v : per_parent)
        for (auto& a : v) out.push_back(std::move(a));
    return out;
}

std::pair<GrayImage, std::vector<Annotation>> mosaic(std::span<const MosaicTile, 4> tiles, std::size_t output_side,
                                                     std::uint64_t seed, const AugmentOptions& options,
                                                     std::optional<Point> center) {
    if (output_side < 2) throw ParameterError("mosaic: output side must be >= 2");
    const double side = double(output_side);
    Point c;
    if (center) {
        c = *center;
    } else {
        Rng rng(seed);
        c = {std::floor(uniform(rng, 0.25 * side, 0.75 * side)), std::floor(uniform(rng, 0.25 * side, 0.75 * side))};
    }
    const auto cx = static_cast<std::size_t>(std::clamp(c.x, 1.0, side - 1));
    const auto cy = static_cast<std::size_t>(std::clamp(c.y, 1.0, side - 1));
    const std::array<std::array<std::size_t, 4>, 4> quads = {{
        {0, 0, cx, cy},
        {cx, 0, output_side - cx, cy},
        {0, cy, cx, output_side - cy},
        {cx, cy, output_side - cx, output_side - cy},
    }};

    GrayImage canvas(output_side, output_side, kLetterboxFill);
    std::vector<Annotation> boxes;
    for (std::size_t q = 0; q < 4; ++q) {
        const auto [qx, qy, qw, qh] = quads[q];
        const auto [tile, tf] = fit_into(*tiles[q].image, qw, qh);
        for (std::size_t y = 0; y < qh; ++y) {
            const auto src = tile.row(y);
            std::copy(src.begin(), src.end(), canvas.row(qy + y).begin() + static_cast<std::ptrdiff_t>(qx));
        }
        std::vector<Annotation> moved;
        for (const auto& a : tiles[q].annotations) moved.push_back({tf.apply(a.bbox), a.class_id});
        for (auto& a : settle_boxes(moved, double(qw), double(qh), options)) {
            a.bbox = {a.bbox.xmin + double(qx), a.bbox.ymin + double(qy), a.bbox.xmax + double(qx),
                      a.bbox.ymax + double(qy)};
            boxes.push_back(a);
        }
    }
    return {std::move(canvas), std::move(boxes)};
}

}  // namespace weldkit
