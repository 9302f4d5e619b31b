#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weldkit/classes.hpp"
#include "weldkit/image.hpp"

namespace weldkit {

enum class AugmentKind { Brightness, Rotation, Cutout, GaussianNoise, HFlip, ColorJitter, Resize, RandomCrop };

/// Cycle order used by dataset expansion.
inline constexpr std::array<AugmentKind, 8> kAugmentKinds = {
    AugmentKind::Brightness, AugmentKind::Rotation, AugmentKind::Cutout,     AugmentKind::GaussianNoise,
    AugmentKind::HFlip,      AugmentKind::ColorJitter, AugmentKind::Resize, AugmentKind::RandomCrop,
};

std::string_view kind_name(AugmentKind kind);
AugmentKind kind_from_name(std::string_view name);
bool is_geometric(AugmentKind kind);

/// Sampling ranges; all symmetric ranges are +/- around identity.
struct AugmentRanges {
    double brightness = 0.25;       // factor in [1-b, 1+b]
    double rotation_deg = 15;
    double cutout_min = 0.05, cutout_max = 0.20;  // area fraction
    double noise_min = 1, noise_max = 8;          // sigma
    double contrast = 0.25;                        // factor in [1-c, 1+c]
    double sharpness_max = 1.0;                    // unsharp amount in [0, s]
    double resize_min = 0.75, resize_max = 1.25;
    double crop_min = 0.70, crop_max = 0.95;       // retained area fraction
};

struct AugmentOptions {
    AugmentRanges ranges;
    bool drop_truncated = true;
    double drop_fraction = 0.25;  // keep boxes retaining at least this much area
};

using ParamMap = std::map<std::string, double>;

struct AugmentRecord {
    std::string parent_id;
    int variant_index = 0;
    std::optional<AugmentKind> kind;  // empty: unmodified original
    ParamMap params;
    std::uint64_t seed = 0;
};

std::string record_to_json_line(const AugmentRecord& record);

struct Augmented {
    GrayImage image;
    std::vector<Annotation> annotations;
    AugmentRecord record;
};

/// Draws concrete parameters for `kind` from `seed`.
ParamMap sample_params(AugmentKind kind, std::size_t width, std::size_t height, std::uint64_t seed,
                       const AugmentRanges& ranges = {});

/// Applies concrete parameters. Gaussian noise pixels are drawn from `seed`.
Augmented apply_augment(const GrayImage& image, std::span<const Annotation> annotations, AugmentKind kind,
                        const ParamMap& params, std::uint64_t seed, const AugmentOptions& options = {});

/// sample_params + apply_augment.
Augmented augment_one(const GrayImage& image, std::span<const Annotation> annotations, AugmentKind kind,
                      std::uint64_t seed, const AugmentOptions& options = {});

/// Re-runs a recorded augmentation; output is byte-identical to the original run.
Augmented replay(const GrayImage& image, std::span<const Annotation> annotations, const AugmentRecord& record,
                 const AugmentOptions& options = {});

struct Sample {
    std::string frame_id;
    GrayImage image;
    std::vector<Annotation> annotations;
};

struct ExpandOptions {
    int multiplier = 9;
    std::uint64_t master_seed = 0;
    bool include_original = false;  // variant 1 is the untouched original
    AugmentOptions augment;
};

std::string variant_id(std::string_view parent_id, int variant_index);

/// Kind for variant i (1-based), honoring include_original.
std::optional<AugmentKind> variant_kind(int variant_index, bool include_original);

/// The `multiplier` variants of one original, seeds derived from
/// (master_seed, parent id, variant index).
std::vector<Augmented> expand_sample(const Sample& sample, const ExpandOptions& options);

/// expand_sample over every original, parent-major order; runs on the
/// worker pool with output independent of the worker count.
std::vector<Augmented> expand_dataset(std::span<const Sample> samples, const ExpandOptions& options);

struct MosaicTile {
    const GrayImage* image;
    std::span<const Annotation> annotations;
};

/// Four tiles letterboxed around a random split point drawn from the middle
/// half of the canvas (or `center` when given); boxes are offset, clipped to
/// their quadrant and filtered by the drop rule.
std::pair<GrayImage, std::vector<Annotation>> mosaic(std::span<const MosaicTile, 4> tiles, std::size_t output_side,
                                                     std::uint64_t seed, const AugmentOptions& options = {},
                                                     std::optional<Point> center = std::nullopt);

}  // namespace weldkit
