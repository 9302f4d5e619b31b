#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "weldkit/anchors.hpp"
#include "weldkit/augment.hpp"
#include "weldkit/config.hpp"
#include "weldkit/dataset.hpp"
#include "weldkit/deblur.hpp"
#include "weldkit/eval.hpp"
#include "weldkit/ingest.hpp"
#include "weldkit/manifest.hpp"
#include "weldkit/synth.hpp"

// Directory-level stage runners shared by the subcommands and `pipeline`.
// A dataset root holds images/, labels_labelme/, labels_yolo/, labels_voc/
// and manifest.jsonl; image paths in the manifest are relative to the root.
namespace weldkit::cli {

namespace fs = std::filesystem;

/// Progress line on standard error.
void progress(const std::string& line);

/// Regular files with one of the given lowercase extensions, sorted by name.
std::vector<fs::path> list_files(const fs::path& dir, const std::vector<std::string>& extensions);
void ensure_dir(const fs::path& dir);

Manifest load_manifest(const fs::path& root);
void save_manifest(const fs::path& root, const Manifest& manifest);
GrayImage load_record_image(const fs::path& root, const ManifestRecord& record);

// ingest

struct IngestSettings {
    std::optional<RawSpec> raw;
    std::optional<BBox> crop;
    std::size_t letterbox = 0;  // target long side, 0 = off
    std::size_t stride = 32;
    int fill = kLetterboxFill;
};

struct IngestedFrame {
    std::string frame_id;
    std::string source;  // relative to the input directory
    std::size_t width = 0, height = 0;
    BBox crop_rect;      // in source pixels; the full frame when not cropping
    LetterboxTransform transform;

    /// Source-pixel box to output pixels; empty when nothing survives.
    std::optional<BBox> map_box(const BBox& box) const;
};

/// decode -> crop -> letterbox for one file.
std::pair<GrayImage, IngestedFrame> ingest_image(const fs::path& file, const IngestSettings& settings);

struct IngestJob {
    fs::path in, out;
    IngestSettings settings;
    bool png = false;
};

/// Writes <out>/<frame_id>.pgm (or .png) and <out>/index.tsv.
std::vector<IngestedFrame> ingest_directory(const IngestJob& job);
std::string index_tsv(const std::vector<IngestedFrame>& frames);

// deblur

struct DeblurJob {
    fs::path in, out;
    Kinematics kinematics;
    DeblurOptions options;
    fs::path log;  // default <out>/deblur_log.tsv
};

struct DeblurLogEntry {
    std::string frame_id;
    BlurEstimate estimate;
    DeblurStatus status = DeblurStatus::Skipped;
};

/// Writes <out>/<frame_id>.pgm and <out>/deblur_log.tsv.
std::vector<DeblurLogEntry> deblur_directory(const DeblurJob& job);

// synth

struct ScenesJob {
    fs::path out;
    std::size_t count = 8;
    std::size_t width = 256, height = 256;
    double noise = 2;
    int max_defects = 3;
    std::uint64_t seed = 0;
    std::optional<double> seam_angle;  // random per scene when unset
    int blur_length = 1;               // motion blur along each scene's seam
};

/// Writes a dataset root with images, Labelme labels, manifest.jsonl and
/// scenes.tsv (frame_id, seam angle, blur length).
Manifest synth_scenes(const ScenesJob& job);

/// Blurs every image of `in` into `out` with per-frame derived noise seeds.
void synth_blur(const fs::path& in, const fs::path& out, double angle_deg, int length, double noise,
                std::uint64_t seed);

enum class SplitFilter { All, Train, Val };
SplitFilter parse_split_filter(const std::string& name);
std::vector<const ManifestRecord*> select(const Manifest& manifest, SplitFilter filter);

std::vector<Detection> synth_detections(const fs::path& root, SplitFilter filter, const DetectorErrorModel& model,
                                        std::uint64_t seed);

// datasets

enum class LabelFormat { Labelme, Yolo, Voc };
LabelFormat parse_label_format(const std::string& name);

/// Label files of `format` for every manifest record.
void write_labels(const fs::path& root, const Manifest& manifest, LabelFormat format);

/// Rebuilds the manifest from the `from` label files (keeping split and
/// provenance of known frames) and writes each `to` format.
Manifest convert_dataset(const fs::path& root, LabelFormat from, const std::vector<LabelFormat>& to);

/// Expands the originals of `in` into a new dataset root `out`, with
/// provenance.jsonl and YOLO/VOC labels.
Manifest augment_dataset(const fs::path& in, const fs::path& out, const ExpandOptions& options);

/// Assigns splits in place and writes train.txt / val.txt.
Manifest split_dataset(const fs::path& root, const SplitRatio& ratio, std::uint64_t seed, bool group);
SplitRatio parse_ratio(const std::string& text);

DatasetStats stats_dataset(const fs::path& root, const fs::path& json_out, const std::optional<fs::path>& svg_out);

std::string anchors_to_json(const AnchorSet& anchors);

// eval

struct EvalJob {
    fs::path root;
    fs::path detections;
    double iou = kDefaultIouThreshold;
    double confidence = kDefaultConfidenceThreshold;
    SplitFilter split = SplitFilter::All;
    std::string model = "model";
    std::optional<std::string> time_command;  // `{}` is replaced by the image path
};

MetricReport eval_dataset(const EvalJob& job);

// pipeline

/// synth (or input_root) -> ingest -> deblur -> augment -> convert -> split
/// -> stats -> anchors -> synthetic detections -> eval, all under `out`.
MetricReport run_pipeline(const PipelineConfig& config, const fs::path& out);

}  // namespace weldkit::cli
