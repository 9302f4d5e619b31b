#include "stages.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <mutex>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "weldkit/error.hpp"
#include "weldkit/formats.hpp"
#include "weldkit/image_io.hpp"
#include "weldkit/parallel.hpp"
#include "weldkit/rng.hpp"

namespace weldkit::cli {

namespace {

const std::vector<std::string> kImageExtensions = {".pgm", ".png", ".jpg", ".jpeg"};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

[[noreturn]] void rethrow_with(const Error& e, const std::string& context) {
    const std::string what = context + ": " + e.what();
    if (e.kind() == Error::Kind::Input) throw InputError(what);
    throw ParameterError(what);
}

const char* label_dir(LabelFormat f) {
    switch (f) {
        case LabelFormat::Labelme: return "labels_labelme";
        case LabelFormat::Yolo: return "labels_yolo";
        case LabelFormat::Voc: return "labels_voc";
    }
    return "";
}

const char* label_ext(LabelFormat f) {
    switch (f) {
        case LabelFormat::Labelme: return ".json";
        case LabelFormat::Yolo: return ".txt";
        case LabelFormat::Voc: return ".xml";
    }
    return "";
}

void check_unique_stems(const std::vector<fs::path>& files) {
    std::set<std::string> seen;
    for (const auto& f : files)
        if (!seen.insert(f.stem().string()).second)
            throw InputError(fmt::format("two inputs share the frame id '{}'", f.stem().string()));
}

std::string join_lines(const std::vector<const ManifestRecord*>& records) {
    std::string out;
    for (const auto* r : records) out += r->image_path + "\n";
    return out;
}

}  // namespace

void progress(const std::string& line) {
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    std::cerr << line << '\n';
}

std::vector<fs::path> list_files(const fs::path& dir, const std::vector<std::string>& extensions) {
    if (!fs::is_directory(dir)) throw InputError("no such directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = lower(entry.path().extension().string());
        if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end()) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

Manifest load_manifest(const fs::path& root) {
    const auto path = root / "manifest.jsonl";
    if (!fs::exists(path)) throw InputError("missing manifest: " + path.string());
    try {
        return manifest_from_jsonl(read_text(path));
    } catch (const Error& e) {
        rethrow_with(e, path.string());
    }
}

void save_manifest(const fs::path& root, const Manifest& manifest) {
    manifest.validate();
    write_text(root / "manifest.jsonl", manifest_to_jsonl(manifest));
}

GrayImage load_record_image(const fs::path& root, const ManifestRecord& record) {
    GrayImage img = load_gray(root / record.image_path);
    if (img.width() != record.width || img.height() != record.height)
        throw InputError(fmt::format("{}: image is {}x{}, manifest says {}x{}", record.image_path, img.width(),
                                     img.height(), record.width, record.height));
    return img;
}

// ingest

std::optional<BBox> IngestedFrame::map_box(const BBox& box) const {
    BBox b{box.xmin - crop_rect.xmin, box.ymin - crop_rect.ymin, box.xmax - crop_rect.xmin,
           box.ymax - crop_rect.ymin};
    auto inside = clip_to(b, std::size_t(crop_rect.width()), std::size_t(crop_rect.height()));
    if (!inside) return std::nullopt;
    return clip_to(transform.apply(*inside), width, height);
}

std::pair<GrayImage, IngestedFrame> ingest_image(const fs::path& file, const IngestSettings& s) {
    if (s.fill < 0 || s.fill > 255) throw ParameterError("fill must lie in [0, 255]");
    IngestedFrame frame;
    frame.frame_id = file.stem().string();
    GrayImage img = load_gray(file, s.raw ? &*s.raw : nullptr);
    frame.crop_rect = {0, 0, double(img.width()), double(img.height())};
    if (s.crop) {
        img = crop(img, *s.crop);
        frame.crop_rect = *s.crop;
    }
    if (s.letterbox > 0) {
        auto [boxed, t] = letterbox(img, s.letterbox, s.stride, std::uint8_t(s.fill));
        img = std::move(boxed);
        frame.transform = t;
    }
    frame.width = img.width();
    frame.height = img.height();
    return {std::move(img), frame};
}

std::string index_tsv(const std::vector<IngestedFrame>& frames) {
    std::string out;
    for (const auto& f : frames) out += fmt::format("{}\t{}\t{}\t{}\n", f.frame_id, f.source, f.width, f.height);
    return out;
}

std::vector<IngestedFrame> ingest_directory(const IngestJob& job) {
    auto exts = kImageExtensions;
    exts.push_back(".raw");
    const auto files = list_files(job.in, exts);
    if (files.empty()) throw InputError("no input frames in " + job.in.string());
    check_unique_stems(files);
    if (job.settings.raw) job.settings.raw->validate();
    ensure_dir(job.out);

    std::vector<IngestedFrame> frames(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
        auto [img, frame] = ingest_image(files[i], job.settings);
        frame.source = files[i].filename().string();
        const auto dst = job.out / (frame.frame_id + (job.png ? ".png" : ".pgm"));
        job.png ? write_png(dst, img) : write_pgm(dst, img);
        frames[i] = std::move(frame);
    });
    write_text(job.out / "index.tsv", index_tsv(frames));
    progress(fmt::format("ingest: {} frames -> {}", frames.size(), job.out.string()));
    return frames;
}

// deblur

std::vector<DeblurLogEntry> deblur_directory(const DeblurJob& job) {
    estimate_blur_length(job.kinematics.speed_px_per_s, job.kinematics.exposure_s);  // validates
    const auto files = list_files(job.in, kImageExtensions);
    if (files.empty()) throw InputError("no input frames in " + job.in.string());
    check_unique_stems(files);
    ensure_dir(job.out);

    std::vector<DeblurLogEntry> log(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
        const GrayImage img = load_gray(files[i]);
        DeblurResult r = deblur_auto(img, job.kinematics, job.options);
        write_pgm(job.out / (files[i].stem().string() + ".pgm"), r.image);
        log[i] = {files[i].stem().string(), r.estimate, r.status};
    });

    std::string text;
    std::size_t skipped = 0;
    for (const auto& e : log) {
        if (e.status == DeblurStatus::Deblurred) {
            text += fmt::format("{}\t{:.3f}\t{}\tdeblurred\n", e.frame_id, e.estimate.angle_deg, e.estimate.length_px);
        } else {
            text += fmt::format("{}\t-\t-\tskipped\n", e.frame_id);
            ++skipped;
        }
    }
    write_text(job.log.empty() ? job.out / "deblur_log.tsv" : job.log, text);
    progress(fmt::format("deblur: {} frames, {} skipped (no lines)", log.size(), skipped));
    return log;
}

// synth

Manifest synth_scenes(const ScenesJob& job) {
    if (job.count == 0) throw ParameterError("scene count must be positive");
    if (job.max_defects < 0) throw ParameterError("max defects must be >= 0");
    if (job.blur_length < 1) throw ParameterError("blur length must be >= 1");
    ensure_dir(job.out / "images");
    ensure_dir(job.out / "labels_labelme");

    Manifest m;
    m.records.resize(job.count);
    std::vector<double> angles(job.count);
    parallel_for(job.count, [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(job.seed, "scene", i);
        Rng rng(seed);
        const double angle =
            job.seam_angle ? *job.seam_angle : double(std::uniform_int_distribution<int>(0, 179)(rng));
        const int n = job.max_defects == 0 ? 0 : std::uniform_int_distribution<int>(1, job.max_defects)(rng);
        std::discrete_distribution<int> pick(kCatalogueCounts.begin(), kCatalogueCounts.end());
        std::vector<int> classes;
        for (int k = 0; k < n; ++k) classes.push_back(pick(rng));

        // Sensor noise enters after the motion blur.
        const bool blurred = job.blur_length > 1;
        const SceneRender render = generate_scene(
            random_scene(job.width, job.height, angle, classes, derive_seed(seed, "layout"), blurred ? 0 : job.noise));
        GrayImage img = render.image;
        if (blurred) img = blur_scene(img, angle, job.blur_length, job.noise, derive_seed(seed, "blur"));

        auto& r = m.records[i];
        r.frame_id = fmt::format("scene_{:04}", i);
        r.image_path = "images/" + r.frame_id + ".pgm";
        r.width = img.width();
        r.height = img.height();
        r.annotations = render.annotations;
        angles[i] = angle;
        write_pgm(job.out / r.image_path, img);
    });

    std::string scenes;
    for (std::size_t i = 0; i < job.count; ++i)
        scenes += fmt::format("{}\t{}\t{}\n", m.records[i].frame_id, angles[i], job.blur_length);
    save_manifest(job.out, m);
    write_labels(job.out, m, LabelFormat::Labelme);
    write_text(job.out / "scenes.tsv", scenes);
    progress(fmt::format("synth: {} scenes -> {}", job.count, job.out.string()));
    return m;
}

void synth_blur(const fs::path& in, const fs::path& out, double angle_deg, int length, double noise,
                std::uint64_t seed) {
    if (length < 1) throw ParameterError("blur length must be >= 1");
    if (!(noise >= 0)) throw ParameterError("noise sigma must be >= 0");
    const auto files = list_files(in, kImageExtensions);
    if (files.empty()) throw InputError("no input frames in " + in.string());
    check_unique_stems(files);
    ensure_dir(out);
    parallel_for(files.size(), [&](std::size_t i) {
        const auto id = files[i].stem().string();
        write_pgm(out / (id + ".pgm"), blur_scene(load_gray(files[i]), angle_deg, length, noise, derive_seed(seed, id)));
    });
    progress(fmt::format("synth blur: {} frames at {} deg, length {}", files.size(), angle_deg, length));
}

SplitFilter parse_split_filter(const std::string& name) {
    if (name == "all") return SplitFilter::All;
    if (name == "train") return SplitFilter::Train;
    if (name == "val") return SplitFilter::Val;
    throw ParameterError("split must be all, train or val: " + name);
}

std::vector<const ManifestRecord*> select(const Manifest& manifest, SplitFilter filter) {
    std::vector<const ManifestRecord*> out;
    for (const auto& r : manifest.records) {
        if (filter == SplitFilter::Train && r.split != Split::Train) continue;
        if (filter == SplitFilter::Val && r.split != Split::Val) continue;
        out.push_back(&r);
    }
    if (out.empty()) throw InputError("no manifest records in the requested split");
    return out;
}

std::vector<Detection> synth_detections(const fs::path& root, SplitFilter filter, const DetectorErrorModel& model,
                                        std::uint64_t seed) {
    const Manifest m = load_manifest(root);
    std::vector<FrameTruth> truth;
    std::vector<FrameSize> sizes;
    for (const auto* r : select(m, filter)) {
        truth.push_back({r->frame_id, r->annotations});
        sizes.push_back({r->width, r->height});
    }
    return perturb_to_detections(truth, sizes, model, seed);
}

// datasets

LabelFormat parse_label_format(const std::string& name) {
    if (name == "labelme") return LabelFormat::Labelme;
    if (name == "yolo") return LabelFormat::Yolo;
    if (name == "voc") return LabelFormat::Voc;
    throw ParameterError("unknown label format: " + name);
}

void write_labels(const fs::path& root, const Manifest& manifest, LabelFormat format) {
    const fs::path dir = root / label_dir(format);
    ensure_dir(dir);
    parallel_for(manifest.records.size(), [&](std::size_t i) {
        const auto& r = manifest.records[i];
        const fs::path dst = dir / (r.frame_id + label_ext(format));
        switch (format) {
            case LabelFormat::Yolo:
                write_text(dst, write_yolo(r.annotations, r.width, r.height));
                break;
            case LabelFormat::Voc:
                write_text(dst, write_voc({fs::path(r.image_path).filename().string(), r.width, r.height,
                                           r.annotations, 0}));
                break;
            case LabelFormat::Labelme:
                write_text(dst, write_labelme({"../" + r.image_path, r.width, r.height, r.annotations, 0}));
                break;
        }
    });
}

Manifest convert_dataset(const fs::path& root, LabelFormat from, const std::vector<LabelFormat>& to) {
    std::map<std::string, ManifestRecord> known;
    if (fs::exists(root / "manifest.jsonl"))
        for (auto& r : load_manifest(root).records) known.emplace(r.frame_id, std::move(r));

    const auto files = list_files(root / label_dir(from), {label_ext(from)});
    if (files.empty()) throw InputError(fmt::format("no labels in {}", (root / label_dir(from)).string()));

    Manifest m;
    std::size_t skipped = 0;
    for (const auto& file : files) {
        ManifestRecord r;
        r.frame_id = file.stem().string();
        const auto old = known.find(r.frame_id);
        try {
            const std::string text = read_text(file);
            if (from == LabelFormat::Labelme) {
                LabeledImage li = parse_labelme(text);
                const fs::path img(li.image_path);
                r.image_path = img.is_absolute() ? img.generic_string()
                                                 : (fs::path(label_dir(from)) / img).lexically_normal().generic_string();
                r.width = li.width;
                r.height = li.height;
                r.annotations = std::move(li.annotations);
                skipped += li.skipped_shapes;
            } else if (from == LabelFormat::Voc) {
                LabeledImage li = parse_voc(text);
                r.image_path = "images/" + li.image_path;
                r.width = li.width;
                r.height = li.height;
                r.annotations = std::move(li.annotations);
            } else {
                if (old != known.end()) {
                    r.image_path = old->second.image_path;
                    r.width = old->second.width;
                    r.height = old->second.height;
                } else {
                    auto candidates = list_files(root / "images", kImageExtensions);
                    auto hit = std::find_if(candidates.begin(), candidates.end(),
                                            [&](const fs::path& p) { return p.stem() == r.frame_id; });
                    if (hit == candidates.end()) throw InputError("no image for " + r.frame_id);
                    const GrayImage img = load_gray(*hit);
                    r.image_path = "images/" + hit->filename().string();
                    r.width = img.width();
                    r.height = img.height();
                }
                r.annotations = parse_yolo(text, r.width, r.height);
            }
        } catch (const Error& e) {
            rethrow_with(e, file.string());
        }
        if (old != known.end()) {
            r.split = old->second.split;
            r.parent_id = old->second.parent_id;
        }
        m.records.push_back(std::move(r));
    }
    if (skipped > 0) progress(fmt::format("convert: skipped {} non-rectangle shapes", skipped));
    save_manifest(root, m);
    for (LabelFormat f : to) write_labels(root, m, f);
    progress(fmt::format("convert: {} frames", m.records.size()));
    return m;
}

Manifest augment_dataset(const fs::path& in, const fs::path& out, const ExpandOptions& options) {
    const Manifest src = load_manifest(in);
    std::vector<const ManifestRecord*> originals;
    for (const auto& r : src.records)
        if (!r.augmented()) originals.push_back(&r);
    if (originals.empty()) throw InputError("augment: no original records in " + in.string());

    std::vector<Sample> samples(originals.size());
    parallel_for(originals.size(), [&](std::size_t i) {
        samples[i] = {originals[i]->frame_id, load_record_image(in, *originals[i]), originals[i]->annotations};
    });
    const auto variants = expand_dataset(samples, options);

    ensure_dir(out / "images");
    Manifest m;
    m.records.resize(variants.size());
    parallel_for(variants.size(), [&](std::size_t i) {
        const auto& v = variants[i];
        auto& r = m.records[i];
        r.frame_id = variant_id(v.record.parent_id, v.record.variant_index);
        r.image_path = "images/" + r.frame_id + ".pgm";
        r.width = v.image.width();
        r.height = v.image.height();
        r.annotations = v.annotations;
        r.parent_id = v.record.parent_id;
        write_pgm(out / r.image_path, v.image);
    });
    std::string provenance;
    for (const auto& v : variants) provenance += record_to_json_line(v.record);

    save_manifest(out, m);
    write_text(out / "provenance.jsonl", provenance);
    write_labels(out, m, LabelFormat::Yolo);
    write_labels(out, m, LabelFormat::Voc);
    std::size_t before = 0, after = 0;
    for (const auto* r : originals) before += r->annotations.size();
    for (const auto& r : m.records) after += r.annotations.size();
    progress(fmt::format("augment: {} originals -> {} images, {} -> {} labels", originals.size(), m.records.size(),
                         before, after));
    return m;
}

SplitRatio parse_ratio(const std::string& text) {
    const auto colon = text.find(':');
    SplitRatio r;
    try {
        if (colon == std::string::npos) throw std::invalid_argument(text);
        std::size_t used = 0;
        const int train = std::stoi(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(text);
        const std::string rest = text.substr(colon + 1);
        const int val = std::stoi(rest, &used);
        if (used != rest.size() || train <= 0 || val <= 0) throw std::invalid_argument(text);
        r.train = unsigned(train);
        r.val = unsigned(val);
    } catch (const std::logic_error&) {
        throw ParameterError("ratio must look like TRAIN:VAL with positive integers: " + text);
    }
    return r;
}

Manifest split_dataset(const fs::path& root, const SplitRatio& ratio, std::uint64_t seed, bool group) {
    Manifest m = load_manifest(root);
    split(m, ratio, seed, group);
    save_manifest(root, m);
    std::vector<const ManifestRecord*> train, val;
    for (const auto& r : m.records) (r.split == Split::Val ? val : train).push_back(&r);
    write_text(root / "train.txt", join_lines(train));
    write_text(root / "val.txt", join_lines(val));
    progress(fmt::format("split: {} train, {} val", train.size(), val.size()));
    return m;
}

DatasetStats stats_dataset(const fs::path& root, const fs::path& json_out, const std::optional<fs::path>& svg_out) {
    const DatasetStats s = dataset_stats(load_manifest(root));
    write_text(json_out, stats_to_json(s));
    if (svg_out) write_text(*svg_out, stats_to_svg(s));
    return s;
}

std::string anchors_to_json(const AnchorSet& a) {
    nlohmann::ordered_json j;
    j["k"] = a.anchors.size();
    j["mean_iou"] = a.mean_iou;
    auto& list = j["anchors"] = nlohmann::ordered_json::array();
    for (const auto& b : a.anchors) list.push_back({b.w, b.h});
    j["history"] = a.history;
    return j.dump(2) + "\n";
}

// eval

MetricReport eval_dataset(const EvalJob& job) {
    const Manifest m = load_manifest(job.root);
    const auto records = select(m, job.split);
    std::vector<FrameTruth> truth;
    std::set<std::string> chosen;
    for (const auto* r : records) {
        truth.push_back({r->frame_id, r->annotations});
        chosen.insert(r->frame_id);
    }
    std::set<std::string> all;
    for (const auto& r : m.records) all.insert(r.frame_id);

    std::vector<Detection> detections;
    try {
        detections = parse_detections(read_text(job.detections));
    } catch (const Error& e) {
        rethrow_with(e, job.detections.string());
    }
    // Detections on frames of the other split are ignored; unknown frames
    // still reach evaluate() and are reported there.
    std::erase_if(detections, [&](const Detection& d) { return !chosen.count(d.frame_id) && all.count(d.frame_id); });

    MetricReport report = evaluate(truth, detections, job.iou, job.confidence);
    report.model = job.model;

    if (job.time_command) {
        double total = 0;
        for (const auto* r : records) {
            std::string cmd = *job.time_command;
            const std::string path = "'" + (job.root / r->image_path).string() + "'";
            for (auto pos = cmd.find("{}"); pos != std::string::npos; pos = cmd.find("{}", pos + path.size()))
                cmd.replace(pos, 2, path);
            const auto t0 = std::chrono::steady_clock::now();
            const int rc = std::system(cmd.c_str());
            total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (rc != 0) throw InputError(fmt::format("timed command failed on {} (status {})", r->frame_id, rc));
        }
        report.time_per_image_s = total / double(records.size());
    }
    return report;
}

// pipeline

MetricReport run_pipeline(const PipelineConfig& config, const fs::path& out) {
    ensure_dir(out);
    // The snapshot omits where the run happened and how many workers it had,
    // so repeated runs produce identical trees.
    PipelineConfig snapshot = config;
    snapshot.output_root.clear();
    snapshot.jobs = 0;
    write_text(out / "config.json", config_to_json(snapshot));

    const Kinematics kin{config.deblur.speed, config.deblur.exposure};
    const int blur_length = estimate_blur_length(kin.speed_px_per_s, kin.exposure_s);

    fs::path source;
    if (config.input_root.empty()) {
        ScenesJob sj;
        sj.out = out / "source";
        sj.count = config.synth.count;
        sj.width = config.synth.width;
        sj.height = config.synth.height;
        sj.noise = config.synth.noise;
        sj.max_defects = config.synth.max_defects;
        sj.seed = derive_seed(config.seed, "synth");
        sj.blur_length = blur_length;
        synth_scenes(sj);
        source = sj.out;
    } else {
        source = config.input_root;
    }
    const Manifest src = load_manifest(source);

    // ingest
    const fs::path prepared = out / "prepared";
    ensure_dir(prepared / "images");
    IngestSettings settings;
    if (config.ingest.raw.width > 0) settings.raw = config.ingest.raw;
    settings.letterbox = config.ingest.letterbox;
    settings.stride = config.ingest.stride;
    settings.fill = config.ingest.fill;

    Manifest pm;
    pm.records.resize(src.records.size());
    std::vector<IngestedFrame> frames(src.records.size());
    parallel_for(src.records.size(), [&](std::size_t i) {
        const auto& s = src.records[i];
        auto [img, frame] = ingest_image(source / s.image_path, settings);
        frame.frame_id = s.frame_id;
        frame.source = s.image_path;
        auto& r = pm.records[i];
        r.frame_id = s.frame_id;
        r.image_path = "images/" + s.frame_id + ".pgm";
        r.width = img.width();
        r.height = img.height();
        for (const auto& a : s.annotations)
            if (auto b = frame.map_box(a.bbox)) r.annotations.push_back({*b, a.class_id});
        write_pgm(prepared / r.image_path, img);
        frames[i] = std::move(frame);
    });
    write_text(prepared / "ingest_index.tsv", index_tsv(frames));
    progress(fmt::format("ingest: {} frames", frames.size()));

    if (config.deblur.enabled) {
        DeblurJob dj;
        dj.in = dj.out = prepared / "images";
        dj.kinematics = kin;
        dj.options = config.deblur_options();
        dj.log = prepared / "deblur_log.tsv";
        deblur_directory(dj);
    }
    save_manifest(prepared, pm);
    write_labels(prepared, pm, LabelFormat::Labelme);

    const fs::path dataset = out / "dataset";
    ExpandOptions eo;
    eo.multiplier = config.augment.multiplier;
    eo.master_seed = derive_seed(config.seed, "augment");
    eo.include_original = config.augment.include_original;
    eo.augment.drop_truncated = config.augment.drop;
    augment_dataset(prepared, dataset, eo);

    const Manifest split_m = split_dataset(dataset, {config.split.train, config.split.val},
                                           derive_seed(config.seed, "split"), config.split.group);
    stats_dataset(dataset, dataset / "stats.json", dataset / "stats.svg");
    const AnchorSet anchors =
        cluster_anchors(split_m, config.anchors.k, config.anchors.iterations, derive_seed(config.seed, "anchors"));
    write_text(dataset / "anchors.json", anchors_to_json(anchors));
    progress(fmt::format("anchors: k={} mean IoU {:.4f}", anchors.anchors.size(), anchors.mean_iou));

    const fs::path eval_dir = out / "eval";
    ensure_dir(eval_dir);
    DetectorErrorModel model;
    model.miss_rate = config.eval.miss;
    model.false_positive_rate = config.eval.false_positive;
    model.jitter_sigma = config.eval.jitter;
    const auto detections = synth_detections(dataset, SplitFilter::Val, model, derive_seed(config.seed, "detector"));
    write_text(eval_dir / "detections.txt", write_detections(detections));

    EvalJob ej;
    ej.root = dataset;
    ej.detections = eval_dir / "detections.txt";
    ej.iou = config.eval.iou;
    ej.confidence = config.eval.confidence;
    ej.split = SplitFilter::Val;
    ej.model = "synthetic-detector";
    const MetricReport report = eval_dataset(ej);
    write_text(eval_dir / "report.json", report_to_json(report));
    write_text(eval_dir / "report.txt", render_report_table(report));
    progress(fmt::format("eval: mAP@0.5 {:.4f}", report.map_50));
    return report;
}

}  // namespace weldkit::cli
