#include "app.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stages.hpp"
#include "weldkit/error.hpp"
#include "weldkit/formats.hpp"
#include "weldkit/image_io.hpp"
#include "weldkit/parallel.hpp"

namespace weldkit::cli {

namespace {

// `--config` is read before the real parse so its values become the
// defaults of the bound options and explicit flags win.
std::optional<std::string> scan_config(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return std::nullopt;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(text);
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw ParameterError("window must look like LO:HI: " + text);
    }
}

BBox parse_crop(const std::string& text) {
    double v[4];
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%c", &v[0], &v[1], &v[2], &v[3], &tail) != 4)
        throw ParameterError("crop must look like X,Y,W,H: " + text);
    return {v[0], v[1], v[0] + v[2], v[1] + v[3]};
}

std::string window_text(const RawSpec& r) { return fmt::format("{}:{}", r.window_lo, r.window_hi); }

int exit_code(const Error& e) { return e.kind() == Error::Kind::Input ? 1 : 2; }

}  // namespace

int run(int argc, const char* const* argv) {
    PipelineConfig cfg;
    const auto config_path = scan_config(argc, argv);
    try {
        if (config_path) cfg = config_from_json(read_text(*config_path));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    }

    CLI::App app{"Data pipeline for X-ray weld-seam defect inspection.", "weldkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.option_defaults()->always_capture_default();

    std::string config_arg;
    app.add_option("--config", config_arg, "JSON pipeline config; explicit flags override it");
    app.add_option("--seed", cfg.seed, "Master seed");
    app.add_option("--jobs", cfg.jobs, "Worker count (0 = all cores)")->check(CLI::NonNegativeNumber);

    auto subcommand = [&](const char* name, const char* about) {
        CLI::App* s = app.add_subcommand(name, about);
        s->fallthrough();
        return s;
    };

    // ingest
    IngestJob ingest;
    bool ingest_png = false;
    std::string window = window_text(cfg.ingest.raw), crop_text, endian = cfg.ingest.raw.endian == Endian::Little ? "le" : "be";
    auto* ingest_cmd = subcommand("ingest", "Decode RAW/PNG/JPG frames to grayscale PGM");
    ingest_cmd->add_option("--in", ingest.in, "Input directory")->required();
    ingest_cmd->add_option("--out", ingest.out, "Output directory")->required();
    ingest_cmd->add_option("--raw-width", cfg.ingest.raw.width, "RAW frame width");
    ingest_cmd->add_option("--raw-height", cfg.ingest.raw.height, "RAW frame height");
    ingest_cmd->add_option("--raw-depth", cfg.ingest.raw.bit_depth, "RAW bits per sample")->check(CLI::IsMember({8, 16}));
    ingest_cmd->add_option("--raw-endian", endian, "RAW byte order")->check(CLI::IsMember({"le", "be"}));
    ingest_cmd->add_option("--window", window, "16-bit intensity window LO:HI");
    ingest_cmd->add_option("--crop", crop_text, "Crop rectangle X,Y,W,H");
    ingest_cmd->add_option("--letterbox", cfg.ingest.letterbox, "Letterbox long side (0 = off)");
    ingest_cmd->add_option("--stride", cfg.ingest.stride, "Letterbox stride");
    ingest_cmd->add_option("--fill", cfg.ingest.fill, "Letterbox padding value");
    ingest_cmd->add_flag("--png", ingest_png, "Write PNG instead of PGM");

    // deblur
    DeblurJob deblur;
    auto* deblur_cmd = subcommand("deblur", "Estimate and remove linear motion blur");
    deblur_cmd->add_option("--in", deblur.in, "Input directory")->required();
    deblur_cmd->add_option("--out", deblur.out, "Output directory")->required();
    deblur_cmd->add_option("--speed", cfg.deblur.speed, "Surface speed in px/s");
    deblur_cmd->add_option("--exposure", cfg.deblur.exposure, "Exposure time in s");
    deblur_cmd->add_option("--nsr", cfg.deblur.nsr, "Wiener noise-to-signal ratio");
    deblur_cmd->add_option("--theta-step", cfg.deblur.theta_step, "Hough angle step in degrees");
    deblur_cmd->add_option("--rho-step", cfg.deblur.rho_step, "Hough distance step in px");
    deblur_cmd->add_option("--vote-thresh", cfg.deblur.vote_threshold, "Minimum Hough votes");
    deblur_cmd->add_option("--edge-thresh", cfg.deblur.edge_threshold, "Sobel magnitude threshold");
    deblur_cmd->add_option("--top-k", cfg.deblur.top_k, "Lines averaged for the angle");

    // augment
    fs::path aug_in, aug_out;
    bool no_drop = false;
    auto* augment_cmd = subcommand("augment", "Expand a dataset with box-aware augmentations");
    augment_cmd->add_option("--in", aug_in, "Input dataset root")->required();
    augment_cmd->add_option("--out", aug_out, "Output dataset root")->required();
    augment_cmd->add_option("--multiplier", cfg.augment.multiplier, "Variants per original")->check(CLI::PositiveNumber);
    augment_cmd->add_flag("--include-original", cfg.augment.include_original, "Variant 1 is the unmodified original");
    augment_cmd->add_flag("--no-drop", no_drop, "Keep heavily truncated boxes");

    // convert
    fs::path data;
    std::string from;
    std::vector<std::string> to;
    auto* convert_cmd = subcommand("convert", "Convert label formats and rebuild the manifest");
    convert_cmd->add_option("--data", data, "Dataset root")->required();
    convert_cmd->add_option("--from", from, "Source format")->required()->check(CLI::IsMember({"labelme", "yolo", "voc"}));
    convert_cmd->add_option("--to", to, "Target format (repeatable)")->required()->check(CLI::IsMember({"yolo", "voc"}));

    // split
    std::string ratio = fmt::format("{}:{}", cfg.split.train, cfg.split.val);
    bool no_group = false;
    auto* split_cmd = subcommand("split", "Assign train/val splits");
    split_cmd->add_option("--data", data, "Dataset root")->required();
    split_cmd->add_option("--ratio", ratio, "TRAIN:VAL");
    split_cmd->add_flag("--no-group", no_group, "Split variants independently of their original");

    // stats
    fs::path stats_out, svg_out;
    auto* stats_cmd = subcommand("stats", "Class counts and box geometry statistics");
    stats_cmd->add_option("--data", data, "Dataset root")->required();
    stats_cmd->add_option("--out", stats_out, "Statistics JSON")->required();
    stats_cmd->add_option("--svg", svg_out, "Scatter plot SVG");

    // anchors
    fs::path anchors_out;
    auto* anchors_cmd = subcommand("anchors", "Cluster box sizes into anchors");
    anchors_cmd->add_option("--data", data, "Dataset root")->required();
    anchors_cmd->add_option("--k", cfg.anchors.k, "Anchor count");
    anchors_cmd->add_option("--iters", cfg.anchors.iterations, "k-means iterations");
    anchors_cmd->add_option("--out", anchors_out, "Anchors JSON");

    // eval
    EvalJob eval;
    std::string eval_split = "all";
    fs::path report_out;
    std::string time_cmd;
    auto* eval_cmd = subcommand("eval", "Score detections against the manifest ground truth");
    eval_cmd->add_option("--data", eval.root, "Dataset root")->required();
    eval_cmd->add_option("--detections", eval.detections, "Detections file")->required();
    eval_cmd->add_option("--iou", cfg.eval.iou, "IoU match threshold");
    eval_cmd->add_option("--conf", cfg.eval.confidence, "Confidence threshold for P/R/F1");
    eval_cmd->add_option("--split", eval_split, "Frames to score")->check(CLI::IsMember({"all", "train", "val"}));
    eval_cmd->add_option("--model", eval.model, "Model name in the report");
    eval_cmd->add_option("--out", report_out, "Report JSON");
    eval_cmd->add_option("--time-cmd", time_cmd, "Command timed once per image; {} is the image path");

    // compare
    std::vector<fs::path> reports;
    fs::path compare_out;
    auto* compare_cmd = subcommand("compare", "Side-by-side table of two or more reports");
    compare_cmd->add_option("reports", reports, "Report JSON files")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--out", compare_out, "Write the table here as well");

    // synth
    auto* synth_cmd = subcommand("synth", "Synthetic weld scenes, blur and detections");
    synth_cmd->require_subcommand(1);
    ScenesJob scenes;
    double seam_angle = 0;
    auto* scenes_cmd = synth_cmd->add_subcommand("scenes", "Render labeled weld scenes");
    scenes_cmd->fallthrough();
    scenes_cmd->add_option("--count", scenes.count, "Scene count");
    scenes_cmd->add_option("--out", scenes.out, "Output dataset root")->required();
    scenes_cmd->add_option("--width", scenes.width, "Image width");
    scenes_cmd->add_option("--height", scenes.height, "Image height");
    scenes_cmd->add_option("--noise", scenes.noise, "Gaussian noise sigma");
    scenes_cmd->add_option("--max-defects", scenes.max_defects, "Defects per scene, at most");
    auto* seam_opt = scenes_cmd->add_option("--seam-angle", seam_angle, "Seam angle in degrees (random if unset)");
    scenes_cmd->add_option("--blur-length", scenes.blur_length, "Motion blur length along the seam");

    fs::path blur_in, blur_out;
    double blur_angle = 0, blur_noise = 0;
    int blur_length = 1;
    auto* blur_cmd = synth_cmd->add_subcommand("blur", "Apply linear motion blur");
    blur_cmd->fallthrough();
    blur_cmd->add_option("--in", blur_in, "Input directory")->required();
    blur_cmd->add_option("--out", blur_out, "Output directory")->required();
    blur_cmd->add_option("--angle", blur_angle, "Blur direction in degrees")->required();
    blur_cmd->add_option("--length", blur_length, "Blur length in px")->required();
    blur_cmd->add_option("--noise", blur_noise, "Gaussian noise sigma");

    fs::path det_out;
    std::string det_split = "all";
    auto* det_cmd = synth_cmd->add_subcommand("detections", "Perturb ground truth into detections");
    det_cmd->fallthrough();
    det_cmd->add_option("--data", data, "Dataset root")->required();
    det_cmd->add_option("--out", det_out, "Detections file")->required();
    det_cmd->add_option("--miss", cfg.eval.miss, "Miss rate");
    det_cmd->add_option("--fp", cfg.eval.false_positive, "False boxes per true box");
    det_cmd->add_option("--jitter", cfg.eval.jitter, "Corner jitter sigma in px");
    det_cmd->add_option("--split", det_split, "Frames to use")->check(CLI::IsMember({"all", "train", "val"}));

    // pipeline
    std::string pipeline_out = cfg.output_root;
    auto* pipeline_cmd = subcommand("pipeline", "Run every stage from a config");
    pipeline_cmd->add_option("--out", pipeline_out, "Output root (config output_root otherwise)");
    pipeline_cmd->add_option("--input", cfg.input_root, "Input dataset root (synthesized when empty)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        set_jobs(cfg.jobs);
        if (ingest_cmd->parsed()) {
            cfg.ingest.raw.endian = endian == "le" ? Endian::Little : Endian::Big;
            std::tie(cfg.ingest.raw.window_lo, cfg.ingest.raw.window_hi) = parse_window(window);
            if (cfg.ingest.raw.width > 0 || cfg.ingest.raw.height > 0) ingest.settings.raw = cfg.ingest.raw;
            if (!crop_text.empty()) ingest.settings.crop = parse_crop(crop_text);
            ingest.settings.letterbox = cfg.ingest.letterbox;
            ingest.settings.stride = cfg.ingest.stride;
            ingest.settings.fill = cfg.ingest.fill;
            ingest.png = ingest_png;
            ingest_directory(ingest);
        } else if (deblur_cmd->parsed()) {
            deblur.kinematics = {cfg.deblur.speed, cfg.deblur.exposure};
            deblur.options = cfg.deblur_options();
            deblur_directory(deblur);
        } else if (augment_cmd->parsed()) {
            ExpandOptions eo;
            eo.multiplier = cfg.augment.multiplier;
            eo.master_seed = cfg.seed;
            eo.include_original = cfg.augment.include_original;
            eo.augment.drop_truncated = cfg.augment.drop && !no_drop;
            augment_dataset(aug_in, aug_out, eo);
        } else if (convert_cmd->parsed()) {
            std::vector<LabelFormat> targets;
            for (const auto& t : to) targets.push_back(parse_label_format(t));
            convert_dataset(data, parse_label_format(from), targets);
        } else if (split_cmd->parsed()) {
            split_dataset(data, parse_ratio(ratio), cfg.seed, cfg.split.group && !no_group);
        } else if (stats_cmd->parsed()) {
            std::optional<fs::path> svg;
            if (!svg_out.empty()) svg = svg_out;
            const DatasetStats s = stats_dataset(data, stats_out, svg);
            std::cout << fmt::format("boxes {}  wider {:.3f}  aspect min {:.3f} max {:.3f} mean {:.3f} median {:.3f}\n",
                                     s.total_boxes, s.wider_fraction, s.aspect_min, s.aspect_max, s.aspect_mean,
                                     s.aspect_median);
        } else if (anchors_cmd->parsed()) {
            const AnchorSet a = cluster_anchors(load_manifest(data), cfg.anchors.k, cfg.anchors.iterations, cfg.seed);
            for (const auto& b : a.anchors) std::cout << fmt::format("{:.2f} {:.2f}\n", b.w, b.h);
            std::cout << fmt::format("mean IoU {:.4f}\n", a.mean_iou);
            if (!anchors_out.empty()) write_text(anchors_out, anchors_to_json(a));
        } else if (eval_cmd->parsed()) {
            eval.iou = cfg.eval.iou;
            eval.confidence = cfg.eval.confidence;
            eval.split = parse_split_filter(eval_split);
            if (!time_cmd.empty()) eval.time_command = time_cmd;
            const MetricReport r = eval_dataset(eval);
            std::cout << render_report_table(r);
            if (!report_out.empty()) write_text(report_out, report_to_json(r));
        } else if (compare_cmd->parsed()) {
            std::vector<MetricReport> loaded;
            for (const auto& p : reports) loaded.push_back(report_from_json(read_text(p)));
            const std::string table = render_comparison(loaded);
            std::cout << table;
            if (!compare_out.empty()) write_text(compare_out, table);
        } else if (scenes_cmd->parsed()) {
            scenes.seed = cfg.seed;
            if (seam_opt->count()) scenes.seam_angle = seam_angle;
            synth_scenes(scenes);
        } else if (blur_cmd->parsed()) {
            synth_blur(blur_in, blur_out, blur_angle, blur_length, blur_noise, cfg.seed);
        } else if (det_cmd->parsed()) {
            DetectorErrorModel model;
            model.miss_rate = cfg.eval.miss;
            model.false_positive_rate = cfg.eval.false_positive;
            model.jitter_sigma = cfg.eval.jitter;
            const auto d = synth_detections(data, parse_split_filter(det_split), model, cfg.seed);
            write_text(det_out, write_detections(d));
            progress(fmt::format("synth detections: {}", d.size()));
        } else if (pipeline_cmd->parsed()) {
            if (pipeline_out.empty()) throw ParameterError("pipeline needs --out or output_root in the config");
            cfg.output_root = pipeline_out;
            const MetricReport r = run_pipeline(cfg, pipeline_out);
            std::cout << render_report_table(r);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace weldkit::cli
