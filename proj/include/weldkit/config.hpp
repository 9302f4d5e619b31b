#pragma once

#include <cstdint>
#include <string>

#include "weldkit/deblur.hpp"
#include "weldkit/ingest.hpp"

namespace weldkit {

bool operator==(const RawSpec& a, const RawSpec& b);

/// Every stage parameter of an end-to-end run. Stored as a JSON document;
/// unknown keys are rejected so typos cannot silently fall back to defaults.
struct PipelineConfig {
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string input_root;   // dataset directory; empty means synthesize one
    std::string output_root;

    struct Synth {
        std::size_t count = 24;
        std::size_t width = 256;
        std::size_t height = 256;
        double noise = 2;
        int max_defects = 3;

        bool operator==(const Synth&) const = default;
    } synth;

    struct Ingest {
        RawSpec raw;
        std::size_t letterbox = 0;  // 0 disables letterboxing
        std::size_t stride = 32;
        int fill = kLetterboxFill;

        bool operator==(const Ingest&) const = default;
    } ingest;

    struct Deblur {
        bool enabled = true;
        double speed = 120;      // px/s along the seam
        double exposure = 0.125; // s; one frame at 8 frames/s
        double nsr = kDefaultNsr;
        double edge_threshold = 150;
        std::uint32_t vote_threshold = 80;
        double theta_step = 1;
        double rho_step = 1;
        std::size_t top_k = kDefaultTopLines;

        bool operator==(const Deblur&) const = default;
    } deblur;

    struct Augment {
        int multiplier = 9;
        bool include_original = false;
        bool drop = true;

        bool operator==(const Augment&) const = default;
    } augment;

    struct Split {
        unsigned train = 8;
        unsigned val = 2;
        bool group = true;

        bool operator==(const Split&) const = default;
    } split;

    struct Anchors {
        std::size_t k = 9;
        int iterations = 50;

        bool operator==(const Anchors&) const = default;
    } anchors;

    struct Eval {
        double iou = 0.5;
        double confidence = 0.25;
        double miss = 0.1;
        double false_positive = 0.1;
        double jitter = 1.5;

        bool operator==(const Eval&) const = default;
    } eval;

    DeblurOptions deblur_options() const;

    bool operator==(const PipelineConfig&) const = default;
};

std::string config_to_json(const PipelineConfig& config);
/// Missing keys keep their defaults; unknown keys throw ParameterError.
PipelineConfig config_from_json(const std::string& text);

}  // namespace weldkit
