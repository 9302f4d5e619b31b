#include "weldkit/config.hpp"

#include <algorithm>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "weldkit/error.hpp"

namespace weldkit {

using nlohmann::json;
using nlohmann::ordered_json;

bool operator==(const RawSpec& a, const RawSpec& b) {
    return a.width == b.width && a.height == b.height && a.bit_depth == b.bit_depth && a.endian == b.endian &&
           a.window_lo == b.window_lo && a.window_hi == b.window_hi;
}

DeblurOptions PipelineConfig::deblur_options() const {
    DeblurOptions o;
    o.hough = {deblur.edge_threshold, deblur.vote_threshold, deblur.theta_step, deblur.rho_step};
    o.top_k = deblur.top_k;
    o.nsr = deblur.nsr;
    return o;
}

namespace {

// Binds each key of one JSON object to a field, both directions.
class Section {
public:
    Section(const json* in, ordered_json* out, std::string path) : in_(in), out_(out), path_(std::move(path)) {}

    template <class T>
    Section& field(const char* key, T& value) {
        keys_.push_back(key);
        if (out_) (*out_)[key] = value;
        if (in_ && in_->contains(key)) {
            try {
                value = in_->at(key).get<T>();
            } catch (const json::exception&) {
                throw ParameterError(fmt::format("config: {}{} has the wrong type", path_, key));
            }
        }
        return *this;
    }

    void finish() const {
        if (!in_) return;
        if (!in_->is_object()) throw ParameterError(fmt::format("config: {} must be an object", path_.empty() ? "root" : path_));
        for (const auto& [k, v] : in_->items())
            if (std::find(keys_.begin(), keys_.end(), k) == keys_.end())
                throw ParameterError(fmt::format("config: unknown key '{}{}'", path_, k));
    }

private:
    const json* in_;
    ordered_json* out_;
    std::string path_;
    std::vector<std::string> keys_;
};

void visit(PipelineConfig& c, const json* in, ordered_json* out) {
    auto sub = [&](const char* name) -> std::pair<const json*, ordered_json*> {
        const json* i = (in && in->contains(name)) ? &in->at(name) : nullptr;
        ordered_json* o = out ? &((*out)[name] = ordered_json::object()) : nullptr;
        return {i, o};
    };
    std::vector<std::string> sections = {"synth", "ingest", "deblur", "augment", "split", "anchors", "eval"};
    Section root(in, out, "");
    root.field("seed", c.seed).field("jobs", c.jobs).field("input_root", c.input_root).field("output_root", c.output_root);
    if (in) {
        for (const auto& [k, v] : in->items())
            if (std::find(sections.begin(), sections.end(), k) == sections.end() && k != "seed" && k != "jobs" &&
                k != "input_root" && k != "output_root")
                throw ParameterError(fmt::format("config: unknown key '{}'", k));
    }
    {
        auto [i, o] = sub("synth");
        Section s(i, o, "synth.");
        s.field("count", c.synth.count).field("width", c.synth.width).field("height", c.synth.height);
        s.field("noise", c.synth.noise).field("max_defects", c.synth.max_defects).finish();
    }
    {
        auto [i, o] = sub("ingest");
        Section s(i, o, "ingest.");
        std::string endian = c.ingest.raw.endian == Endian::Little ? "le" : "be";
        s.field("raw_width", c.ingest.raw.width).field("raw_height", c.ingest.raw.height);
        s.field("raw_depth", c.ingest.raw.bit_depth).field("raw_endian", endian);
        s.field("window_lo", c.ingest.raw.window_lo).field("window_hi", c.ingest.raw.window_hi);
        s.field("letterbox", c.ingest.letterbox).field("stride", c.ingest.stride).field("fill", c.ingest.fill);
        s.finish();
        if (endian != "le" && endian != "be") throw ParameterError("config: ingest.raw_endian must be le or be");
        c.ingest.raw.endian = endian == "le" ? Endian::Little : Endian::Big;
    }
    {
        auto [i, o] = sub("deblur");
        Section s(i, o, "deblur.");
        s.field("enabled", c.deblur.enabled).field("speed", c.deblur.speed).field("exposure", c.deblur.exposure);
        s.field("nsr", c.deblur.nsr).field("edge_threshold", c.deblur.edge_threshold);
        s.field("vote_threshold", c.deblur.vote_threshold).field("theta_step", c.deblur.theta_step);
        s.field("rho_step", c.deblur.rho_step).field("top_k", c.deblur.top_k).finish();
    }
    {
        auto [i, o] = sub("augment");
        Section s(i, o, "augment.");
        s.field("multiplier", c.augment.multiplier).field("include_original", c.augment.include_original);
        s.field("drop", c.augment.drop).finish();
    }
    {
        auto [i, o] = sub("split");
        Section s(i, o, "split.");
        s.field("train", c.split.train).field("val", c.split.val).field("group", c.split.group).finish();
    }
    {
        auto [i, o] = sub("anchors");
        Section s(i, o, "anchors.");
        s.field("k", c.anchors.k).field("iterations", c.anchors.iterations).finish();
    }
    {
        auto [i, o] = sub("eval");
        Section s(i, o, "eval.");
        s.field("iou", c.eval.iou).field("confidence", c.eval.confidence).field("miss", c.eval.miss);
        s.field("false_positive", c.eval.false_positive).field("jitter", c.eval.jitter).finish();
    }
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) {
    PipelineConfig copy = config;
    ordered_json out = ordered_json::object();
    visit(copy, nullptr, &out);
    return out.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
    json in;
    try {
        in = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(fmt::format("config: malformed JSON at byte {}", e.byte));
    }
    if (!in.is_object()) throw ParameterError("config: root must be an object");
    PipelineConfig c;
    visit(c, &in, nullptr);
    return c;
}

}  // namespace weldkit
