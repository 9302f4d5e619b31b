#include "weldkit/manifest.hpp"

#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "weldkit/error.hpp"

namespace weldkit {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        default: return "unassigned";
    }
}

namespace {

Split split_from_name(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "unassigned") return Split::Unassigned;
    throw FormatError("manifest: unknown split '" + s + "'");
}

}  // namespace

void Manifest::validate() const {
    std::set<std::string> seen;
    for (const auto& r : records) {
        if (!seen.insert(r.frame_id).second) throw InputError("manifest: duplicate frame id " + r.frame_id);
        for (const auto& a : r.annotations) {
            const BBox& b = a.bbox;
            if (!b.valid() || b.xmin < -1e-9 || b.ymin < -1e-9 || b.xmax > double(r.width) + 1e-9 ||
                b.ymax > double(r.height) + 1e-9)
                throw InputError(fmt::format("manifest: box outside image in frame {}", r.frame_id));
        }
    }
}

std::vector<FrameTruth> Manifest::truth() const {
    std::vector<FrameTruth> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r.frame_id, r.annotations});
    return out;
}

std::string manifest_to_jsonl(const Manifest& manifest) {
    std::string out;
    for (const auto& r : manifest.records) {
        ordered_json j;
        j["frame_id"] = r.frame_id;
        j["image_path"] = r.image_path;
        j["width"] = r.width;
        j["height"] = r.height;
        j["annotations"] = ordered_json::array();
        for (const auto& a : r.annotations) {
            ordered_json aj;
            aj["class_id"] = a.class_id;
            aj["label"] = std::string(a.label());
            aj["bbox"] = {a.bbox.xmin, a.bbox.ymin, a.bbox.xmax, a.bbox.ymax};
            j["annotations"].push_back(aj);
        }
        j["split"] = std::string(split_name(r.split));
        j["provenance"] = r.parent_id ? "augmented" : "original";
        if (r.parent_id) j["parent_id"] = *r.parent_id;
        out += j.dump() + "\n";
    }
    return out;
}

Manifest manifest_from_jsonl(const std::string& text) {
    Manifest m;
    std::istringstream lines(text);
    std::string line;
    for (std::size_t n = 1; std::getline(lines, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            ManifestRecord r;
            r.frame_id = j.at("frame_id").get<std::string>();
            r.image_path = j.at("image_path").get<std::string>();
            r.width = j.at("width").get<std::size_t>();
            r.height = j.at("height").get<std::size_t>();
            for (const auto& a : j.at("annotations")) {
                const auto& b = a.at("bbox");
                const int cls = a.at("class_id").get<int>();
                class_label(cls);
                if (a.contains("label") && a["label"].get<std::string>() != class_label(cls))
                    throw FormatError(fmt::format("class id {} does not match label {}", cls, a["label"].dump()));
                r.annotations.push_back({{b.at(0), b.at(1), b.at(2), b.at(3)}, cls});
            }
            r.split = split_from_name(j.value("split", std::string("unassigned")));
            if (j.value("provenance", std::string("original")) == "augmented")
                r.parent_id = j.at("parent_id").get<std::string>();
            m.records.push_back(std::move(r));
        } catch (const json::parse_error& e) {
            throw ParseError(fmt::format("manifest line {}: malformed JSON at byte {}", n, e.byte));
        } catch (const json::exception& e) {
            throw FormatError(fmt::format("manifest line {}: {}", n, e.what()));
        } catch (const InputError& e) {
            throw FormatError(fmt::format("manifest line {}: {}", n, e.what()));
        }
    }
    return m;
}

}  // namespace weldkit
