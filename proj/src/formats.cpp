#include "weldkit/formats.hpp"

#include <cmath>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "weldkit/error.hpp"

namespace weldkit {

using nlohmann::json;

// --- Labelme ------------------------------------------------------------------

LabeledImage parse_labelme(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("labelme: malformed JSON at byte {}", e.byte));
    }
    LabeledImage out;
    try {
        out.image_path = doc.at("imagePath").get<std::string>();
        out.width = doc.at("imageWidth").get<std::size_t>();
        out.height = doc.at("imageHeight").get<std::size_t>();
        for (const auto& shape : doc.at("shapes")) {
            if (shape.value("shape_type", std::string("polygon")) != "rectangle") {
                ++out.skipped_shapes;
                continue;
            }
            const int cls = require_class_id(shape.at("label").get<std::string>());
            const auto& pts = shape.at("points");
            if (pts.size() != 2) throw FormatError("labelme: rectangle needs exactly two points");
            const double x0 = pts[0].at(0), y0 = pts[0].at(1), x1 = pts[1].at(0), y1 = pts[1].at(1);
            const BBox b{std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1)};
            if (!b.valid()) throw FormatError(fmt::format("labelme: degenerate rectangle for '{}'", class_label(cls)));
            out.annotations.push_back({b, cls});
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("labelme: ") + e.what());
    }
    return out;
}

std::string write_labelme(const LabeledImage& image) {
    nlohmann::ordered_json doc;
    doc["version"] = "5.0.1";
    doc["flags"] = json::object();
    doc["shapes"] = json::array();
    for (const auto& a : image.annotations) {
        nlohmann::ordered_json s;
        s["label"] = std::string(a.label());
        s["points"] = {{a.bbox.xmin, a.bbox.ymin}, {a.bbox.xmax, a.bbox.ymax}};
        s["group_id"] = nullptr;
        s["shape_type"] = "rectangle";
        s["flags"] = json::object();
        doc["shapes"].push_back(s);
    }
    doc["imagePath"] = image.image_path;
    doc["imageData"] = nullptr;
    doc["imageHeight"] = image.height;
    doc["imageWidth"] = image.width;
    return doc.dump(2) + "\n";
}

// --- YOLO -------------------------------------------------------------------

std::string write_yolo(std::span<const Annotation> annotations, std::size_t width, std::size_t height) {
    const double W = double(width), H = double(height);
    std::string out;
    for (const auto& a : annotations) {
        const BBox& b = a.bbox;
        if (b.xmin < -1e-9 || b.ymin < -1e-9 || b.xmax > W + 1e-9 || b.ymax > H + 1e-9)
            throw GeometryError(fmt::format("yolo: box ({}, {}, {}, {}) outside {}x{}", b.xmin, b.ymin, b.xmax, b.ymax,
                                            width, height));
        out += fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f}\n", a.class_id, b.cx() / W, b.cy() / H, b.width() / W,
                           b.height() / H);
    }
    return out;
}

std::vector<Annotation> parse_yolo(const std::string& text, std::size_t width, std::size_t height) {
    const double W = double(width), H = double(height);
    std::vector<Annotation> out;
    std::istringstream lines(text);
    std::string line;
    for (std::size_t n = 1; std::getline(lines, line); ++n) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::istringstream in(line);
        std::vector<std::string> tok;
        for (std::string t; in >> t;) tok.push_back(t);
        if (tok.size() != 5) throw FormatError(fmt::format("yolo line {}: expected 5 fields, found {}", n, tok.size()));
        double v[4];
        int cls = 0;
        try {
            std::size_t used = 0;
            cls = std::stoi(tok[0], &used);
            if (used != tok[0].size()) throw std::invalid_argument(tok[0]);
            for (int i = 0; i < 4; ++i) {
                v[i] = std::stod(tok[static_cast<std::size_t>(i) + 1], &used);
                if (used != tok[static_cast<std::size_t>(i) + 1].size()) throw std::invalid_argument(tok[i]);
            }
        } catch (const std::logic_error&) {
            throw FormatError(fmt::format("yolo line {}: not a number", n));
        }
        for (double x : v)
            if (!(x >= -1e-9 && x <= 1 + 1e-9)) throw FormatError(fmt::format("yolo line {}: value {} outside [0, 1]", n, x));
        try {
            class_label(cls);
        } catch (const ClassError& e) {
            throw FormatError(fmt::format("yolo line {}: {}", n, e.what()));
        }
        const BBox b{(v[0] - 0.5 * v[2]) * W, (v[1] - 0.5 * v[3]) * H, (v[0] + 0.5 * v[2]) * W, (v[1] + 0.5 * v[3]) * H};
        if (!b.valid()) throw FormatError(fmt::format("yolo line {}: zero-area box", n));
        out.push_back({b, cls});
    }
    return out;
}

// --- PASCAL VOC ---------------------------------------------------------------

std::string write_voc(const LabeledImage& image) {
    auto px = [](double v) { return static_cast<long long>(std::floor(v + 0.5)); };
    std::string out = "<annotation>\n";
    out += fmt::format("\t<filename>{}</filename>\n", image.image_path);
    out += fmt::format("\t<size>\n\t\t<width>{}</width>\n\t\t<height>{}</height>\n\t\t<depth>1</depth>\n\t</size>\n",
                       image.width, image.height);
    for (const auto& a : image.annotations) {
        out += "\t<object>\n";
        out += fmt::format("\t\t<name>{}</name>\n", a.label());
        out += "\t\t<pose>Unspecified</pose>\n\t\t<truncated>0</truncated>\n\t\t<difficult>0</difficult>\n";
        out += fmt::format(
            "\t\t<bndbox>\n\t\t\t<xmin>{}</xmin>\n\t\t\t<ymin>{}</ymin>\n\t\t\t<xmax>{}</xmax>\n\t\t\t<ymax>{}</ymax>\n"
            "\t\t</bndbox>\n",
            px(a.bbox.xmin) + 1, px(a.bbox.ymin) + 1, px(a.bbox.xmax), px(a.bbox.ymax));
        out += "\t</object>\n";
    }
    out += "</annotation>\n";
    return out;
}

LabeledImage parse_voc(const std::string& xml_text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(xml_text);
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(fmt::format("voc: malformed XML at line {}: {}", e.line(), e.message()));
    }
    auto child = [](const pt::ptree& node, const std::string& path) -> const pt::ptree& {
        auto c = node.get_child_optional(path);
        if (!c) throw ParseError("voc: missing element <" + path + ">");
        return *c;
    };
    auto number = [&](const pt::ptree& node, const std::string& path) {
        const std::string text = child(node, path).data();
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::logic_error&) {
            throw ParseError("voc: element <" + path + "> is not a number");
        }
    };
    const pt::ptree& root = child(tree, "annotation");
    LabeledImage out;
    out.image_path = child(root, "filename").data();
    out.width = static_cast<std::size_t>(number(root, "size.width"));
    out.height = static_cast<std::size_t>(number(root, "size.height"));
    for (const auto& [name, node] : root) {
        if (name != "object") continue;
        const int cls = require_class_id(child(node, "name").data());
        const pt::ptree& box = child(node, "bndbox");
        const BBox b{number(box, "xmin") - 1, number(box, "ymin") - 1, number(box, "xmax"), number(box, "ymax")};
        if (!b.valid()) throw FormatError(fmt::format("voc: degenerate box for '{}'", class_label(cls)));
        out.annotations.push_back({b, cls});
    }
    return out;
}

}  // namespace weldkit
