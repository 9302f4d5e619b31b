#pragma once

#include <span>
#include <string>
#include <vector>

#include "weldkit/classes.hpp"

namespace weldkit {

/// One annotated image as described by a label file.
struct LabeledImage {
    std::string image_path;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Annotation> annotations;
    std::size_t skipped_shapes = 0;  // Labelme shapes that are not rectangles
};

// Labelme JSON: rectangles only; points are normalized to min/max corners.
LabeledImage parse_labelme(const std::string& json_text);
std::string write_labelme(const LabeledImage& image);

// YOLO txt: `class cx cy w h` normalized to [0, 1], 6 decimals, LF endings.
std::string write_yolo(std::span<const Annotation> annotations, std::size_t width, std::size_t height);
std::vector<Annotation> parse_yolo(const std::string& text, std::size_t width, std::size_t height);

// PASCAL VOC XML: integer 1-based inclusive corners, depth 1.
std::string write_voc(const LabeledImage& image);
LabeledImage parse_voc(const std::string& xml_text);

}  // namespace weldkit
