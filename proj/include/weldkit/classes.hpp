#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "weldkit/geometry.hpp"

namespace weldkit {

inline constexpr int kNumClasses = 8;

/// Canonical class table, ordered as the defect catalogue.
inline constexpr std::array<std::string_view, kNumClasses> kClassLabels = {
    "blow-hole", "undercut", "broken-arc", "crack",
    "overlap", "slag-inclusion", "lack-of-fusion", "hollow-bead",
};

/// Original-sample count per class in the reference defect catalogue; used
/// as the class frequency of synthetic scenes.
inline constexpr std::array<std::size_t, kNumClasses> kCatalogueCounts = {1339, 35, 531, 119, 219, 136, 416, 613};

std::optional<int> class_id_of(std::string_view label);
/// Throws ClassError("unknown label: <label>").
int require_class_id(std::string_view label);
/// Throws ClassError for ids outside [0, 7].
std::string_view class_label(int class_id);

struct Annotation {
    BBox bbox;
    int class_id = 0;

    std::string_view label() const { return class_label(class_id); }
    bool operator==(const Annotation&) const = default;
};

}  // namespace weldkit
