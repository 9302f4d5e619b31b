#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weldkit/classes.hpp"
#include "weldkit/eval.hpp"

namespace weldkit {

enum class Split { Unassigned, Train, Val };

std::string_view split_name(Split s);

struct ManifestRecord {
    std::string frame_id;
    std::string image_path;  // relative to the dataset root
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Annotation> annotations;
    Split split = Split::Unassigned;
    std::optional<std::string> parent_id;  // set for augmented records

    bool augmented() const { return parent_id.has_value(); }
    /// Key shared by an original and all of its variants.
    const std::string& group_key() const { return parent_id ? *parent_id : frame_id; }
};

struct Manifest {
    std::vector<ManifestRecord> records;

    /// Unique frame ids and every box inside its image; throws InputError.
    void validate() const;
    std::vector<FrameTruth> truth() const;
};

/// JSON-lines, one record per line.
std::string manifest_to_jsonl(const Manifest& manifest);
Manifest manifest_from_jsonl(const std::string& text);

}  // namespace weldkit
