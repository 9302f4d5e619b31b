#include "weldkit/dataset.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "weldkit/error.hpp"
#include "weldkit/rng.hpp"

namespace weldkit {

std::size_t val_group_count(std::size_t groups, const SplitRatio& ratio) {
    if (ratio.train == 0 || ratio.val == 0) throw ParameterError("split ratio parts must be positive");
    const std::size_t total = ratio.train + ratio.val;
    return (2 * ratio.val * groups + total) / (2 * total);
}

void split(Manifest& manifest, const SplitRatio& ratio, std::uint64_t seed, bool group_by_parent) {
    if (manifest.records.empty()) throw InputError("split: manifest is empty");
    std::vector<std::string> keys;
    for (const auto& r : manifest.records) keys.push_back(group_by_parent ? r.group_key() : r.frame_id);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    std::vector<std::pair<std::uint64_t, std::string>> order;
    for (auto& k : keys) order.emplace_back(derive_seed(seed, k), std::move(k));
    std::sort(order.begin(), order.end());

    const std::size_t n_val = val_group_count(order.size(), ratio);
    std::map<std::string, Split> assignment;
    for (std::size_t i = 0; i < order.size(); ++i) assignment[order[i].second] = i < n_val ? Split::Val : Split::Train;
    for (auto& r : manifest.records) r.split = assignment.at(group_by_parent ? r.group_key() : r.frame_id);
}

DatasetStats dataset_stats(const Manifest& manifest) {
    DatasetStats s;
    std::vector<double> aspects;
    std::size_t wider = 0;
    for (const auto& r : manifest.records) {
        for (const auto& a : r.annotations) {
            ++s.class_counts[static_cast<std::size_t>(a.class_id)];
            ++s.total_boxes;
            s.centers.push_back({a.bbox.cx() / double(r.width), a.bbox.cy() / double(r.height), a.class_id});
            s.sizes.push_back({a.bbox.width(), a.bbox.height(), a.class_id});
            aspects.push_back(a.bbox.width() / a.bbox.height());
            wider += a.bbox.width() > a.bbox.height();
        }
    }
    if (aspects.empty()) return s;
    s.wider_fraction = double(wider) / double(aspects.size());
    std::sort(aspects.begin(), aspects.end());
    s.aspect_min = aspects.front();
    s.aspect_max = aspects.back();
    s.aspect_mean = std::accumulate(aspects.begin(), aspects.end(), 0.0) / double(aspects.size());
    const std::size_t n = aspects.size();
    s.aspect_median = n % 2 ? aspects[n / 2] : 0.5 * (aspects[n / 2 - 1] + aspects[n / 2]);
    return s;
}

std::string stats_to_json(const DatasetStats& s) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json counts;
    for (int c = 0; c < kNumClasses; ++c) counts[std::string(class_label(c))] = s.class_counts[static_cast<std::size_t>(c)];
    j["class_counts"] = counts;
    j["total_boxes"] = s.total_boxes;
    j["wider_than_tall_fraction"] = s.wider_fraction;
    j["aspect_ratio"] = {{"min", s.aspect_min}, {"max", s.aspect_max}, {"mean", s.aspect_mean}, {"median", s.aspect_median}};
    auto points = [](const std::vector<ScatterPoint>& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& p : v) a.push_back({p.x, p.y, p.class_id});
        return a;
    };
    j["centers"] = points(s.centers);
    j["sizes"] = points(s.sizes);
    return j.dump(2) + "\n";
}

std::string stats_to_svg(const DatasetStats& s) {
    constexpr std::array<const char*, kNumClasses> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    constexpr double panel = 300, margin = 30;
    double max_w = 1, max_h = 1;
    for (const auto& p : s.sizes) {
        max_w = std::max(max_w, p.x);
        max_h = std::max(max_h, p.y);
    }
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", 2 * panel + 3 * margin,
        panel + 2 * margin);
    for (int i = 0; i < 2; ++i) {
        const double ox = margin + i * (panel + margin);
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", ox,
                           margin, panel, panel);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n", ox, margin - 8,
                           i == 0 ? "box centers (x, y)" : "box sizes (w, h) px");
    }
    for (const auto& p : s.centers)
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"1.5\" fill=\"{}\"/>\n", margin + p.x * panel,
                           margin + p.y * panel, colors[static_cast<std::size_t>(p.class_id)]);
    for (const auto& p : s.sizes)
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"1.5\" fill=\"{}\"/>\n",
                           2 * margin + panel + p.x / max_w * panel, margin + panel - p.y / max_h * panel,
                           colors[static_cast<std::size_t>(p.class_id)]);
    out += "</svg>\n";
    return out;
}

}  // namespace weldkit
