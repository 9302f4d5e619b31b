#include "weldkit/anchors.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "weldkit/error.hpp"
#include "weldkit/rng.hpp"

namespace weldkit {

double iou_wh(const BoxSize& a, const BoxSize& b) {
    const double inter = std::min(a.w, b.w) * std::min(a.h, b.h);
    return inter / (a.w * a.h + b.w * b.h - inter);
}

namespace {

std::size_t best_anchor(const BoxSize& box, std::span<const BoxSize> anchors, double* best_iou = nullptr) {
    std::size_t best = 0;
    double best_v = -1;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const double v = iou_wh(box, anchors[i]);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    if (best_iou) *best_iou = best_v;
    return best;
}

double iou_sum(std::span<const BoxSize> members, const BoxSize& anchor) {
    double s = 0;
    for (const auto& m : members) s += iou_wh(m, anchor);
    return s;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::vector<BoxSize>> assign(std::span<const BoxSize> boxes, std::span<const BoxSize> anchors) {
    std::vector<std::vector<BoxSize>> clusters(anchors.size());
    for (const auto& b : boxes) clusters[best_anchor(b, anchors)].push_back(b);
    return clusters;
}

std::vector<BoxSize> plus_plus_init(std::span<const BoxSize> boxes, std::size_t k, Rng& rng) {
    std::vector<BoxSize> anchors{boxes[rng() % boxes.size()]};
    std::vector<double> weight(boxes.size());
    while (anchors.size() < k) {
        double total = 0;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            double best = 0;
            best_anchor(boxes[i], anchors, &best);
            weight[i] = (1 - best) * (1 - best);
            total += weight[i];
        }
        double pick = uniform(rng, 0, total);
        std::size_t chosen = boxes.size();
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            if (weight[i] <= 0) continue;
            chosen = i;
            if (pick < weight[i]) break;
            pick -= weight[i];
        }
        anchors.push_back(boxes[chosen]);
    }
    return anchors;
}

// Best of a <= 65x65 grid over the members' extent, then compass search
// down to 1e-3 px. Only strict improvements replace the anchor.
BoxSize refine(std::span<const BoxSize> members, BoxSize anchor) {
    double wlo = members[0].w, whi = wlo, hlo = members[0].h, hhi = hlo;
    for (const auto& m : members) {
        wlo = std::min(wlo, m.w);
        whi = std::max(whi, m.w);
        hlo = std::min(hlo, m.h);
        hhi = std::max(hhi, m.h);
    }
    wlo = std::max(std::floor(wlo), 1e-3);
    hlo = std::max(std::floor(hlo), 1e-3);
    whi = std::ceil(whi);
    hhi = std::ceil(hhi);
    const double ws = std::max(1.0, (whi - wlo) / 64), hs = std::max(1.0, (hhi - hlo) / 64);
    double best = iou_sum(members, anchor);
    for (double w = wlo; w <= whi + 1e-9; w += ws) {
        for (double h = hlo; h <= hhi + 1e-9; h += hs) {
            const double v = iou_sum(members, {w, h});
            if (v > best) {
                best = v;
                anchor = {w, h};
            }
        }
    }
    for (double step = 0.5 * std::max(ws, hs); step >= 1e-3;) {
        bool moved = false;
        for (const BoxSize d : {BoxSize{step, 0}, BoxSize{-step, 0}, BoxSize{0, step}, BoxSize{0, -step}}) {
            const BoxSize c{anchor.w + d.w, anchor.h + d.h};
            if (c.w <= 0 || c.h <= 0) continue;
            const double v = iou_sum(members, c);
            if (v > best) {
                best = v;
                anchor = c;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    return anchor;
}

}  // namespace

double mean_best_iou(std::span<const BoxSize> boxes, std::span<const BoxSize> anchors) {
    if (boxes.empty()) return 0;
    double s = 0;
    for (const auto& b : boxes) {
        double v = 0;
        best_anchor(b, anchors, &v);
        s += v;
    }
    return s / double(boxes.size());
}

AnchorSet cluster_anchors(std::span<const BoxSize> boxes, std::size_t k, int iterations, std::uint64_t seed) {
    if (boxes.empty()) throw ParameterError("anchors: no boxes");
    for (const auto& b : boxes)
        if (!(b.w > 0) || !(b.h > 0)) throw ParameterError("anchors: box sizes must be positive");
    std::vector<BoxSize> distinct(boxes.begin(), boxes.end());
    std::sort(distinct.begin(), distinct.end(), [](auto& a, auto& b) { return std::tie(a.w, a.h) < std::tie(b.w, b.h); });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (k == 0 || k > distinct.size())
        throw ParameterError(fmt::format("anchors: k = {} but only {} distinct box sizes", k, distinct.size()));

    Rng rng(seed);
    AnchorSet out;
    out.anchors = plus_plus_init(boxes, k, rng);
    out.history.push_back(mean_best_iou(boxes, out.anchors));
    for (int it = 0; it < iterations; ++it) {
        const auto clusters = assign(boxes, out.anchors);
        bool changed = false;
        for (std::size_t c = 0; c < k; ++c) {
            const auto& members = clusters[c];
            if (members.empty()) continue;
            const double current = iou_sum(members, out.anchors[c]);
            std::vector<double> ws, hs;
            for (const auto& m : members) {
                ws.push_back(m.w);
                hs.push_back(m.h);
            }
            BoxSize next{median(ws), median(hs)};
            if (iou_sum(members, next) < current) {
                // Medoid: the member with the largest IoU sum to its cluster.
                next = out.anchors[c];
                double best = current;
                for (const auto& m : members) {
                    const double v = iou_sum(members, m);
                    if (v > best) {
                        best = v;
                        next = m;
                    }
                }
            }
            if (!(next == out.anchors[c])) {
                out.anchors[c] = next;
                changed = true;
            }
        }
        out.history.push_back(mean_best_iou(boxes, out.anchors));
        if (!changed) break;
    }

    const auto clusters = assign(boxes, out.anchors);
    for (std::size_t c = 0; c < k; ++c)
        if (!clusters[c].empty()) out.anchors[c] = refine(clusters[c], out.anchors[c]);
    out.mean_iou = mean_best_iou(boxes, out.anchors);
    out.history.push_back(out.mean_iou);

    std::sort(out.anchors.begin(), out.anchors.end(), [](const BoxSize& a, const BoxSize& b) {
        const double aa = a.w * a.h, ba = b.w * b.h;
        return aa != ba ? aa < ba : a.w < b.w;
    });
    return out;
}

AnchorSet cluster_anchors(const Manifest& manifest, std::size_t k, int iterations, std::uint64_t seed) {
    std::vector<BoxSize> sizes;
    for (const auto& r : manifest.records)
        for (const auto& a : r.annotations) sizes.push_back({a.bbox.width(), a.bbox.height()});
    if (sizes.empty()) throw InputError("anchors: manifest has no boxes");
    return cluster_anchors(sizes, k, iterations, seed);
}

}  // namespace weldkit
