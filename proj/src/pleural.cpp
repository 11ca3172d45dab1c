#include "noduleseg/pleural.hpp"

#include <unordered_set>

namespace nseg {

CuttingLine extract_cutting_line(const BinaryMask& mask, const BBox& roi) {
    CuttingLine line;
    static constexpr int dx4[] = {1, -1, 0, 0};
    static constexpr int dy4[] = {0, 0, 1, -1};
    for (int y = roi.y0; y < roi.y1; ++y)
        for (int x = roi.x0; x < roi.x1; ++x) {
            if (!mask.get(x, y)) continue;
            for (int k = 0; k < 4; ++k) {
                int nx = x + dx4[k], ny = y + dy4[k];
                if (roi.contains(nx, ny) && !mask.get(nx, ny)) {
                    line.points.emplace_back(x, y);
                    break;
                }
            }
        }
    return line;
}

namespace {

constexpr size_t kMaxLinePoints = 1024;

// Deterministic subsample: every k-th point by boundary scan order.
std::vector<std::pair<int, int>> cap_line(const std::vector<std::pair<int, int>>& pts) {
    if (pts.size() <= kMaxLinePoints) return pts;
    std::vector<std::pair<int, int>> out;
    out.reserve(kMaxLinePoints);
    const size_t step = (pts.size() + kMaxLinePoints - 1) / kMaxLinePoints;
    for (size_t i = 0; i < pts.size(); i += step) out.push_back(pts[i]);
    return out;
}

}  // namespace

PleuralResult remove_pleural_surface_mask(const BinaryMask& binarized, const BBox& roi) {
    PleuralResult res;
    res.binarized = binarized;
    res.wall = BinaryMask(binarized.width, binarized.height);
    res.line = extract_cutting_line(binarized, roi);

    if (res.line.points.empty()) {
        res.kept = binarized;
        return res;
    }

    const auto pts = cap_line(res.line.points);
    const int w = binarized.width;

    std::vector<uint8_t> covered(binarized.bits.size(), 0);
    std::vector<std::pair<int, int>> seg;
    for (size_t a = 0; a + 1 < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b) {
            seg = rasterize_segment(pts[a], pts[b]);
            bool all_fg = true;
            for (auto [x, y] : seg)
                if (!binarized.get(x, y)) {
                    all_fg = false;
                    break;
                }
            if (!all_fg) continue;  // crosses background: no Rule-1 guarantee
            for (auto [x, y] : seg) covered[static_cast<size_t>(y) * w + x] = 1;
        }

    // A pixel survives if a chord covers it, or its whole component carries
    // no wall evidence (fewer than two cutting-line points).
    std::unordered_set<int> line_idx;
    for (auto [x, y] : res.line.points) line_idx.insert(y * w + x);

    res.kept = BinaryMask(binarized.width, binarized.height);
    for (const Region& r : connected_components(binarized)) {
        int n_line = 0;
        for (int i : r.pixels) n_line += line_idx.count(i) ? 1 : 0;
        if (n_line < 2) {
            for (int i : r.pixels) res.kept.bits[i] = 1;
            continue;
        }
        for (int i : r.pixels) {
            if (covered[i])
                res.kept.bits[i] = 1;
            else
                res.wall.bits[i] = 1;
        }
    }
    return res;
}

PleuralResult remove_pleural_surface(const GrayImage& img, const BBox& roi) {
    return remove_pleural_surface_mask(binarize_mean(img, roi), roi);
}

}  // namespace nseg
