#include "noduleseg/morphology.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace nseg {

BBox Region::tight_box() const {
    if (pixels.empty()) return BBox{};
    int x0 = width, y0 = height, x1 = 0, y1 = 0;
    for (int i : pixels) {
        int x = i % width, y = i / width;
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x + 1);
        y1 = std::max(y1, y + 1);
    }
    return BBox{x0, y0, x1, y1};
}

StructuringElement StructuringElement::disk(int radius) {
    if (radius < 1) throw std::invalid_argument("disk radius must be >= 1");
    StructuringElement se;
    se.radius = radius;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) se.offsets.emplace_back(dx, dy);
    return se;
}

BinaryMask binarize_mean(const GrayImage& img, const BBox& roi) {
    if (roi.empty() || !img.bounds().contains(roi))
        throw std::invalid_argument("binarize_mean: empty or out-of-bounds roi");
    long long sum = 0;
    const long long n = roi.area();
    for (int y = roi.y0; y < roi.y1; ++y)
        for (int x = roi.x0; x < roi.x1; ++x) sum += img.at(x, y);

    BinaryMask out(img.width, img.height);
    // p > sum/n, kept exact in integers
    for (int y = roi.y0; y < roi.y1; ++y)
        for (int x = roi.x0; x < roi.x1; ++x)
            if (static_cast<long long>(img.at(x, y)) * n > sum) out.set(x, y, true);
    return out;
}

uint16_t otsu_threshold(const GrayImage& img, const BBox& roi) {
    if (roi.empty() || !img.bounds().contains(roi))
        throw std::invalid_argument("otsu_threshold: empty or out-of-bounds roi");

    std::array<long long, 65536> hist{};
    uint16_t lo = 65535, hi = 0;
    for (int y = roi.y0; y < roi.y1; ++y)
        for (int x = roi.x0; x < roi.x1; ++x) {
            uint16_t v = img.at(x, y);
            ++hist[v];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (lo == hi) throw DegenerateInput("otsu_threshold: constant roi");

    const double total = static_cast<double>(roi.area());
    double total_mean = 0.0;
    for (int v = lo; v <= hi; ++v) total_mean += static_cast<double>(v) * hist[v];
    total_mean /= total;

    // Background = intensity <= t, foreground = intensity > t.
    double w_bg = 0.0, sum_bg = 0.0;
    double best = -1.0;
    uint16_t best_t = lo;
    for (int t = lo; t < hi; ++t) {
        w_bg += static_cast<double>(hist[t]);
        sum_bg += static_cast<double>(t) * hist[t];
        const double w_fg = total - w_bg;
        if (w_bg == 0.0 || w_fg == 0.0) continue;
        const double mu_bg = sum_bg / w_bg;
        const double mu_fg = (total_mean * total - sum_bg) / w_fg;
        const double var = w_bg * w_fg * (mu_bg - mu_fg) * (mu_bg - mu_fg);
        if (var > best) {
            best = var;
            best_t = static_cast<uint16_t>(t);
        }
    }
    return best_t;
}

BinaryMask binarize_at(const GrayImage& img, const BBox& roi, uint16_t threshold) {
    if (roi.empty() || !img.bounds().contains(roi))
        throw std::invalid_argument("binarize_at: empty or out-of-bounds roi");
    BinaryMask out(img.width, img.height);
    for (int y = roi.y0; y < roi.y1; ++y)
        for (int x = roi.x0; x < roi.x1; ++x)
            if (img.at(x, y) > threshold) out.set(x, y, true);
    return out;
}

std::vector<Region> connected_components(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<Region> regions;
    std::vector<uint8_t> seen(mask.bits.size(), 0);
    std::vector<int> stack;

    static constexpr int dx8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static constexpr int dy8[] = {-1, -1, -1, 0, 0, 1, 1, 1};

    for (int start = 0; start < static_cast<int>(mask.bits.size()); ++start) {
        if (!mask.bits[start] || seen[start]) continue;
        Region r;
        r.width = w;
        r.height = h;
        stack.assign(1, start);
        seen[start] = 1;
        long long sx = 0, sy = 0;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            r.pixels.push_back(i);
            int x = i % w, y = i / w;
            sx += x;
            sy += y;
            for (int k = 0; k < 8; ++k) {
                int nx = x + dx8[k], ny = y + dy8[k];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                int ni = ny * w + nx;
                if (mask.bits[ni] && !seen[ni]) {
                    seen[ni] = 1;
                    stack.push_back(ni);
                }
            }
        }
        std::sort(r.pixels.begin(), r.pixels.end());
        r.cx = static_cast<double>(sx) / static_cast<double>(r.pixels.size());
        r.cy = static_cast<double>(sy) / static_cast<double>(r.pixels.size());
        for (int i : r.pixels) {
            int x = i % w, y = i / w;
            bool edge = x == 0 || x == w - 1 || y == 0 || y == h - 1;
            if (edge || !mask.bits[i - 1] || !mask.bits[i + 1] || !mask.bits[i - w] ||
                !mask.bits[i + w])
                r.boundary.push_back(i);
        }
        regions.push_back(std::move(r));
    }
    return regions;
}

Region region_from_pixels(int width, int height, std::vector<int> pixels) {
    if (pixels.empty()) throw std::invalid_argument("region_from_pixels: empty pixel set");
    std::sort(pixels.begin(), pixels.end());
    BinaryMask m(width, height);
    for (int i : pixels) m.bits[i] = 1;

    Region r;
    r.width = width;
    r.height = height;
    r.pixels = std::move(pixels);
    long long sx = 0, sy = 0;
    for (int i : r.pixels) {
        int x = i % width, y = i / width;
        sx += x;
        sy += y;
        bool edge = x == 0 || x == width - 1 || y == 0 || y == height - 1;
        if (edge || !m.bits[i - 1] || !m.bits[i + 1] || !m.bits[i - width] || !m.bits[i + width])
            r.boundary.push_back(i);
    }
    r.cx = static_cast<double>(sx) / static_cast<double>(r.pixels.size());
    r.cy = static_cast<double>(sy) / static_cast<double>(r.pixels.size());
    return r;
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            bool keep = mask.get(x, y);
            for (auto [dx, dy] : se.offsets) {
                if (!keep) break;
                int nx = x + dx, ny = y + dy;
                if (!mask.in_bounds(nx, ny) || !mask.get(nx, ny)) keep = false;
            }
            if (keep) out.set(x, y, true);
        }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            for (auto [dx, dy] : se.offsets) {
                int nx = x + dx, ny = y + dy;
                if (mask.in_bounds(nx, ny)) out.set(nx, ny, true);
            }
        }
    return out;
}

BinaryMask open(const BinaryMask& mask, const StructuringElement& se) {
    return dilate(erode(mask, se), se);
}

BinaryMask close(const BinaryMask& mask, const StructuringElement& se) {
    // pad by the radius so dilation can extend past the border; keeps
    // closing extensive (mask <= close(mask)) at image edges
    const int pad = se.radius;
    BinaryMask padded(mask.width + 2 * pad, mask.height + 2 * pad);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.get(x, y)) padded.set(x + pad, y + pad, true);
    BinaryMask closed = erode(dilate(padded, se), se);
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (closed.get(x + pad, y + pad)) out.set(x, y, true);
    return out;
}

BinaryMask subtract(const BinaryMask& mask, const BinaryMask& sub) {
    if (mask.width != sub.width || mask.height != sub.height)
        throw std::invalid_argument("subtract: shape mismatch");
    BinaryMask out = mask;
    for (size_t i = 0; i < out.bits.size(); ++i)
        if (sub.bits[i]) out.bits[i] = 0;
    return out;
}

std::vector<std::pair<int, int>> rasterize_segment(std::pair<int, int> p, std::pair<int, int> q) {
    // Canonical endpoint order makes set(rasterize(p,q)) == set(rasterize(q,p)).
    const bool swapped = q < p;
    if (swapped) std::swap(p, q);

    std::vector<std::pair<int, int>> out;
    int x = p.first, y = p.second;
    const int dx = std::abs(q.first - x), dy = -std::abs(q.second - y);
    const int sx = x < q.first ? 1 : -1, sy = y < q.second ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        out.emplace_back(x, y);
        if (x == q.first && y == q.second) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    if (swapped) std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace nseg
