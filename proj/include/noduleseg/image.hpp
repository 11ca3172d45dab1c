#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nseg {

/// Axis-aligned integer box, inclusive min / exclusive max.
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    long long area() const { return static_cast<long long>(width()) * height(); }
    bool empty() const { return x1 <= x0 || y1 <= y0; }

    bool contains(int x, int y) const {
        return x >= x0 && x < x1 && y >= y0 && y < y1;
    }
    bool contains(const BBox& other) const {
        return other.x0 >= x0 && other.y0 >= y0 && other.x1 <= x1 && other.y1 <= y1;
    }
    BBox intersect(const BBox& other) const {
        BBox r{std::max(x0, other.x0), std::max(y0, other.y0),
               std::min(x1, other.x1), std::min(y1, other.y1)};
        if (r.empty()) return BBox{};
        return r;
    }
    /// Grows the box by `px` on every side and clamps to [0,w)x[0,h).
    BBox dilated(int px, int w, int h) const {
        return BBox{std::max(0, x0 - px), std::max(0, y0 - px),
                    std::min(w, x1 + px), std::min(h, y1 + px)};
    }
    bool operator==(const BBox&) const = default;
};

/// 2D 16-bit grayscale raster, row-major. An ROI crop around a candidate
/// nodule; intensities are raw (no HU calibration).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint16_t> pixels;
    std::optional<std::pair<double, double>> spacing_mm;

    GrayImage() = default;
    GrayImage(int w, int h, uint16_t fill = 0)
        : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("GrayImage: non-positive size");
    }

    uint16_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    uint16_t& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    BBox bounds() const { return BBox{0, 0, width, height}; }
    size_t size() const { return pixels.size(); }
};

/// Boolean raster with the same shape as its source image.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<size_t>(w) * h, fill ? 1 : 0) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("BinaryMask: non-positive size");
    }

    bool get(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    size_t count() const {
        size_t n = 0;
        for (uint8_t b : bits) n += b != 0;
        return n;
    }
    bool any() const {
        for (uint8_t b : bits)
            if (b) return true;
        return false;
    }
    bool operator==(const BinaryMask&) const = default;
};

}  // namespace nseg
