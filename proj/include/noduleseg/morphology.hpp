#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "noduleseg/image.hpp"

namespace nseg {

/// Raised when an operation gets an input it cannot threshold
/// (e.g. Otsu on a constant ROI).
class DegenerateInput : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One maximal 8-connected foreground component. Pixels are row-major
/// indices into the originating mask, sorted ascending.
struct Region {
    int width = 0;   // raster shape the indices refer to
    int height = 0;
    std::vector<int> pixels;    // sorted row-major indices
    std::vector<int> boundary;  // subset with >= 1 background 4-neighbor
    double cx = 0.0;
    double cy = 0.0;

    size_t area() const { return pixels.size(); }
    BinaryMask to_mask() const {
        BinaryMask m(width, height);
        for (int i : pixels) m.bits[i] = 1;
        return m;
    }
    BBox tight_box() const;
};

/// Disk structuring element: all offsets with Euclidean norm <= radius.
struct StructuringElement {
    int radius = 1;
    std::vector<std::pair<int, int>> offsets;

    static StructuringElement disk(int radius);
};

/// Foreground = pixels inside roi strictly above the roi's arithmetic mean.
BinaryMask binarize_mean(const GrayImage& img, const BBox& roi);

/// Between-class-variance maximizing threshold over the roi histogram;
/// foreground is defined as intensity > t. Ties break toward the smaller t.
/// Throws DegenerateInput when the roi is constant.
uint16_t otsu_threshold(const GrayImage& img, const BBox& roi);

/// Binarizes at a fixed threshold (strictly greater), restricted to roi.
BinaryMask binarize_at(const GrayImage& img, const BBox& roi, uint16_t threshold);

/// Maximal 8-connected components, ordered by each region's minimum
/// row-major index.
std::vector<Region> connected_components(const BinaryMask& mask);

/// Builds a Region (centroid, boundary) from an explicit pixel set.
/// The caller guarantees 8-connectivity.
Region region_from_pixels(int width, int height, std::vector<int> pixels);

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);
BinaryMask open(const BinaryMask& mask, const StructuringElement& se);
BinaryMask close(const BinaryMask& mask, const StructuringElement& se);

/// mask & ~sub, pointwise.
BinaryMask subtract(const BinaryMask& mask, const BinaryMask& sub);

/// 8-connected Bresenham segment from p to q, endpoints included.
std::vector<std::pair<int, int>> rasterize_segment(std::pair<int, int> p, std::pair<int, int> q);

}  // namespace nseg
