#pragma once

#include <utility>
#include <vector>

#include "noduleseg/image.hpp"
#include "noduleseg/morphology.hpp"

namespace nseg {

/// Foreground boundary pixels separating foreground and background strictly
/// inside the ROI (the ROI edge itself is not an interface).
struct CuttingLine {
    std::vector<std::pair<int, int>> points;
};

struct PleuralResult {
    BinaryMask binarized;  // binarize_mean output on the roi
    BinaryMask kept;       // foreground retained after wall removal
    BinaryMask wall;       // foreground classified as lung wall
    CuttingLine line;
};

/// Foreground pixels with a background 4-neighbor strictly inside the roi.
CuttingLine extract_cutting_line(const BinaryMask& mask, const BBox& roi);

/// Lung-wall removal by chord cover: binarize at the roi mean, rasterize
/// segments between cutting-line point pairs, keep foreground covered by an
/// all-foreground segment. Components with fewer than two cutting-line
/// points carry no wall evidence and are kept whole. Segments crossing
/// background are discarded entirely.
PleuralResult remove_pleural_surface(const GrayImage& img, const BBox& roi);

/// Same removal applied to an existing binary mask (used by the fixpoint
/// and phantom checks).
PleuralResult remove_pleural_surface_mask(const BinaryMask& binarized, const BBox& roi);

}  // namespace nseg
