#pragma once

#include <optional>

#include "noduleseg/config.hpp"
#include "noduleseg/fine.hpp"
#include "noduleseg/image.hpp"
#include "noduleseg/pleural.hpp"

namespace nseg {

/// Everything the 2D pipeline produces for one slice. `contour` is empty
/// when no candidate survived (recorded, not thrown, at this level).
struct SliceResult {
    std::optional<Region> contour;
    CorrectionTrace trace;
    PleuralResult pleural;
    BinaryMask coarse_mask;    // union of coarse candidate regions
    BinaryMask denoised_mask;  // largest candidate after noise reduction
    BinaryMask final_mask;     // contour as a mask (empty on failure)
    BBox box;                  // the box the slice was segmented in

    BinaryMask prediction() const;
};

/// Full 2D pipeline on one slice: pleural removal, coarse segmentation,
/// noise reduction, self-adapting correction.
SliceResult segment_slice(const GrayImage& img, const BBox& roi, const PipelineConfig& cfg);

/// Plain-thresholding baseline: coarse plain selection only, largest
/// surviving component, no box correction.
SliceResult segment_slice_plain_baseline(const GrayImage& img, const BBox& roi,
                                         const PipelineConfig& cfg);

}  // namespace nseg
