#pragma once

#include <vector>

#include "noduleseg/pipeline.hpp"

namespace nseg {

struct SliceInput {
    GrayImage image;
    BBox roi_box;
};

struct SliceStack {
    std::vector<SliceInput> slices;
    int center_index = 0;
};

struct StackResult {
    // one entry per slice, in stack order; contour empty where the slice failed
    std::vector<SliceResult> slices;
};

/// 3D-based correction: segments the center slice with its manifest box,
/// then sweeps outward in both directions, seeding each slice with the
/// previous contour's tight box dilated by cfg.margin and clipped to that
/// slice's manifest box. A failing slice yields an empty prediction and the
/// sweep continues with the last successful box. Throws SegmentationFailure
/// when the center slice itself fails.
StackResult segment_stack(const SliceStack& stack, const PipelineConfig& cfg);

/// Per-slice pipeline with no box inheritance (the --no-3d path).
StackResult segment_stack_independent(const SliceStack& stack, const PipelineConfig& cfg);

}  // namespace nseg
