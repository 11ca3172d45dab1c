#pragma once

#include <string>
#include <vector>

#include "noduleseg/coarse.hpp"
#include "noduleseg/config.hpp"
#include "noduleseg/image.hpp"
#include "noduleseg/morphology.hpp"

namespace nseg {

enum class StopReason { box_converged, min_size_guard, ggo_evenness, max_iter };

std::string to_string(StopReason r);

struct CorrectionTrace {
    struct Step {
        BBox box;
        long long contour_area = 0;
    };
    std::vector<Step> steps;
    StopReason stop_reason = StopReason::box_converged;
};

/// Thrown when no coarse component survives within a box.
class SegmentationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Strips attached noise (vessels etc.) by cutting short dividing lines:
/// boundary-point pairs closer than alpha whose chord lies inside the
/// region and disconnects it. A separated piece is removed when its area
/// exceeds pi*((d+1)/2)^2 and it does not contain the pre-split centroid.
/// Shortest valid line first; iterates to fixpoint.
Region reduce_surrounding_noise(const Region& region, const PipelineConfig& cfg);

/// Sector-count evenness test for ground-glass halos: true iff the ring
/// splits into 8 angular sectors about the solid centroid with count CV
/// <= tau, and the ring mean intensity lies strictly between the
/// background mean and the solid-region mean.
bool ggo_evenness_check(const std::vector<int>& ring_pixels, double solid_cx, double solid_cy,
                        const GrayImage& img, double background_mean, double solid_mean,
                        const PipelineConfig& cfg);

/// Iterative box shrink-and-rethreshold. THRESHOLD(box) is coarse
/// segmentation restricted to the box followed by noise reduction, keeping
/// the largest surviving region; FINDBOX is the tight contour box dilated
/// by one pixel per side. Stops when the shrink factor drops below epsilon,
/// when the contour would fall under s_m, when the ground-glass evenness
/// test fires, or after max_iterations.
std::pair<Region, CorrectionTrace> self_adapting_correct(const GrayImage& img,
                                                         const BBox& original_box,
                                                         const PipelineConfig& cfg,
                                                         const PleuralResult& pleural);

}  // namespace nseg
