#pragma once

#include <vector>

#include "noduleseg/config.hpp"
#include "noduleseg/image.hpp"
#include "noduleseg/morphology.hpp"
#include "noduleseg/pleural.hpp"

namespace nseg {

/// Candidate-pixel selection. Both methods subtract the wall pixels found by
/// pleural removal and drop components not larger than s_m.
///
/// plain_threshold: above-mean pixels intersected with the wall-cleaned mask.
/// deformable: Otsu binarization (mean fallback on a constant roi), closing,
/// wall subtraction, opening.
std::vector<Region> coarse_segment(const GrayImage& img, const BBox& roi,
                                   const PipelineConfig& cfg, const PleuralResult& pleural);

}  // namespace nseg
