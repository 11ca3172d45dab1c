#pragma once

#include <stdexcept>

namespace nseg {

enum class CoarseMethod { plain_threshold, deformable };

/// Tunables for the whole pipeline. Defaults assume ~0.7 mm/px ROI crops.
struct PipelineConfig {
    int alpha = 8;              // max dividing-line length in pixels
    int s_m = 14;               // minimum nodule area in pixels
    double epsilon = 1.2;       // box-shrink stop factor, > 1
    double rho = 0.5;           // nodule-pixel proportion that counts as converged
    double tau = 0.5;           // sector-count CV threshold for the ground-glass stop
    int margin = 2;             // per-side box dilation when propagating across slices
    int se_radius = 2;          // disk radius for the deformable method
    CoarseMethod coarse_method = CoarseMethod::deformable;
    bool ggo_stop_enabled = true;
    int max_iterations = 32;

    void validate() const {
        if (alpha < 2) throw std::invalid_argument("config: alpha must be >= 2");
        if (s_m < 1) throw std::invalid_argument("config: s_m must be >= 1");
        if (epsilon <= 1.0) throw std::invalid_argument("config: epsilon must be > 1");
        if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("config: rho must be in (0,1)");
        if (margin < 0) throw std::invalid_argument("config: margin must be >= 0");
        if (se_radius < 1) throw std::invalid_argument("config: se_radius must be >= 1");
    }
};

}  // namespace nseg
