#include "noduleseg/coarse.hpp"

namespace nseg {

std::vector<Region> coarse_segment(const GrayImage& img, const BBox& roi,
                                   const PipelineConfig& cfg, const PleuralResult& pleural) {
    if (roi.empty() || !img.bounds().contains(roi))
        throw std::invalid_argument("coarse_segment: empty or out-of-bounds roi");

    BinaryMask candidates;
    if (cfg.coarse_method == CoarseMethod::plain_threshold) {
        candidates = binarize_mean(img, roi);
        for (size_t i = 0; i < candidates.bits.size(); ++i)
            if (!pleural.kept.bits[i]) candidates.bits[i] = 0;
    } else {
        BinaryMask binarized;
        try {
            binarized = binarize_at(img, roi, otsu_threshold(img, roi));
        } catch (const DegenerateInput&) {
            binarized = binarize_mean(img, roi);
        }
        const auto se = StructuringElement::disk(cfg.se_radius);
        BinaryMask closed = close(binarized, se);
        BinaryMask cleaned = subtract(closed, pleural.wall);
        // opening's dilation can re-grow into wall pixels; subtract again
        candidates = subtract(open(cleaned, se), pleural.wall);
        // and clip to the roi
        for (int y = 0; y < candidates.height; ++y)
            for (int x = 0; x < candidates.width; ++x)
                if (!roi.contains(x, y)) candidates.set(x, y, false);
    }

    std::vector<Region> kept;
    for (Region& r : connected_components(candidates))
        if (static_cast<long long>(r.area()) > cfg.s_m) kept.push_back(std::move(r));
    return kept;
}

}  // namespace nseg
