#include "noduleseg/pipeline.hpp"

#include "noduleseg/coarse.hpp"

namespace nseg {

BinaryMask SliceResult::prediction() const {
    if (contour) return contour->to_mask();
    return BinaryMask(pleural.binarized.width, pleural.binarized.height);
}

SliceResult segment_slice(const GrayImage& img, const BBox& roi, const PipelineConfig& cfg) {
    cfg.validate();
    SliceResult res;
    res.box = roi;
    res.pleural = remove_pleural_surface(img, roi);

    res.coarse_mask = BinaryMask(img.width, img.height);
    res.denoised_mask = BinaryMask(img.width, img.height);
    res.final_mask = BinaryMask(img.width, img.height);

    auto regions = coarse_segment(img, roi, cfg, res.pleural);
    for (const Region& r : regions)
        for (int i : r.pixels) res.coarse_mask.bits[i] = 1;
    if (regions.empty()) return res;  // contour stays empty

    size_t best = 0;
    for (size_t i = 1; i < regions.size(); ++i)
        if (regions[i].area() > regions[best].area()) best = i;
    res.denoised_mask = reduce_surrounding_noise(regions[best], cfg).to_mask();

    try {
        auto [contour, trace] = self_adapting_correct(img, roi, cfg, res.pleural);
        res.final_mask = contour.to_mask();
        res.contour = std::move(contour);
        res.trace = std::move(trace);
    } catch (const SegmentationFailure&) {
        // recorded as an empty prediction
    }
    return res;
}

SliceResult segment_slice_plain_baseline(const GrayImage& img, const BBox& roi,
                                         const PipelineConfig& cfg) {
    PipelineConfig plain = cfg;
    plain.coarse_method = CoarseMethod::plain_threshold;
    SliceResult res;
    res.box = roi;
    res.pleural = remove_pleural_surface(img, roi);
    res.coarse_mask = BinaryMask(img.width, img.height);
    res.denoised_mask = BinaryMask(img.width, img.height);
    res.final_mask = BinaryMask(img.width, img.height);

    auto regions = coarse_segment(img, roi, plain, res.pleural);
    if (regions.empty()) return res;
    size_t best = 0;
    for (size_t i = 1; i < regions.size(); ++i)
        if (regions[i].area() > regions[best].area()) best = i;
    res.final_mask = regions[best].to_mask();
    res.coarse_mask = res.final_mask;
    res.contour = std::move(regions[best]);
    return res;
}

}  // namespace nseg
