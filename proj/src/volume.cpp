#include "noduleseg/volume.hpp"

namespace nseg {

StackResult segment_stack(const SliceStack& stack, const PipelineConfig& cfg) {
    cfg.validate();
    if (stack.slices.empty()) throw std::invalid_argument("segment_stack: empty stack");
    if (stack.center_index < 0 || stack.center_index >= static_cast<int>(stack.slices.size()))
        throw std::invalid_argument("segment_stack: center_index out of range");

    const int n = static_cast<int>(stack.slices.size());
    StackResult res;
    res.slices.resize(n);

    const int c = stack.center_index;
    res.slices[c] = segment_slice(stack.slices[c].image, stack.slices[c].roi_box, cfg);
    if (!res.slices[c].contour)
        throw SegmentationFailure("center slice failed: no anchor to propagate from");

    auto sweep = [&](int dir) {
        BBox carry = res.slices[c].contour->tight_box();
        for (int i = c + dir; i >= 0 && i < n; i += dir) {
            const SliceInput& s = stack.slices[i];
            BBox inherited =
                carry.dilated(cfg.margin, s.image.width, s.image.height).intersect(s.roi_box);
            if (inherited.empty()) inherited = s.roi_box;
            res.slices[i] = segment_slice(s.image, inherited, cfg);
            if (res.slices[i].contour) carry = res.slices[i].contour->tight_box();
            // else: keep the last successful box and continue outward
        }
    };
    sweep(-1);
    sweep(+1);
    return res;
}

StackResult segment_stack_independent(const SliceStack& stack, const PipelineConfig& cfg) {
    cfg.validate();
    StackResult res;
    res.slices.reserve(stack.slices.size());
    for (const SliceInput& s : stack.slices)
        res.slices.push_back(segment_slice(s.image, s.roi_box, cfg));
    return res;
}

}  // namespace nseg
