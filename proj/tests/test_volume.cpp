#include <doctest.h>

#include "noduleseg/metrics.hpp"
#include "noduleseg/phantom.hpp"
#include "noduleseg/volume.hpp"

using namespace nseg;

namespace {

SliceStack stack_from(const PhantomCase& ph) {
    SliceStack st;
    st.center_index = ph.center_index;
    for (size_t i = 0; i < ph.slices.size(); ++i)
        st.slices.push_back({ph.slices[i], ph.roi_boxes[i]});
    return st;
}

double stack_dsc(const StackResult& res, const PhantomCase& ph) {
    std::vector<std::pair<BinaryMask, BinaryMask>> pairs;
    for (size_t i = 0; i < res.slices.size(); ++i)
        pairs.emplace_back(res.slices[i].prediction(), ph.gt_masks[i]);
    return nodule_dsc(pairs);
}

}  // namespace

TEST_CASE("a single-slice stack degenerates to the 2D pipeline") {
    PhantomSpec spec;
    spec.seed = 12;
    spec.kind = PhantomKind::solid;
    spec.nodule_diameter_px = 14.0;
    PhantomCase ph = generate(spec);
    PipelineConfig cfg;

    StackResult res = segment_stack(stack_from(ph), cfg);
    SliceResult direct = segment_slice(ph.slices[0], ph.roi_boxes[0], cfg);
    REQUIRE(res.slices.size() == 1);
    CHECK(res.slices[0].prediction() == direct.prediction());
    CHECK(res.slices[0].box == direct.box);
}

TEST_CASE("multi-slice propagation segments every slice of an ellipsoid") {
    PhantomSpec spec;
    spec.seed = 77;
    spec.kind = PhantomKind::solid;
    spec.nodule_diameter_px = 24.0;
    spec.n_slices = 7;
    PhantomCase ph = generate(spec);
    PipelineConfig cfg;

    StackResult res = segment_stack(stack_from(ph), cfg);
    REQUIRE(res.slices.size() == 7);
    for (size_t i = 0; i < res.slices.size(); ++i) {
        CAPTURE(i);
        // every inherited box stays inside the manifest roi
        CHECK(ph.roi_boxes[i].contains(res.slices[i].box));
        if (ph.gt_masks[i].any()) CHECK(res.slices[i].contour.has_value());
    }
    CHECK(stack_dsc(res, ph) > 0.85);

    // off-center slices inherit a box much tighter than the manifest roi
    const size_t last = res.slices.size() - 1;
    CHECK(res.slices[last].box.area() < ph.roi_boxes[last].area());
}

TEST_CASE("propagation scores at least as well as independent slices") {
    PipelineConfig cfg;
    for (uint64_t seed : {101, 102, 103}) {
        PhantomSpec spec;
        spec.seed = seed;
        spec.kind = PhantomKind::vessel_attached;
        spec.nodule_diameter_px = 18.0;
        spec.n_slices = 5;
        PhantomCase ph = generate(spec);

        StackResult prop = segment_stack(stack_from(ph), cfg);
        StackResult indep = segment_stack_independent(stack_from(ph), cfg);
        CHECK(stack_dsc(prop, ph) >= stack_dsc(indep, ph) - 1e-9);
    }
}

TEST_CASE("a failing outer slice yields an empty prediction, not a throw") {
    PhantomSpec spec;
    spec.seed = 5;
    spec.kind = PhantomKind::solid;
    spec.nodule_diameter_px = 14.0;
    spec.n_slices = 3;
    PhantomCase ph = generate(spec);
    // flatten the last slice: nothing to segment there
    ph.slices[2] = GrayImage(ph.slices[2].width, ph.slices[2].height, 200);

    PipelineConfig cfg;
    StackResult res = segment_stack(stack_from(ph), cfg);
    REQUIRE(res.slices.size() == 3);
    CHECK_FALSE(res.slices[2].contour.has_value());
    CHECK_FALSE(res.slices[2].prediction().any());
    CHECK(res.slices[0].contour.has_value());
    CHECK(res.slices[1].contour.has_value());
}

TEST_CASE("a failing center slice throws") {
    PhantomSpec spec;
    spec.seed = 5;
    spec.kind = PhantomKind::solid;
    spec.n_slices = 3;
    PhantomCase ph = generate(spec);
    ph.slices[ph.center_index] =
        GrayImage(ph.slices[0].width, ph.slices[0].height, 200);
    PipelineConfig cfg;
    CHECK_THROWS_AS(segment_stack(stack_from(ph), cfg), SegmentationFailure);
}

TEST_CASE("independent mode ignores neighbours entirely") {
    PhantomSpec spec;
    spec.seed = 31;
    spec.kind = PhantomKind::solid;
    spec.nodule_diameter_px = 16.0;
    spec.n_slices = 3;
    PhantomCase ph = generate(spec);
    PipelineConfig cfg;

    StackResult res = segment_stack_independent(stack_from(ph), cfg);
    for (size_t i = 0; i < ph.slices.size(); ++i) {
        SliceResult direct = segment_slice(ph.slices[i], ph.roi_boxes[i], cfg);
        CHECK(res.slices[i].prediction() == direct.prediction());
    }
}
