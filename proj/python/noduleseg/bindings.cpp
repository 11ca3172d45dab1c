#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "noduleseg/metrics.hpp"
#include "noduleseg/morphology.hpp"
#include "noduleseg/pgm.hpp"
#include "noduleseg/phantom.hpp"
#include "noduleseg/pipeline.hpp"
#include "noduleseg/volume.hpp"

namespace py = pybind11;
using namespace nseg;

namespace {

GrayImage image_from_array(py::array_t<uint16_t, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    GrayImage img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::copy(arr.data(), arr.data() + img.size(), img.pixels.begin());
    return img;
}

py::array_t<uint16_t> image_to_array(const GrayImage& img) {
    py::array_t<uint16_t> arr({img.height, img.width});
    std::copy(img.pixels.begin(), img.pixels.end(), arr.mutable_data());
    return arr;
}

BinaryMask mask_from_array(py::array_t<bool, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    BinaryMask m(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    for (size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = arr.data()[i] ? 1 : 0;
    return m;
}

py::array_t<bool> mask_to_array(const BinaryMask& m) {
    py::array_t<bool> arr({m.height, m.width});
    for (size_t i = 0; i < m.bits.size(); ++i) arr.mutable_data()[i] = m.bits[i] != 0;
    return arr;
}

BBox box_from_tuple(std::tuple<int, int, int, int> t) {
    return BBox{std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)};
}

PipelineConfig config_from_kwargs(const py::kwargs& kw) {
    PipelineConfig cfg;
    for (auto item : kw) {
        const auto key = item.first.cast<std::string>();
        if (key == "alpha") cfg.alpha = item.second.cast<int>();
        else if (key == "s_m") cfg.s_m = item.second.cast<int>();
        else if (key == "epsilon") cfg.epsilon = item.second.cast<double>();
        else if (key == "rho") cfg.rho = item.second.cast<double>();
        else if (key == "tau") cfg.tau = item.second.cast<double>();
        else if (key == "margin") cfg.margin = item.second.cast<int>();
        else if (key == "se_radius") cfg.se_radius = item.second.cast<int>();
        else if (key == "ggo_stop") cfg.ggo_stop_enabled = item.second.cast<bool>();
        else if (key == "method")
            cfg.coarse_method = item.second.cast<std::string>() == "plain"
                                    ? CoarseMethod::plain_threshold
                                    : CoarseMethod::deformable;
        else throw std::invalid_argument("unknown config key \"" + key + "\"");
    }
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "coarse-to-fine morphological nodule segmentation";

    m.def("load_pgm", [](const std::filesystem::path& p) { return image_to_array(load_gray_image(p)); });
    m.def("save_pgm", [](py::array_t<uint16_t> arr, const std::filesystem::path& p) {
        save_gray_image(image_from_array(std::move(arr)), p);
    });
    m.def("load_mask", [](const std::filesystem::path& p) { return mask_to_array(load_mask(p)); });
    m.def("save_mask", [](py::array_t<bool> arr, const std::filesystem::path& p) {
        save_mask(mask_from_array(std::move(arr)), p);
    });

    m.def("otsu_threshold", [](py::array_t<uint16_t> arr) {
        GrayImage img = image_from_array(std::move(arr));
        return otsu_threshold(img, img.bounds());
    });
    m.def("binarize_mean", [](py::array_t<uint16_t> arr) {
        GrayImage img = image_from_array(std::move(arr));
        return mask_to_array(binarize_mean(img, img.bounds()));
    });
    m.def("dsc", [](py::array_t<bool> a, py::array_t<bool> b) {
        return dsc(mask_from_array(std::move(a)), mask_from_array(std::move(b)));
    });

    m.def(
        "remove_pleural_surface",
        [](py::array_t<uint16_t> arr) {
            GrayImage img = image_from_array(std::move(arr));
            auto res = remove_pleural_surface(img, img.bounds());
            return py::make_tuple(mask_to_array(res.kept), mask_to_array(res.wall));
        },
        "returns (kept_mask, wall_mask)");

    m.def(
        "segment",
        [](py::array_t<uint16_t> arr, std::optional<std::tuple<int, int, int, int>> roi,
           const py::kwargs& kw) {
            GrayImage img = image_from_array(std::move(arr));
            const BBox box = roi ? box_from_tuple(*roi) : img.bounds();
            const PipelineConfig cfg = config_from_kwargs(kw);
            SliceResult res = segment_slice(img, box, cfg);
            py::dict out;
            out["mask"] = mask_to_array(res.prediction());
            out["segmented"] = res.contour.has_value();
            out["stop_reason"] = to_string(res.trace.stop_reason);
            out["iterations"] = res.trace.steps.size();
            return out;
        },
        py::arg("image"), py::arg("roi") = std::nullopt,
        "full 2D pipeline on one ROI crop; config keys as keyword arguments");

    m.def(
        "generate_phantom",
        [](uint64_t seed, const std::string& kind, double diameter_px, int box_size, int n_slices) {
            PhantomSpec spec;
            spec.seed = seed;
            spec.kind = phantom_kind_from_string(kind);
            spec.nodule_diameter_px = diameter_px;
            spec.box_size = box_size;
            spec.n_slices = n_slices;
            PhantomCase c = generate(spec);
            py::list images, gts;
            for (const auto& s : c.slices) images.append(image_to_array(s));
            for (const auto& g : c.gt_masks) gts.append(mask_to_array(g));
            return py::make_tuple(images, gts);
        },
        py::arg("seed"), py::arg("kind") = "solid", py::arg("diameter_px") = 12.0,
        py::arg("box_size") = 64, py::arg("n_slices") = 1,
        "returns (slice_images, ground_truth_masks)");
}
