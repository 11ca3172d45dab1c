#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "noduleseg/image.hpp"
#include "noduleseg/manifest.hpp"

namespace nseg {

enum class PhantomKind { solid, mGGN, pGGN, juxtapleural, vessel_attached };

PhantomKind phantom_kind_from_string(const std::string& s);
std::string to_string(PhantomKind k);

/// Synthetic ROI description. Intensity means keep the ordering
/// background < halo < wall < solid; noise sigma stays at or below a
/// quarter of the smallest inter-class gap so the ordering holds in
/// expectation.
struct PhantomSpec {
    uint64_t seed = 0;
    PhantomKind kind = PhantomKind::solid;
    double nodule_diameter_px = 10.0;
    int box_size = 64;
    int n_slices = 1;
    double spacing_mm = 0.7;

    double background_mean = 200.0;
    double noise_sigma = 25.0;
    double halo_mean = 450.0;
    double wall_mean = 700.0;
    double solid_mean = 800.0;

    void validate() const;
};

/// One generated case: raster slices, exact analytic ground truth, and the
/// wall pixels separately (for wall-removal scoring).
struct PhantomCase {
    PhantomSpec spec;
    std::vector<GrayImage> slices;
    std::vector<BinaryMask> gt_masks;
    std::vector<BinaryMask> wall_masks;
    std::vector<BBox> roi_boxes;
    int center_index = 0;
    double diameter_mm = 0.0;
};

/// Deterministic per seed: the same spec always renders identical bytes.
PhantomCase generate(const PhantomSpec& spec);

/// Writes n cases spanning all kinds and all three diameter bins to
/// out_dir (PGM slices + ground truth + one JSON manifest), and returns the
/// manifest entries. Case i is keyed on (seed, i), independent of order.
std::vector<CaseManifest> generate_suite(uint64_t seed, int n,
                                         const std::filesystem::path& out_dir);

/// Writes a single generated case under out_dir/<case_id> and returns its
/// manifest entry (paths relative to out_dir).
CaseManifest write_case(const PhantomCase& c, const std::string& case_id,
                        const std::filesystem::path& out_dir);

}  // namespace nseg
