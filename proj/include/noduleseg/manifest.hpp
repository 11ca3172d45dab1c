#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "noduleseg/image.hpp"

namespace nseg {

enum class NoduleType { solid, mGGN, pGGN };

NoduleType nodule_type_from_string(const std::string& s);
std::string to_string(NoduleType t);

/// Diameter strata of the stratified report: (0,10), [10,20), [20,inf) mm.
enum class DiameterBin { under_10, from_10_to_20, over_20 };

DiameterBin diameter_bin(double diameter_mm);
std::string to_string(DiameterBin b);

struct SliceEntry {
    std::filesystem::path image_path;
    BBox roi_box;
    std::optional<std::filesystem::path> gt_mask_path;  // absent = unlabeled
};

struct CaseManifest {
    std::string case_id;
    NoduleType nodule_type = NoduleType::solid;
    double diameter_mm = 0.0;
    std::vector<SliceEntry> slices;
    int center_index = 0;
    std::optional<std::pair<double, double>> spacing_mm;
};

class ManifestError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses and validates a JSON manifest. Paths are resolved relative to the
/// manifest's directory; ROI boxes are checked against the slice images.
/// Rejects the whole file on the first violation, naming case and field.
std::vector<CaseManifest> load_manifest(const std::filesystem::path& path);

void save_manifest(const std::vector<CaseManifest>& cases, const std::filesystem::path& path);

}  // namespace nseg
