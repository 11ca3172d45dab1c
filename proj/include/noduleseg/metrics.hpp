#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noduleseg/image.hpp"
#include "noduleseg/manifest.hpp"

namespace nseg {

/// Dice similarity coefficient 2|P∩G| / (|P|+|G|); both masks empty -> 1.0.
double dsc(const BinaryMask& pred, const BinaryMask& gt);

/// Volumetric per-nodule DSC: intersections and sizes are summed over all
/// labeled slices before taking the ratio.
double nodule_dsc(const std::vector<std::pair<BinaryMask, BinaryMask>>& pred_gt_pairs);

struct CaseScore {
    std::string case_id;
    NoduleType nodule_type = NoduleType::solid;
    double diameter_mm = 0.0;
    double dsc = 0.0;
    std::vector<std::pair<int, double>> per_slice;  // (slice_index, dsc), audit trail
};

/// Mean-DSC table in the layout: Avg, Solid, mGGN, pGGN, (0,10), [10,20),
/// [20,inf) mm. Empty strata render as "n/a".
struct StratifiedReport {
    std::optional<double> avg;
    std::map<NoduleType, std::optional<double>> by_type;
    std::map<DiameterBin, std::optional<double>> by_diameter;
    std::vector<CaseScore> cases;

    std::string to_table() const;
    std::string to_json() const;
};

StratifiedReport build_report(std::vector<CaseScore> cases);

}  // namespace nseg
