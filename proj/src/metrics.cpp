#include "noduleseg/metrics.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace nseg {

double dsc(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw std::invalid_argument("dsc: shape mismatch");
    long long inter = 0, np = 0, ng = 0;
    for (size_t i = 0; i < pred.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0, g = gt.bits[i] != 0;
        inter += p && g;
        np += p;
        ng += g;
    }
    if (np + ng == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(np + ng);
}

double nodule_dsc(const std::vector<std::pair<BinaryMask, BinaryMask>>& pred_gt_pairs) {
    if (pred_gt_pairs.empty()) throw std::invalid_argument("nodule_dsc: no labeled slices");
    long long inter = 0, np = 0, ng = 0;
    for (const auto& [pred, gt] : pred_gt_pairs) {
        if (pred.width != gt.width || pred.height != gt.height)
            throw std::invalid_argument("nodule_dsc: shape mismatch");
        for (size_t i = 0; i < pred.bits.size(); ++i) {
            const bool p = pred.bits[i] != 0, g = gt.bits[i] != 0;
            inter += p && g;
            np += p;
            ng += g;
        }
    }
    if (np + ng == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(np + ng);
}

StratifiedReport build_report(std::vector<CaseScore> cases) {
    StratifiedReport rep;
    rep.cases = std::move(cases);

    auto mean_of = [](const std::vector<double>& v) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    std::vector<double> all;
    std::map<NoduleType, std::vector<double>> per_type;
    std::map<DiameterBin, std::vector<double>> per_bin;
    for (const CaseScore& c : rep.cases) {
        all.push_back(c.dsc);
        per_type[c.nodule_type].push_back(c.dsc);
        per_bin[diameter_bin(c.diameter_mm)].push_back(c.dsc);
    }

    rep.avg = mean_of(all);
    for (NoduleType t : {NoduleType::solid, NoduleType::mGGN, NoduleType::pGGN})
        rep.by_type[t] = mean_of(per_type[t]);
    for (DiameterBin b :
         {DiameterBin::under_10, DiameterBin::from_10_to_20, DiameterBin::over_20})
        rep.by_diameter[b] = mean_of(per_bin[b]);
    return rep;
}

namespace {

std::string cell(const std::optional<double>& v) {
    if (!v) return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << *v;
    return os.str();
}

}  // namespace

std::string StratifiedReport::to_table() const {
    const std::vector<std::pair<std::string, std::optional<double>>> cols = {
        {"Avg.", avg},
        {"Solid", by_type.at(NoduleType::solid)},
        {"mGGN", by_type.at(NoduleType::mGGN)},
        {"pGGN", by_type.at(NoduleType::pGGN)},
        {"(0,10)", by_diameter.at(DiameterBin::under_10)},
        {"[10,20)", by_diameter.at(DiameterBin::from_10_to_20)},
        {"[20,inf)mm", by_diameter.at(DiameterBin::over_20)},
    };
    std::ostringstream head, row;
    for (const auto& [name, v] : cols) {
        head << std::setw(12) << name;
        row << std::setw(12) << cell(v);
    }
    return head.str() + "\n" + row.str() + "\n";
}

std::string StratifiedReport::to_json() const {
    nlohmann::json j;
    j["avg"] = avg ? nlohmann::json(*avg) : nlohmann::json(nullptr);
    for (const auto& [t, v] : by_type)
        j["by_type"][to_string(t)] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    for (const auto& [b, v] : by_diameter)
        j["by_diameter"][to_string(b)] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    j["cases"] = nlohmann::json::array();
    for (const CaseScore& c : cases) {
        nlohmann::json jc;
        jc["case_id"] = c.case_id;
        jc["nodule_type"] = to_string(c.nodule_type);
        jc["diameter_mm"] = c.diameter_mm;
        jc["dsc"] = c.dsc;
        jc["per_slice"] = nlohmann::json::array();
        for (auto [idx, d] : c.per_slice) jc["per_slice"].push_back({{"slice", idx}, {"dsc", d}});
        j["cases"].push_back(std::move(jc));
    }
    return j.dump(2);
}

}  // namespace nseg
