#include "noduleseg/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "noduleseg/pgm.hpp"

namespace nseg {

using nlohmann::json;

NoduleType nodule_type_from_string(const std::string& s) {
    if (s == "solid") return NoduleType::solid;
    if (s == "mGGN") return NoduleType::mGGN;
    if (s == "pGGN") return NoduleType::pGGN;
    throw ManifestError("unknown nodule_type \"" + s + "\"");
}

std::string to_string(NoduleType t) {
    switch (t) {
        case NoduleType::solid: return "solid";
        case NoduleType::mGGN: return "mGGN";
        case NoduleType::pGGN: return "pGGN";
    }
    return "?";
}

DiameterBin diameter_bin(double diameter_mm) {
    if (diameter_mm < 10.0) return DiameterBin::under_10;
    if (diameter_mm < 20.0) return DiameterBin::from_10_to_20;
    return DiameterBin::over_20;
}

std::string to_string(DiameterBin b) {
    switch (b) {
        case DiameterBin::under_10: return "(0,10)";
        case DiameterBin::from_10_to_20: return "[10,20)";
        case DiameterBin::over_20: return "[20,inf)";
    }
    return "?";
}

namespace {

[[noreturn]] void reject(const std::string& case_id, const std::string& field,
                         const std::string& what) {
    throw ManifestError("manifest: case \"" + case_id + "\", field \"" + field + "\": " + what);
}

BBox parse_box(const json& j, const std::string& case_id, const std::string& field) {
    if (!j.is_array() || j.size() != 4) reject(case_id, field, "expected [x0,y0,x1,y1]");
    BBox b{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
    if (b.empty() || b.x0 < 0 || b.y0 < 0) reject(case_id, field, "degenerate or negative box");
    return b;
}

}  // namespace

std::vector<CaseManifest> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ManifestError("manifest " + path.string() + ": " + e.what());
    }
    if (!root.is_array()) throw ManifestError("manifest root must be a JSON array of cases");

    const auto base = path.parent_path();
    std::vector<CaseManifest> cases;
    for (const json& jc : root) {
        CaseManifest c;
        if (!jc.contains("case_id")) throw ManifestError("manifest: case missing \"case_id\"");
        c.case_id = jc.at("case_id").get<std::string>();

        if (!jc.contains("nodule_type")) reject(c.case_id, "nodule_type", "missing");
        c.nodule_type = nodule_type_from_string(jc.at("nodule_type").get<std::string>());

        if (!jc.contains("diameter_mm")) reject(c.case_id, "diameter_mm", "missing");
        c.diameter_mm = jc.at("diameter_mm").get<double>();
        if (!(c.diameter_mm > 0.0)) reject(c.case_id, "diameter_mm", "must be positive");

        if (jc.contains("spacing_mm")) {
            const json& js = jc.at("spacing_mm");
            if (!js.is_array() || js.size() != 2) reject(c.case_id, "spacing_mm", "expected [dx,dy]");
            c.spacing_mm = {js[0].get<double>(), js[1].get<double>()};
            if (c.spacing_mm->first <= 0.0 || c.spacing_mm->second <= 0.0)
                reject(c.case_id, "spacing_mm", "entries must be > 0");
        }

        if (!jc.contains("slices") || !jc.at("slices").is_array() || jc.at("slices").empty())
            reject(c.case_id, "slices", "missing or empty");
        for (const json& js : jc.at("slices")) {
            SliceEntry s;
            if (!js.contains("image")) reject(c.case_id, "slices.image", "missing");
            s.image_path = base / js.at("image").get<std::string>();
            s.roi_box = parse_box(js.at("roi_box"), c.case_id, "slices.roi_box");
            if (js.contains("gt_mask") && !js.at("gt_mask").is_null())
                s.gt_mask_path = base / js.at("gt_mask").get<std::string>();

            GrayImage img = load_gray_image(s.image_path);
            if (!img.bounds().contains(s.roi_box))
                reject(c.case_id, "slices.roi_box", "exceeds image bounds of " + s.image_path.string());
            c.slices.push_back(std::move(s));
        }

        c.center_index = jc.value("center_index", 0);
        if (c.center_index < 0 || c.center_index >= static_cast<int>(c.slices.size()))
            reject(c.case_id, "center_index", "out of range");
        cases.push_back(std::move(c));
    }
    return cases;
}

void save_manifest(const std::vector<CaseManifest>& cases, const std::filesystem::path& path) {
    json root = json::array();
    for (const CaseManifest& c : cases) {
        json jc;
        jc["case_id"] = c.case_id;
        jc["nodule_type"] = to_string(c.nodule_type);
        jc["diameter_mm"] = c.diameter_mm;
        jc["center_index"] = c.center_index;
        if (c.spacing_mm) jc["spacing_mm"] = {c.spacing_mm->first, c.spacing_mm->second};
        jc["slices"] = json::array();
        for (const SliceEntry& s : c.slices) {
            json js;
            js["image"] = s.image_path.generic_string();
            js["roi_box"] = {s.roi_box.x0, s.roi_box.y0, s.roi_box.x1, s.roi_box.y1};
            if (s.gt_mask_path) js["gt_mask"] = s.gt_mask_path->generic_string();
            jc["slices"].push_back(std::move(js));
        }
        root.push_back(std::move(jc));
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << root.dump(2) << "\n";
}

}  // namespace nseg
