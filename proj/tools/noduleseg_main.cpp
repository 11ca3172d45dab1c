#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "noduleseg/manifest.hpp"
#include "noduleseg/metrics.hpp"
#include "noduleseg/pgm.hpp"
#include "noduleseg/phantom.hpp"
#include "noduleseg/pipeline.hpp"
#include "noduleseg/volume.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nseg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCaseErrors = 1;
constexpr int kExitUsage = 2;

void apply_config_file(PipelineConfig& cfg, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    json j = json::parse(in);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.s_m = j.value("s_m", cfg.s_m);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.rho = j.value("rho", cfg.rho);
    cfg.tau = j.value("tau", cfg.tau);
    cfg.margin = j.value("margin", cfg.margin);
    cfg.se_radius = j.value("se_radius", cfg.se_radius);
    cfg.ggo_stop_enabled = j.value("ggo_stop", cfg.ggo_stop_enabled);
    if (j.contains("method"))
        cfg.coarse_method = j.at("method").get<std::string>() == "plain"
                                ? CoarseMethod::plain_threshold
                                : CoarseMethod::deformable;
}

json trace_to_json(const CorrectionTrace& t) {
    json j;
    j["stop_reason"] = to_string(t.stop_reason);
    j["iterations"] = json::array();
    for (const auto& s : t.steps)
        j["iterations"].push_back({{"box", {s.box.x0, s.box.y0, s.box.x1, s.box.y1}},
                                   {"contour_area", s.contour_area}});
    return j;
}

struct SegmentArgs {
    fs::path manifest_path;
    fs::path output_dir;
    fs::path config_path;
    std::string method;
    bool dump_stages = false;
    bool no_3d = false;
    int jobs = 1;
    PipelineConfig cfg;
};

int run_case(const CaseManifest& c, const SegmentArgs& args) {
    SliceStack stack;
    stack.center_index = c.center_index;
    for (const SliceEntry& s : c.slices) stack.slices.push_back({load_gray_image(s.image_path), s.roi_box});

    StackResult result;
    try {
        result = args.no_3d ? segment_stack_independent(stack, args.cfg)
                            : segment_stack(stack, args.cfg);
    } catch (const SegmentationFailure&) {
        result.slices.clear();
        // all-empty predictions; the case still scores
        for (const SliceInput& s : stack.slices) {
            SliceResult sr;
            sr.box = s.roi_box;
            sr.final_mask = BinaryMask(s.image.width, s.image.height);
            result.slices.push_back(std::move(sr));
        }
    }

    const fs::path case_dir = args.output_dir / c.case_id;
    fs::create_directories(case_dir);
    json traces = json::array();
    for (size_t k = 0; k < result.slices.size(); ++k) {
        const SliceResult& sr = result.slices[k];
        BinaryMask pred = sr.final_mask.bits.empty()
                              ? BinaryMask(stack.slices[k].image.width, stack.slices[k].image.height)
                              : sr.final_mask;
        save_mask(pred, case_dir / ("pred_" + std::to_string(k) + ".pgm"));
        json jt = trace_to_json(sr.trace);
        jt["slice"] = k;
        jt["segmented"] = sr.contour.has_value();
        traces.push_back(std::move(jt));

        if (args.dump_stages && !sr.pleural.binarized.bits.empty()) {
            auto stage = [&](const char* name, const BinaryMask& m) {
                save_mask(m, case_dir / (std::to_string(k) + "_" + name + ".pgm"));
            };
            stage("01_binarized", sr.pleural.binarized);
            stage("02_wall_removed", sr.pleural.kept);
            stage("03_coarse", sr.coarse_mask);
            stage("04_denoised", sr.denoised_mask);
            stage("05_final", sr.final_mask);
        }
    }
    std::ofstream out(case_dir / "trace.json");
    out << traces.dump(2) << "\n";
    return 0;
}

int cmd_segment(SegmentArgs& args) {
    auto cases = load_manifest(args.manifest_path);
    fs::create_directories(args.output_dir);

    std::atomic<size_t> next{0};
    std::atomic<int> errors{0};
    std::mutex log_mu;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cases.size()) return;
            try {
                run_case(cases[i], args);
            } catch (const std::exception& e) {
                std::scoped_lock lk(log_mu);
                std::cerr << "case " << cases[i].case_id << ": " << e.what() << "\n";
                ++errors;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < args.jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::cout << "segmented " << cases.size() - errors << "/" << cases.size() << " cases into "
              << args.output_dir.string() << "\n";
    return errors ? kExitCaseErrors : kExitOk;
}

int cmd_eval(const fs::path& pred_dir, const fs::path& manifest_path, const fs::path& report_path) {
    auto cases = load_manifest(manifest_path);
    std::vector<CaseScore> scores;
    std::vector<std::string> missing;

    for (const CaseManifest& c : cases) {
        std::vector<std::pair<BinaryMask, BinaryMask>> pairs;
        CaseScore sc;
        sc.case_id = c.case_id;
        sc.nodule_type = c.nodule_type;
        sc.diameter_mm = c.diameter_mm;
        bool ok = true;
        for (size_t k = 0; k < c.slices.size(); ++k) {
            if (!c.slices[k].gt_mask_path) continue;  // unlabeled slice
            const fs::path pred_path = pred_dir / c.case_id / ("pred_" + std::to_string(k) + ".pgm");
            if (!fs::exists(pred_path)) {
                missing.push_back(pred_path.string());
                ok = false;
                continue;
            }
            BinaryMask pred = load_mask(pred_path);
            BinaryMask gt = load_mask(*c.slices[k].gt_mask_path);
            sc.per_slice.emplace_back(static_cast<int>(k), dsc(pred, gt));
            pairs.emplace_back(std::move(pred), std::move(gt));
        }
        if (!ok || pairs.empty()) continue;
        sc.dsc = nodule_dsc(pairs);
        scores.push_back(std::move(sc));
    }

    if (!missing.empty()) {
        for (const auto& m : missing) std::cerr << "missing prediction: " << m << "\n";
        return kExitCaseErrors;
    }
    if (scores.empty()) {
        std::cerr << "no labeled cases to evaluate\n";
        return kExitCaseErrors;
    }

    StratifiedReport rep = build_report(std::move(scores));
    std::cout << rep.to_table();
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << rep.to_json() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarse-to-fine morphological segmentation of pulmonary-nodule ROI crops"};
    app.require_subcommand(1);

    SegmentArgs seg;
    auto* s = app.add_subcommand("segment", "run the pipeline over a manifest");
    s->add_option("--manifest", seg.manifest_path, "JSON case manifest")->required();
    s->add_option("--out", seg.output_dir, "output directory")->required();
    s->add_option("--config", seg.config_path, "pipeline config JSON");
    s->add_option("--method", seg.method, "coarse method: plain | deformable");
    s->add_flag("--dump-stages", seg.dump_stages, "write per-stage masks and traces");
    s->add_flag("--no-3d", seg.no_3d, "disable slice-to-slice box propagation");
    s->add_option("--jobs", seg.jobs, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--alpha", seg.cfg.alpha, "max dividing-line length (px)");
    s->add_option("--s-m", seg.cfg.s_m, "minimum nodule area (px)");
    s->add_option("--epsilon", seg.cfg.epsilon, "box-shrink stop factor");
    s->add_option("--rho", seg.cfg.rho, "converged nodule-pixel proportion");
    s->add_option("--tau", seg.cfg.tau, "ground-glass evenness CV threshold");
    s->add_option("--margin", seg.cfg.margin, "3D box inheritance margin (px)");
    auto* ggo_off = s->add_flag("--no-ggo-stop", "disable the ground-glass evenness stop");

    fs::path eval_pred, eval_manifest, eval_report;
    auto* e = app.add_subcommand("eval", "stratified DSC report for existing predictions");
    e->add_option("--pred", eval_pred, "prediction directory from segment")->required();
    e->add_option("--manifest", eval_manifest, "JSON case manifest")->required();
    e->add_option("--report", eval_report, "write machine-readable report JSON here");

    uint64_t ph_seed = 42;
    int ph_n = 100;
    fs::path ph_out;
    auto* p = app.add_subcommand("phantom", "generate a synthetic phantom suite");
    p->add_option("--seed", ph_seed, "generator seed");
    p->add_option("--n", ph_n, "number of cases")->check(CLI::PositiveNumber);
    p->add_option("--out", ph_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kExitUsage;
    }

    try {
        if (s->parsed()) {
            if (!seg.config_path.empty()) {
                // precedence: CLI flag > config file > defaults
                PipelineConfig file_cfg;
                apply_config_file(file_cfg, seg.config_path);
                auto unset = [&](const char* name) { return s->get_option(name)->count() == 0; };
                if (unset("--alpha")) seg.cfg.alpha = file_cfg.alpha;
                if (unset("--s-m")) seg.cfg.s_m = file_cfg.s_m;
                if (unset("--epsilon")) seg.cfg.epsilon = file_cfg.epsilon;
                if (unset("--rho")) seg.cfg.rho = file_cfg.rho;
                if (unset("--tau")) seg.cfg.tau = file_cfg.tau;
                if (unset("--margin")) seg.cfg.margin = file_cfg.margin;
                seg.cfg.se_radius = file_cfg.se_radius;
                if (seg.method.empty()) seg.cfg.coarse_method = file_cfg.coarse_method;
                seg.cfg.ggo_stop_enabled = file_cfg.ggo_stop_enabled;
            }
            if (!seg.method.empty())
                seg.cfg.coarse_method = seg.method == "plain" ? CoarseMethod::plain_threshold
                                                              : CoarseMethod::deformable;
            if (ggo_off->count() > 0) seg.cfg.ggo_stop_enabled = false;
            seg.cfg.validate();
            return cmd_segment(seg);
        }
        if (e->parsed()) return cmd_eval(eval_pred, eval_manifest, eval_report);
        if (p->parsed()) {
            generate_suite(ph_seed, ph_n, ph_out);
            std::cout << "wrote " << ph_n << " cases to " << ph_out.string() << "\n";
            return kExitOk;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitCaseErrors;
    }
    return kExitUsage;
}
