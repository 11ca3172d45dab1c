#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "noduleseg/pgm.hpp"
#include "noduleseg/phantom.hpp"

using namespace nseg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("nseg_phantom_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), {});
}

double region_mean(const GrayImage& img, const BinaryMask& where) {
    double sum = 0;
    size_t n = 0;
    for (size_t i = 0; i < where.bits.size(); ++i)
        if (where.bits[i]) {
            sum += img.pixels[i];
            ++n;
        }
    REQUIRE(n > 0);
    return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("same spec renders identical bytes") {
    for (auto kind : {PhantomKind::solid, PhantomKind::mGGN, PhantomKind::pGGN,
                      PhantomKind::juxtapleural, PhantomKind::vessel_attached}) {
        PhantomSpec spec;
        spec.seed = 9001;
        spec.kind = kind;
        spec.nodule_diameter_px = 16.0;
        spec.n_slices = 3;
        PhantomCase a = generate(spec), b = generate(spec);
        REQUIRE(a.slices.size() == b.slices.size());
        for (size_t i = 0; i < a.slices.size(); ++i) {
            CHECK(a.slices[i].pixels == b.slices[i].pixels);
            CHECK(a.gt_masks[i].bits == b.gt_masks[i].bits);
        }
    }
}

TEST_CASE("different seeds render different noise") {
    PhantomSpec spec;
    spec.seed = 1;
    PhantomCase a = generate(spec);
    spec.seed = 2;
    PhantomCase b = generate(spec);
    CHECK(a.slices[0].pixels != b.slices[0].pixels);
    // geometry is jittered per seed, but the analytic area stays close
    const double ra = static_cast<double>(a.gt_masks[0].count());
    const double rb = static_cast<double>(b.gt_masks[0].count());
    CHECK(ra == doctest::Approx(rb).epsilon(0.15));
}

TEST_CASE("ground-truth area tracks the analytic disk area") {
    for (double d : {10.0, 20.0, 30.0}) {
        PhantomSpec spec;
        spec.seed = 3;
        spec.nodule_diameter_px = d;
        PhantomCase ph = generate(spec);
        const double expected = std::numbers::pi * d * d / 4.0;
        const double got = static_cast<double>(ph.gt_masks[0].count());
        CHECK(got == doctest::Approx(expected).epsilon(0.10));
        CHECK(ph.diameter_mm == doctest::Approx(d * spec.spacing_mm));
    }
}

TEST_CASE("multi-slice cases taper like an ellipsoid") {
    PhantomSpec spec;
    spec.seed = 4;
    spec.nodule_diameter_px = 24.0;
    spec.n_slices = 7;
    PhantomCase ph = generate(spec);
    REQUIRE(ph.gt_masks.size() == 7);
    const size_t c = static_cast<size_t>(ph.center_index);
    for (size_t i = 0; i < 7; ++i) {
        if (i < c) CHECK(ph.gt_masks[i].count() <= ph.gt_masks[i + 1].count());
        if (i > c) CHECK(ph.gt_masks[i].count() <= ph.gt_masks[i - 1].count());
    }
    CHECK(ph.gt_masks[c].count() > ph.gt_masks[0].count());
}

TEST_CASE("rendered intensities keep the class ordering") {
    PhantomSpec spec;
    spec.seed = 6;
    spec.kind = PhantomKind::juxtapleural;
    spec.nodule_diameter_px = 16.0;
    PhantomCase ph = generate(spec);
    REQUIRE(ph.wall_masks[0].any());

    BinaryMask bg(ph.gt_masks[0].width, ph.gt_masks[0].height, true);
    for (size_t i = 0; i < bg.bits.size(); ++i)
        if (ph.gt_masks[0].bits[i] || ph.wall_masks[0].bits[i]) bg.bits[i] = 0;

    const double m_bg = region_mean(ph.slices[0], bg);
    const double m_wall = region_mean(ph.slices[0], ph.wall_masks[0]);
    const double m_nod = region_mean(ph.slices[0], ph.gt_masks[0]);
    CHECK(m_bg < m_wall);
    CHECK(m_wall < m_nod);
    CHECK(m_bg == doctest::Approx(spec.background_mean).epsilon(0.05));
}

TEST_CASE("non-pleural kinds have empty wall masks") {
    for (auto kind : {PhantomKind::solid, PhantomKind::mGGN, PhantomKind::pGGN}) {
        PhantomSpec spec;
        spec.seed = 7;
        spec.kind = kind;
        PhantomCase ph = generate(spec);
        CHECK_FALSE(ph.wall_masks[0].any());
    }
}

TEST_CASE("suite spans all nodule types and diameter bins") {
    fs::path dir = fresh_dir("suite");
    auto cases = generate_suite(41, 18, dir);
    REQUIRE(cases.size() == 18);

    std::set<NoduleType> types;
    std::set<DiameterBin> bins;
    std::set<std::string> ids;
    for (const auto& c : cases) {
        types.insert(c.nodule_type);
        bins.insert(diameter_bin(c.diameter_mm));
        CHECK(ids.insert(c.case_id).second);  // unique ids
    }
    CHECK(types.size() == 3);
    CHECK(bins.size() == 3);

    // the manifest on disk re-validates and loads cleanly
    auto loaded = load_manifest(dir / "manifest.json");
    REQUIRE(loaded.size() == cases.size());
    for (size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].case_id == cases[i].case_id);
        REQUIRE(loaded[i].slices[0].gt_mask_path.has_value());
        GrayImage img = load_gray_image(loaded[i].slices[0].image_path);
        BinaryMask gt = load_mask(*loaded[i].slices[0].gt_mask_path);
        CHECK(img.width == gt.width);
        CHECK(loaded[i].slices[0].roi_box.x1 <= img.width);
    }
}

TEST_CASE("suite generation is deterministic across directories") {
    fs::path d1 = fresh_dir("det_a"), d2 = fresh_dir("det_b");
    auto a = generate_suite(99, 6, d1);
    auto b = generate_suite(99, 6, d2);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].case_id == b[i].case_id);
        CHECK(a[i].diameter_mm == b[i].diameter_mm);
        fs::path pa = a[i].slices[0].image_path;
        fs::path pb = b[i].slices[0].image_path;
        if (pa.is_relative()) pa = d1 / pa;
        if (pb.is_relative()) pb = d2 / pb;
        CHECK(slurp(pa) == slurp(pb));
    }
}

TEST_CASE("write_case round-trips through the manifest loader") {
    PhantomSpec spec;
    spec.seed = 13;
    spec.kind = PhantomKind::mGGN;
    spec.nodule_diameter_px = 20.0;
    spec.n_slices = 3;
    PhantomCase ph = generate(spec);

    fs::path dir = fresh_dir("roundtrip");
    CaseManifest entry = write_case(ph, "rt_case", dir);
    save_manifest({entry}, dir / "manifest.json");
    auto loaded = load_manifest(dir / "manifest.json");
    REQUIRE(loaded.size() == 1);
    REQUIRE(loaded[0].slices.size() == 3);
    for (int i = 0; i < 3; ++i) {
        GrayImage img = load_gray_image(loaded[0].slices[i].image_path);
        CHECK(img.pixels == ph.slices[i].pixels);
        BinaryMask gt = load_mask(*loaded[0].slices[i].gt_mask_path);
        CHECK(gt.bits == ph.gt_masks[i].bits);
    }
    CHECK(loaded[0].center_index == ph.center_index);
    CHECK(loaded[0].nodule_type == NoduleType::mGGN);
}
