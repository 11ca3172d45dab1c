#include <doctest.h>

#include <random>

#include "noduleseg/metrics.hpp"

using namespace nseg;

namespace {

// Set-based oracle computed from explicit pixel sets.
double dsc_oracle(const BinaryMask& a, const BinaryMask& b) {
    size_t inter = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.bits.size(); ++i) {
        na += a.bits[i] != 0;
        nb += b.bits[i] != 0;
        inter += (a.bits[i] && b.bits[i]) ? 1 : 0;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

BinaryMask mask_of(int w, int h, std::initializer_list<std::pair<int, int>> pts) {
    BinaryMask m(w, h);
    for (auto [x, y] : pts) m.set(x, y, true);
    return m;
}

}  // namespace

TEST_CASE("dsc on hand-computed examples") {
    BinaryMask a = mask_of(4, 4, {{0, 0}, {1, 0}});
    BinaryMask b = mask_of(4, 4, {{1, 0}, {2, 0}});
    CHECK(dsc(a, b) == doctest::Approx(0.5));  // 2*1/(2+2)
    CHECK(dsc(a, a) == doctest::Approx(1.0));
    CHECK(dsc(a, mask_of(4, 4, {{3, 3}})) == doctest::Approx(0.0));
}

TEST_CASE("dsc of two empty masks is 1, one empty is 0") {
    BinaryMask e(4, 4), f = mask_of(4, 4, {{0, 0}});
    CHECK(dsc(e, e) == doctest::Approx(1.0));
    CHECK(dsc(e, f) == doctest::Approx(0.0));
    CHECK(dsc(f, e) == doctest::Approx(0.0));
}

TEST_CASE("dsc matches the set oracle and is symmetric") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        BinaryMask a(10, 10), b(10, 10);
        for (auto& v : a.bits) v = (rng() % 100) < 30;
        for (auto& v : b.bits) v = (rng() % 100) < 30;
        const double d = dsc(a, b);
        CHECK(d == doctest::Approx(dsc_oracle(a, b)).epsilon(1e-12));
        CHECK(d == doctest::Approx(dsc(b, a)).epsilon(1e-12));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}

TEST_CASE("nodule_dsc sums over slices before dividing") {
    // slice 1: |P|=4 |G|=4 |P∩G|=2; slice 2: |P|=2 |G|=0 |P∩G|=0
    // volumetric: 2*2 / (6+4) = 0.4, not the per-slice mean
    BinaryMask p1 = mask_of(4, 4, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    BinaryMask g1 = mask_of(4, 4, {{2, 0}, {3, 0}, {0, 1}, {1, 1}});
    BinaryMask p2 = mask_of(4, 4, {{0, 3}, {1, 3}});
    BinaryMask g2(4, 4);
    CHECK(nodule_dsc({{p1, g1}, {p2, g2}}) == doctest::Approx(0.4));
    CHECK(nodule_dsc({{p1, g1}}) == doctest::Approx(0.5));
}

TEST_CASE("diameter bins split at 10 and 20 mm") {
    CHECK(diameter_bin(3.0) == DiameterBin::under_10);
    CHECK(diameter_bin(9.999) == DiameterBin::under_10);
    CHECK(diameter_bin(10.0) == DiameterBin::from_10_to_20);
    CHECK(diameter_bin(19.999) == DiameterBin::from_10_to_20);
    CHECK(diameter_bin(20.0) == DiameterBin::over_20);
    CHECK(diameter_bin(45.0) == DiameterBin::over_20);
}

TEST_CASE("report averages per stratum and marks empty strata") {
    std::vector<CaseScore> cases;
    cases.push_back({"a", NoduleType::solid, 8.0, 0.8, {}});
    cases.push_back({"b", NoduleType::solid, 15.0, 0.6, {}});
    cases.push_back({"c", NoduleType::mGGN, 25.0, 0.7, {}});

    StratifiedReport rep = build_report(cases);
    REQUIRE(rep.avg.has_value());
    CHECK(*rep.avg == doctest::Approx(0.7));
    CHECK(*rep.by_type.at(NoduleType::solid) == doctest::Approx(0.7));
    CHECK(*rep.by_type.at(NoduleType::mGGN) == doctest::Approx(0.7));
    CHECK_FALSE(rep.by_type.at(NoduleType::pGGN).has_value());
    CHECK(*rep.by_diameter.at(DiameterBin::under_10) == doctest::Approx(0.8));
    CHECK(*rep.by_diameter.at(DiameterBin::from_10_to_20) == doctest::Approx(0.6));
    CHECK(*rep.by_diameter.at(DiameterBin::over_20) == doctest::Approx(0.7));

    const std::string table = rep.to_table();
    CHECK(table.find("n/a") != std::string::npos);  // pGGN column empty
    CHECK(table.find("0.700") != std::string::npos);
}

TEST_CASE("empty report renders every stratum as n/a") {
    StratifiedReport rep = build_report({});
    CHECK_FALSE(rep.avg.has_value());
    const std::string table = rep.to_table();
    CHECK(table.find("n/a") != std::string::npos);
}

TEST_CASE("report json round-trips the per-case scores") {
    std::vector<CaseScore> cases;
    cases.push_back({"case_x", NoduleType::pGGN, 12.5, 0.875, {{0, 0.9}, {1, 0.85}}});
    StratifiedReport rep = build_report(cases);
    const std::string j = rep.to_json();
    CHECK(j.find("case_x") != std::string::npos);
    CHECK(j.find("0.875") != std::string::npos);
}
