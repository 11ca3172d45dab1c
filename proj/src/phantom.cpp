#include "noduleseg/phantom.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "noduleseg/pgm.hpp"

namespace nseg {

PhantomKind phantom_kind_from_string(const std::string& s) {
    if (s == "solid") return PhantomKind::solid;
    if (s == "mGGN") return PhantomKind::mGGN;
    if (s == "pGGN") return PhantomKind::pGGN;
    if (s == "juxtapleural") return PhantomKind::juxtapleural;
    if (s == "vessel_attached") return PhantomKind::vessel_attached;
    throw std::invalid_argument("unknown phantom kind \"" + s + "\"");
}

std::string to_string(PhantomKind k) {
    switch (k) {
        case PhantomKind::solid: return "solid";
        case PhantomKind::mGGN: return "mGGN";
        case PhantomKind::pGGN: return "pGGN";
        case PhantomKind::juxtapleural: return "juxtapleural";
        case PhantomKind::vessel_attached: return "vessel_attached";
    }
    return "?";
}

void PhantomSpec::validate() const {
    if (!(solid_mean > halo_mean && halo_mean > background_mean))
        throw std::invalid_argument("phantom: means must order background < halo < solid");
    if (!(wall_mean > halo_mean)) throw std::invalid_argument("phantom: wall must exceed halo");
    if (nodule_diameter_px <= 0 || nodule_diameter_px >= box_size)
        throw std::invalid_argument("phantom: diameter must be in (0, box_size)");
    if (box_size < 16) throw std::invalid_argument("phantom: box_size too small");
    if (n_slices < 1) throw std::invalid_argument("phantom: n_slices must be >= 1");
    if (spacing_mm <= 0) throw std::invalid_argument("phantom: spacing must be > 0");
}

namespace {

uint64_t mix(uint64_t a, uint64_t b) {
    // splitmix64 over the combined key
    uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint16_t clamp_u16(double v) {
    return static_cast<uint16_t>(std::clamp(v, 0.0, 65535.0));
}

// Pixel-class labels, later materialized as intensities + noise.
enum class Cls : uint8_t { background, halo, wall, solid };

struct Canvas {
    int size;
    std::vector<Cls> cls;
    std::vector<double> boost;  // additive brightness (pGGN radial gradient)

    explicit Canvas(int n) : size(n), cls(static_cast<size_t>(n) * n, Cls::background),
                             boost(static_cast<size_t>(n) * n, 0.0) {}
    Cls& at(int x, int y) { return cls[static_cast<size_t>(y) * size + x]; }
};

void paint_disk(Canvas& c, double cx, double cy, double r, Cls label) {
    for (int y = 0; y < c.size; ++y)
        for (int x = 0; x < c.size; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) c.at(x, y) = label;
        }
}

}  // namespace

PhantomCase generate(const PhantomSpec& spec) {
    spec.validate();
    PhantomCase out;
    out.spec = spec;
    out.center_index = spec.n_slices / 2;
    out.diameter_mm = spec.nodule_diameter_px * spec.spacing_mm;

    const int n = spec.box_size;
    const double r_eq = spec.nodule_diameter_px / 2.0;

    // Geometry choices shared by all slices of the case.
    std::mt19937_64 rng(mix(spec.seed, 0x7048616e746f6dULL));
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);

    double cx = n / 2.0 + jitter(rng) * n / 10.0;
    double cy = n / 2.0 + jitter(rng) * n / 10.0;

    // Juxtapleural wall: complement of a large disk whose arc bulges into
    // the crop from the left; the lung side stays convex.
    const double wall_thickness = n * 0.38;
    const double wall_radius = 1.5 * n;
    const double wall_cx = wall_radius + wall_thickness;
    const double wall_cy = n / 2.0;
    if (spec.kind == PhantomKind::juxtapleural) {
        // tangent to the wall arc from inside the lung
        cx = wall_thickness + r_eq;
        cy = n / 2.0 + jitter(rng) * n / 12.0;
    }
    const double vessel_angle = jitter(rng) * std::numbers::pi;

    // semi-axis in slice units; top/bottom slices stay nonempty
    const double half_span = (spec.n_slices - 1) / 2.0;
    const double c_axis = spec.n_slices == 1 ? 1.0 : half_span * 1.3;

    for (int k = 0; k < spec.n_slices; ++k) {
        const double z = k - out.center_index;
        const double scale2 = 1.0 - (z * z) / (c_axis * c_axis);
        const double r = scale2 > 0 ? r_eq * std::sqrt(scale2) : 0.0;

        Canvas canvas(n);
        if (spec.kind == PhantomKind::juxtapleural) {
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    const double dx = x - wall_cx, dy = y - wall_cy;
                    if (dx * dx + dy * dy > wall_radius * wall_radius)
                        canvas.at(x, y) = Cls::wall;
                }
        }

        BinaryMask gt(n, n);
        if (r > 0.5) {
            switch (spec.kind) {
                case PhantomKind::solid:
                case PhantomKind::juxtapleural:
                    paint_disk(canvas, cx, cy, r, Cls::solid);
                    break;
                case PhantomKind::vessel_attached: {
                    paint_disk(canvas, cx, cy, r, Cls::solid);
                    // bright polyline leaving the nodule, 2 px wide
                    const double vx = std::cos(vessel_angle), vy = std::sin(vessel_angle);
                    for (double t = r * 0.8; t < n; t += 0.5) {
                        const int px = static_cast<int>(std::lround(cx + vx * t));
                        const int py = static_cast<int>(std::lround(cy + vy * t));
                        for (int dy = 0; dy <= 1; ++dy)
                            for (int dx = 0; dx <= 1; ++dx) {
                                const int qx = px + dx, qy = py + dy;
                                if (qx >= 0 && qx < n && qy >= 0 && qy < n &&
                                    canvas.at(qx, qy) == Cls::background)
                                    canvas.at(qx, qy) = Cls::wall;  // vessel brightness
                            }
                    }
                    break;
                }
                case PhantomKind::mGGN:
                    paint_disk(canvas, cx, cy, r, Cls::halo);
                    paint_disk(canvas, cx, cy, r * 0.55, Cls::solid);
                    break;
                case PhantomKind::pGGN: {
                    // faint rim rising steeply toward a denser center; no
                    // discrete solid core
                    const double rim = spec.background_mean + 0.4 * (spec.halo_mean - spec.background_mean);
                    for (int y = 0; y < n; ++y)
                        for (int x = 0; x < n; ++x) {
                            const double dx = x - cx, dy = y - cy;
                            const double d2 = dx * dx + dy * dy;
                            if (d2 <= r * r) {
                                canvas.at(x, y) = Cls::halo;
                                const double frac = 1.0 - std::sqrt(d2) / r;
                                canvas.boost[static_cast<size_t>(y) * n + x] =
                                    rim - spec.halo_mean +
                                    frac * frac * frac * (spec.solid_mean - rim);
                            }
                        }
                    break;
                }
            }
            // exact analytic ground truth: the nodule disk (halo included for
            // GGN kinds), wall excluded
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    const double dx = x - cx, dy = y - cy;
                    const Cls c = canvas.at(x, y);
                    if (dx * dx + dy * dy <= r * r && c != Cls::wall) gt.set(x, y, true);
                }
        }

        // materialize intensities; noise keyed on (seed, slice)
        std::mt19937_64 nrng(mix(mix(spec.seed, 0x6e6f697365ULL), static_cast<uint64_t>(k)));
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        GrayImage img(n, n);
        img.spacing_mm = {spec.spacing_mm, spec.spacing_mm};
        BinaryMask wall(n, n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                double mean = spec.background_mean;
                switch (canvas.at(x, y)) {
                    case Cls::background: break;
                    case Cls::halo: mean = spec.halo_mean; break;
                    case Cls::wall: mean = spec.wall_mean; break;
                    case Cls::solid: mean = spec.solid_mean; break;
                }
                mean += canvas.boost[static_cast<size_t>(y) * n + x];
                img.at(x, y) = clamp_u16(mean + noise(nrng));
                if (spec.kind == PhantomKind::juxtapleural && canvas.at(x, y) == Cls::wall)
                    wall.set(x, y, true);
            }

        out.slices.push_back(std::move(img));
        out.gt_masks.push_back(std::move(gt));
        out.wall_masks.push_back(std::move(wall));
        out.roi_boxes.push_back(BBox{0, 0, n, n});
    }
    return out;
}

CaseManifest write_case(const PhantomCase& c, const std::string& case_id,
                        const std::filesystem::path& out_dir) {
    const auto case_dir = out_dir / case_id;
    std::filesystem::create_directories(case_dir);

    CaseManifest m;
    m.case_id = case_id;
    m.diameter_mm = c.diameter_mm;
    m.center_index = c.center_index;
    m.spacing_mm = {c.spec.spacing_mm, c.spec.spacing_mm};
    switch (c.spec.kind) {
        case PhantomKind::mGGN: m.nodule_type = NoduleType::mGGN; break;
        case PhantomKind::pGGN: m.nodule_type = NoduleType::pGGN; break;
        default: m.nodule_type = NoduleType::solid; break;
    }

    for (size_t k = 0; k < c.slices.size(); ++k) {
        const std::string img_rel = case_id + "/slice_" + std::to_string(k) + ".pgm";
        const std::string gt_rel = case_id + "/gt_" + std::to_string(k) + ".pgm";
        save_gray_image(c.slices[k], out_dir / img_rel);
        save_mask(c.gt_masks[k], out_dir / gt_rel);
        if (c.wall_masks[k].any())
            save_mask(c.wall_masks[k], out_dir / (case_id + "/wall_" + std::to_string(k) + ".pgm"));
        SliceEntry e;
        e.image_path = img_rel;
        e.gt_mask_path = gt_rel;
        e.roi_box = c.roi_boxes[k];
        m.slices.push_back(std::move(e));
    }
    return m;
}

std::vector<CaseManifest> generate_suite(uint64_t seed, int n,
                                         const std::filesystem::path& out_dir) {
    if (n < 1) throw std::invalid_argument("generate_suite: n must be >= 1");
    std::filesystem::create_directories(out_dir);

    static constexpr PhantomKind kinds[] = {PhantomKind::solid, PhantomKind::mGGN,
                                            PhantomKind::pGGN, PhantomKind::juxtapleural,
                                            PhantomKind::vessel_attached};
    // diameter ranges per Table-1 bin, in mm at the nominal spacing
    static constexpr double bin_lo[] = {6.0, 10.0, 20.0};
    static constexpr double bin_hi[] = {9.8, 19.5, 24.0};

    std::vector<CaseManifest> cases;
    for (int i = 0; i < n; ++i) {
        PhantomSpec spec;
        spec.seed = mix(seed, static_cast<uint64_t>(i));
        spec.kind = kinds[i % 5];
        const int bin = (i / 5) % 3;
        std::mt19937_64 rng(mix(spec.seed, 0x6469616dULL));
        std::uniform_real_distribution<double> u(bin_lo[bin], bin_hi[bin]);
        const double diameter_mm = u(rng);
        spec.nodule_diameter_px = diameter_mm / spec.spacing_mm;
        spec.box_size = 64;

        char buf[16];
        std::snprintf(buf, sizeof buf, "case_%04d", i);
        cases.push_back(write_case(generate(spec), buf, out_dir));
    }

    // manifest paths are already relative to out_dir
    save_manifest(cases, out_dir / "manifest.json");
    return cases;
}

}  // namespace nseg
