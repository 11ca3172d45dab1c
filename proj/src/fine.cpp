#include "noduleseg/fine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <unordered_set>

namespace nseg {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::box_converged: return "box_converged";
        case StopReason::min_size_guard: return "min_size_guard";
        case StopReason::ggo_evenness: return "ggo_evenness";
        case StopReason::max_iter: return "max_iter";
    }
    return "unknown";
}

namespace {

struct Candidate {
    double d;
    std::pair<int, int> p, q;
    bool operator<(const Candidate& o) const {
        if (d != o.d) return d < o.d;
        if (p != o.p) return p < o.p;
        return q < o.q;
    }
};

// One removal pass. Returns the surviving pixel set, or nullopt at fixpoint.
std::optional<std::vector<int>> remove_one_piece(const std::vector<int>& pixels, int w, int h,
                                                 const PipelineConfig& cfg) {
    Region cur = region_from_pixels(w, h, pixels);
    BinaryMask mask = cur.to_mask();

    std::vector<Candidate> candidates;
    const double alpha = static_cast<double>(cfg.alpha);
    for (size_t a = 0; a + 1 < cur.boundary.size(); ++a) {
        const int pi = cur.boundary[a];
        const int px = pi % w, py = pi / w;
        for (size_t b = a + 1; b < cur.boundary.size(); ++b) {
            const int qi = cur.boundary[b];
            const int qx = qi % w, qy = qi / w;
            const double dx = qx - px, dy = qy - py;
            const double d2 = dx * dx + dy * dy;
            if (d2 >= alpha * alpha) continue;
            Candidate c{std::sqrt(d2), {px, py}, {qx, qy}};
            if (c.q < c.p) std::swap(c.p, c.q);
            candidates.push_back(c);
        }
    }
    std::sort(candidates.begin(), candidates.end());

    const int ccx = static_cast<int>(std::lround(cur.cx));
    const int ccy = static_cast<int>(std::lround(cur.cy));

    for (const Candidate& c : candidates) {
        const auto chord = rasterize_segment(c.p, c.q);
        bool interior = true;
        for (auto [x, y] : chord)
            if (!mask.get(x, y)) {
                interior = false;
                break;
            }
        if (!interior) continue;

        BinaryMask split = mask;
        for (auto [x, y] : chord) split.set(x, y, false);
        auto pieces = connected_components(split);
        if (pieces.size() < 2) continue;

        // The piece holding the pre-split centroid is the nodule; when the
        // centroid falls on the chord (or outside), keep the largest piece.
        int keep_idx = -1;
        if (ccx >= 0 && ccx < w && ccy >= 0 && ccy < h && split.get(ccx, ccy)) {
            const int ci = ccy * w + ccx;
            for (size_t i = 0; i < pieces.size(); ++i)
                if (std::binary_search(pieces[i].pixels.begin(), pieces[i].pixels.end(), ci)) {
                    keep_idx = static_cast<int>(i);
                    break;
                }
        }
        if (keep_idx < 0) {
            size_t best = 0;
            for (size_t i = 0; i < pieces.size(); ++i)
                if (pieces[i].area() > pieces[best].area()) best = i;
            keep_idx = static_cast<int>(best);
        }

        const double gate = std::numbers::pi * (c.d + 1.0) / 2.0 * ((c.d + 1.0) / 2.0);
        bool removed_any = false;
        std::vector<int> next;
        next.insert(next.end(), pieces[keep_idx].pixels.begin(), pieces[keep_idx].pixels.end());
        for (auto [x, y] : chord) next.push_back(y * w + x);
        for (size_t i = 0; i < pieces.size(); ++i) {
            if (static_cast<int>(i) == keep_idx) continue;
            if (static_cast<double>(pieces[i].area()) > gate) {
                removed_any = true;
            } else {
                next.insert(next.end(), pieces[i].pixels.begin(), pieces[i].pixels.end());
            }
        }
        if (removed_any) {
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            return next;
        }
    }
    return std::nullopt;
}

}  // namespace

Region reduce_surrounding_noise(const Region& region, const PipelineConfig& cfg) {
    std::vector<int> pixels = region.pixels;
    for (;;) {
        auto next = remove_one_piece(pixels, region.width, region.height, cfg);
        if (!next) break;
        pixels = std::move(*next);
    }
    return region_from_pixels(region.width, region.height, std::move(pixels));
}

bool ggo_evenness_check(const std::vector<int>& ring_pixels, double solid_cx, double solid_cy,
                        const GrayImage& img, double background_mean, double solid_mean,
                        const PipelineConfig& cfg) {
    if (ring_pixels.empty()) throw std::invalid_argument("ggo_evenness_check: empty ring");

    std::array<int, 8> sector_counts{};
    double ring_sum = 0.0;
    for (int i : ring_pixels) {
        const int x = i % img.width, y = i / img.width;
        const double ang = std::atan2(y - solid_cy, x - solid_cx);  // [-pi, pi]
        int s = static_cast<int>((ang + std::numbers::pi) / (2.0 * std::numbers::pi) * 8.0);
        s = std::clamp(s, 0, 7);
        ++sector_counts[s];
        ring_sum += img.pixels[i];
    }

    double mean = 0.0;
    for (int c : sector_counts) mean += c;
    mean /= 8.0;
    double var = 0.0;
    for (int c : sector_counts) var += (c - mean) * (c - mean);
    var /= 8.0;
    const double cv = std::sqrt(var) / mean;
    if (cv > cfg.tau) return false;

    const double ring_mean = ring_sum / static_cast<double>(ring_pixels.size());
    return ring_mean > background_mean && ring_mean < solid_mean;
}

namespace {

// THRESHOLD of Algorithm 1: coarse selection in the box, then noise
// reduction, keeping the largest surviving region. Falls back to the
// un-denoised region when denoising cuts below s_m.
std::optional<Region> threshold_box(const GrayImage& img, const BBox& box,
                                    const PipelineConfig& cfg, const PleuralResult& pleural) {
    auto regions = coarse_segment(img, box, cfg, pleural);
    if (regions.empty()) return std::nullopt;
    size_t best = 0;
    for (size_t i = 1; i < regions.size(); ++i)
        if (regions[i].area() > regions[best].area()) best = i;
    Region denoised = reduce_surrounding_noise(regions[best], cfg);
    if (static_cast<int>(denoised.area()) < cfg.s_m) return regions[best];
    return denoised;
}

BBox find_box(const Region& contour, const BBox& limit, int w, int h) {
    return contour.tight_box().dilated(1, w, h).intersect(limit);
}

double mean_background_intensity(const GrayImage& img, const BBox& box,
                                 const BinaryMask& binarized) {
    double sum = 0.0;
    long long n = 0;
    for (int y = box.y0; y < box.y1; ++y)
        for (int x = box.x0; x < box.x1; ++x)
            if (!binarized.get(x, y)) {
                sum += img.at(x, y);
                ++n;
            }
    return n ? sum / static_cast<double>(n) : 0.0;
}

double mean_region_intensity(const GrayImage& img, const Region& r) {
    double sum = 0.0;
    for (int i : r.pixels) sum += img.pixels[i];
    return sum / static_cast<double>(r.area());
}

}  // namespace

std::pair<Region, CorrectionTrace> self_adapting_correct(const GrayImage& img,
                                                         const BBox& original_box,
                                                         const PipelineConfig& cfg,
                                                         const PleuralResult& pleural) {
    cfg.validate();
    if (original_box.empty() || !img.bounds().contains(original_box))
        throw std::invalid_argument("self_adapting_correct: invalid box");

    CorrectionTrace trace;
    auto cur = threshold_box(img, original_box, cfg, pleural);
    if (!cur) throw SegmentationFailure("no coarse component larger than s_m in the original box");

    BBox cur_box = original_box;
    trace.steps.push_back({cur_box, static_cast<long long>(cur->area())});

    auto converged = [&](const Region& r, const BBox& b) {
        return static_cast<double>(r.area()) >= cfg.rho * static_cast<double>(b.area());
    };

    if (converged(*cur, cur_box)) {
        trace.stop_reason = StopReason::box_converged;
        return {std::move(*cur), std::move(trace)};
    }

    const double background_mean = mean_background_intensity(img, original_box, pleural.binarized);
    BBox next_box = find_box(*cur, cur_box, img.width, img.height);

    int iters = 0;
    while (static_cast<double>(next_box.area()) <
           static_cast<double>(cur_box.area()) / cfg.epsilon) {
        if (++iters > cfg.max_iterations) {
            trace.stop_reason = StopReason::max_iter;
            return {std::move(*cur), std::move(trace)};
        }

        auto next = threshold_box(img, next_box, cfg, pleural);
        if (!next) {
            trace.stop_reason = StopReason::min_size_guard;
            return {std::move(*cur), std::move(trace)};
        }

        if (cfg.ggo_stop_enabled) {
            // pixels about to be dropped by the shrink
            std::vector<int> ring;
            std::unordered_set<int> next_set(next->pixels.begin(), next->pixels.end());
            for (int i : cur->pixels)
                if (!next_set.count(i)) ring.push_back(i);
            if (!ring.empty()) {
                const double solid_mean = mean_region_intensity(img, *next);
                if (ggo_evenness_check(ring, next->cx, next->cy, img, background_mean, solid_mean,
                                       cfg)) {
                    trace.stop_reason = StopReason::ggo_evenness;
                    return {std::move(*cur), std::move(trace)};
                }
            }
        }

        if (static_cast<int>(next->area()) < cfg.s_m) {
            trace.stop_reason = StopReason::min_size_guard;
            return {std::move(*cur), std::move(trace)};
        }

        cur_box = next_box;
        next_box = find_box(*next, cur_box, img.width, img.height);
        cur = std::move(next);
        trace.steps.push_back({cur_box, static_cast<long long>(cur->area())});

        if (converged(*cur, cur_box)) break;
    }
    trace.stop_reason = StopReason::box_converged;
    return {std::move(*cur), std::move(trace)};
}

}  // namespace nseg
