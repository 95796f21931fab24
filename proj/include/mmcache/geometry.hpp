#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "mmcache/config.hpp"
#include "mmcache/rng.hpp"

namespace mmcache::geometry {

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Point2D& a, const Point2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_sq(const Point2D& a, const Point2D& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

enum class TargetRole { unpaired, paired_a, paired_b, cellular_only };

struct PairedUes {
    Point2D first;   // point of the parent process
    Point2D second;  // displaced peer
};

// One sampled network realization. The probe UE sits at the origin on top of
// the stationary processes (Slivnyak insertion); its peer, when paired, is
// placed by the same displacement law as every other pair.
struct NetworkDrop {
    std::vector<Point2D> bs;
    std::vector<Point2D> ue_unpaired;
    std::vector<PairedUes> ue_paired;
    double window_half_width = 0.0;  // [m]
    double r_cell = 0.0;             // [m], carried for cell-membership cutoffs
    TargetRole target_role = TargetRole::unpaired;
    std::optional<Point2D> target_peer;  // present iff the target is paired
};

// Homogeneous PPP on the centered square of the given half width.
inline std::vector<Point2D> sample_ppp(double lambda, double half_width, Rng& rng) {
    if (lambda < 0.0) throw std::domain_error("sample_ppp: negative intensity");
    const double side = 2.0 * half_width;
    long count = rng.poisson(lambda * side * side);
    std::vector<Point2D> points(count);
    for (long i = 0; i < count; ++i) {
        points[i].x = rng.uniform(-half_width, half_width);
        points[i].y = rng.uniform(-half_width, half_width);
    }
    return points;
}

// Pair displacement: distance with density 2r/r_max^2 (uniform in the disk),
// angle uniform.
inline std::pair<double, double> sample_pair_displacement(double r_max, Rng& rng) {
    if (r_max <= 0.0) throw std::domain_error("sample_pair_displacement: r_max must be > 0");
    double r = r_max * std::sqrt(rng.uniform());
    double phi = rng.uniform(0.0, 2.0 * M_PI);
    return {r, phi};
}

// Everything beyond 10 cell radii contributes negligibly through the
// exponential blockage decay; this doubles as the default window half width.
inline double truncation_radius(const SystemParams& p) { return 10.0 * p.r_cell(); }

inline double default_window_half_width(const SystemParams& p) {
    return std::max(10.0 * p.r_cell(), truncation_radius(p));
}

inline NetworkDrop build_drop(const SystemParams& p, TargetRole role, Rng& rng,
                              double half_width) {
    const bool paired = role == TargetRole::paired_a || role == TargetRole::paired_b;
    if (paired && p.delta <= 0.0)
        throw std::domain_error("build_drop: paired target requires delta > 0");

    NetworkDrop drop;
    drop.window_half_width = half_width;
    drop.r_cell = p.r_cell();
    drop.target_role = role;

    drop.bs = sample_ppp(p.lambda_bs, half_width, rng);

    const double lambda_p = p.delta * p.lambda_ue / 2.0;
    const double lambda_u = (1.0 - p.delta) * p.lambda_ue;
    drop.ue_unpaired = sample_ppp(lambda_u, half_width, rng);

    auto anchors = sample_ppp(lambda_p, half_width, rng);
    drop.ue_paired.resize(anchors.size());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        auto [r, phi] = sample_pair_displacement(p.r_d2d_max, rng);
        drop.ue_paired[i].first = anchors[i];
        drop.ue_paired[i].second = {anchors[i].x + r * std::cos(phi),
                                    anchors[i].y + r * std::sin(phi)};
    }

    if (paired) {
        auto [r, phi] = sample_pair_displacement(p.r_d2d_max, rng);
        drop.target_peer = Point2D{r * std::cos(phi), r * std::sin(phi)};
    }
    return drop;
}

inline NetworkDrop build_drop(const SystemParams& p, TargetRole role, Rng& rng) {
    return build_drop(p, role, rng, default_window_half_width(p));
}

// Closest-BS association; ties break toward the lower index.
inline std::pair<long, double> associate_closest_bs(const Point2D& p,
                                                    const std::vector<Point2D>& bs) {
    if (bs.empty()) throw std::runtime_error("associate_closest_bs: no base stations");
    long best = 0;
    double best_d2 = distance_sq(p, bs[0]);
    for (std::size_t i = 1; i < bs.size(); ++i) {
        double d2 = distance_sq(p, bs[i]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<long>(i);
        }
    }
    return {best, std::sqrt(best_d2)};
}

// Uniform-grid nearest-neighbor index over the BS set (CSR bucket layout);
// queries expand rings of cells until the best candidate is certified.
class NearestBsIndex {
public:
    NearestBsIndex(const std::vector<Point2D>& bs, double half_width, double cell_size)
        : bs_(bs), half_width_(half_width), cell_(cell_size) {
        n_ = std::max<long>(1, static_cast<long>(std::ceil(2.0 * half_width_ / cell_)));
        const std::size_t buckets = static_cast<std::size_t>(n_) * n_;
        start_.assign(buckets + 1, 0);
        for (const auto& p : bs) ++start_[bucket_of(p) + 1];
        for (std::size_t b = 1; b <= buckets; ++b) start_[b] += start_[b - 1];
        items_.resize(bs.size());
        std::vector<long> cursor(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < bs.size(); ++i)
            items_[cursor[bucket_of(bs[i])]++] = static_cast<long>(i);
    }

    std::pair<long, double> nearest(const Point2D& q) const {
        if (bs_.empty()) throw std::runtime_error("NearestBsIndex: no base stations");
        long cx = clamp_cell((q.x + half_width_) / cell_);
        long cy = clamp_cell((q.y + half_width_) / cell_);
        long best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (long ring = 0; ring < 2 * n_; ++ring) {
            for (long dy = -ring; dy <= ring; ++dy) {
                long by = cy + dy;
                if (by < 0 || by >= n_) continue;
                long step = (std::labs(dy) == ring) ? 1 : 2 * ring;
                if (step == 0) step = 1;
                for (long dx = -ring; dx <= ring; dx += step) {
                    long bx = cx + dx;
                    if (bx < 0 || bx >= n_) continue;
                    std::size_t b = static_cast<std::size_t>(by) * n_ + bx;
                    for (long k = start_[b]; k < start_[b + 1]; ++k) {
                        long idx = items_[k];
                        double d2 = distance_sq(q, bs_[idx]);
                        if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
                            best_d2 = d2;
                            best = idx;
                        }
                    }
                }
            }
            // Anything in farther rings is at least ring * cell away.
            if (best >= 0) {
                double safe = double(ring) * cell_;
                if (best_d2 <= safe * safe) break;
            }
        }
        return {best, std::sqrt(best_d2)};
    }

private:
    std::size_t bucket_of(const Point2D& p) const {
        long bx = clamp_cell((p.x + half_width_) / cell_);
        long by = clamp_cell((p.y + half_width_) / cell_);
        return static_cast<std::size_t>(by) * n_ + bx;
    }

    long clamp_cell(double v) const {
        long c = static_cast<long>(std::floor(v));
        return std::clamp(c, 0L, n_ - 1);
    }

    const std::vector<Point2D>& bs_;
    double half_width_;
    double cell_;
    long n_ = 0;
    std::vector<long> start_;
    std::vector<long> items_;
};

// Flat indexing of the drop's UEs: unpaired first, then pair ends (first,
// second) per pair. Used to address activity flags.
inline std::size_t ue_count(const NetworkDrop& drop) {
    return drop.ue_unpaired.size() + 2 * drop.ue_paired.size();
}

inline Point2D ue_at(const NetworkDrop& drop, std::size_t flat) {
    if (flat < drop.ue_unpaired.size()) return drop.ue_unpaired[flat];
    std::size_t k = flat - drop.ue_unpaired.size();
    const auto& pair = drop.ue_paired[k / 2];
    return (k % 2 == 0) ? pair.first : pair.second;
}

// Number of active cellular UEs sharing the target's Voronoi cell, target
// included (hence >= 1). Flags follow the flat UE indexing above. UEs farther
// than 6 cell radii from the serving BS are skipped; membership beyond that
// has probability below e^{-36}.
inline long target_cell_members(const NetworkDrop& drop, const NearestBsIndex& index,
                                const std::vector<std::uint8_t>& active_flags) {
    if (active_flags.size() != ue_count(drop))
        throw std::invalid_argument("target_cell_members: flag count mismatch");
    auto [target_bs, target_dist] = index.nearest(Point2D{0.0, 0.0});
    (void)target_dist;
    const Point2D serving = drop.bs[target_bs];
    const double cutoff_sq = 36.0 * drop.r_cell * drop.r_cell;

    long members = 1;
    const std::size_t total = ue_count(drop);
    for (std::size_t i = 0; i < total; ++i) {
        if (!active_flags[i]) continue;
        Point2D p = ue_at(drop, i);
        if (distance_sq(p, serving) > cutoff_sq) continue;
        if (index.nearest(p).first == target_bs) ++members;
    }
    return members;
}

inline long target_cell_members(const NetworkDrop& drop,
                                const std::vector<std::uint8_t>& active_flags) {
    NearestBsIndex index(drop.bs, drop.window_half_width, std::max(1.0, drop.r_cell));
    return target_cell_members(drop, index, active_flags);
}

// Drop dump: kind{bs,ue_u,ue_pA,ue_pB}, x_m, y_m, pair_id. The probe UE (and
// its peer) are emitted with the pair id -1; sampled pairs are numbered.
inline void dump_drop_csv(const NetworkDrop& drop, std::ostream& out) {
    out << "kind,x_m,y_m,pair_id\n";
    char buf[96];
    auto row = [&](const char* kind, const Point2D& p, long pair_id) {
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%ld\n", kind, p.x, p.y, pair_id);
        out << buf;
    };
    for (const auto& b : drop.bs) row("bs", b, -1);
    switch (drop.target_role) {
        case TargetRole::paired_a:
            row("ue_pA", Point2D{0.0, 0.0}, -1);
            row("ue_pB", *drop.target_peer, -1);
            break;
        case TargetRole::paired_b:
            row("ue_pB", Point2D{0.0, 0.0}, -1);
            row("ue_pA", *drop.target_peer, -1);
            break;
        default:
            row("ue_u", Point2D{0.0, 0.0}, -1);
    }
    for (const auto& u : drop.ue_unpaired) row("ue_u", u, -1);
    for (std::size_t i = 0; i < drop.ue_paired.size(); ++i) {
        row("ue_pA", drop.ue_paired[i].first, static_cast<long>(i));
        row("ue_pB", drop.ue_paired[i].second, static_cast<long>(i));
    }
}

}  // namespace mmcache::geometry
