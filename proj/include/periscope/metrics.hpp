#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "periscope/matcher.hpp"
#include "periscope/types.hpp"

namespace periscope {

// ---------------------------------------------------------------------------
// DET curve
// ---------------------------------------------------------------------------

struct DetPoint {
    double threshold;
    double far;
    double frr;
};

/// Operating points ordered so FAR is non-decreasing and FRR non-increasing,
/// starting at (FAR 0, FRR 1) and ending at (FAR 1, FRR 0).
struct DetCurve {
    Polarity polarity = Polarity::similarity;
    std::vector<DetPoint> points;
};

namespace detail {

inline void require_nonempty(const ScoreSet& s) {
    if (s.genuine.empty()) throw DataError("score set has no genuine scores");
    if (s.impostor.empty()) throw DataError("score set has no impostor scores");
}

/// Thresholds in evaluation order: the accept region shrinks along the list,
/// so FAR grows from 0 and FRR falls from 1.
inline std::vector<double> threshold_walk(const ScoreSet& s) {
    std::vector<double> t;
    t.reserve(s.genuine.size() + s.impostor.size() + 2);
    double inf = std::numeric_limits<double>::infinity();
    t.push_back(s.polarity == Polarity::similarity ? inf : -inf);
    std::vector<double> u;
    u.reserve(s.genuine.size() + s.impostor.size());
    u.insert(u.end(), s.genuine.begin(), s.genuine.end());
    u.insert(u.end(), s.impostor.begin(), s.impostor.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (s.polarity == Polarity::similarity) std::reverse(u.begin(), u.end());
    t.insert(t.end(), u.begin(), u.end());
    t.push_back(s.polarity == Polarity::similarity ? -inf : inf);
    return t;
}

}  // namespace detail

inline DetCurve det_curve(const ScoreSet& s) {
    detail::require_nonempty(s);
    std::vector<double> gen = s.genuine;
    std::vector<double> imp = s.impostor;
    std::sort(gen.begin(), gen.end());
    std::sort(imp.begin(), imp.end());
    double ng = static_cast<double>(gen.size());
    double ni = static_cast<double>(imp.size());

    DetCurve curve;
    curve.polarity = s.polarity;
    for (double t : detail::threshold_walk(s)) {
        double far, frr;
        if (s.polarity == Polarity::similarity) {
            // accept means score >= t
            far = (imp.end() - std::lower_bound(imp.begin(), imp.end(), t)) / ni;
            frr = (std::lower_bound(gen.begin(), gen.end(), t) - gen.begin()) / ng;
        } else {
            // accept means score <= t
            far = (std::upper_bound(imp.begin(), imp.end(), t) - imp.begin()) / ni;
            frr = (gen.end() - std::upper_bound(gen.begin(), gen.end(), t)) / ng;
        }
        curve.points.push_back({t, far, frr});
    }
    return curve;
}

namespace detail {

/// Locates the FAR=FRR crossing on an ordered operating-point list by linear
/// interpolation of (FAR - FRR), returning percent.
template <class PointRange>
double eer_from_points(const PointRange& pts) {
    auto diff = [](const auto& p) { return p.far - p.frr; };
    for (std::size_t k = 1; k < pts.size(); ++k) {
        double dk = diff(pts[k]);
        if (dk < 0) continue;
        if (dk == 0) return pts[k].far * 100.0;
        double dp = diff(pts[k - 1]);
        double u = (0 - dp) / (dk - dp);
        return (pts[k - 1].far + u * (pts[k].far - pts[k - 1].far)) * 100.0;
    }
    throw DataError("no FAR=FRR crossing found");
}

}  // namespace detail

inline double eer(const ScoreSet& s) { return detail::eer_from_points(det_curve(s).points); }

/// Area under the ROC (TAR vs FAR) by trapezoidal integration over every
/// operating point; equals the Mann-Whitney statistic with ties counted as
/// one half. Percent.
inline double auc(const ScoreSet& s) {
    DetCurve c = det_curve(s);
    double area = 0;
    for (std::size_t k = 1; k < c.points.size(); ++k) {
        double dfar = c.points[k].far - c.points[k - 1].far;
        double tar_sum = (1 - c.points[k].frr) + (1 - c.points[k - 1].frr);
        area += dfar * tar_sum / 2;
    }
    return area * 100.0;
}

/// Independent EER oracle: counts FAR/FRR from scratch at every candidate
/// threshold. Quadratic, guarded; exists only to cross-check eer().
inline double brute_force_eer(const ScoreSet& s) {
    detail::require_nonempty(s);
    if (s.genuine.size() + s.impostor.size() > 20000)
        throw DataError("brute_force_eer: more than 20000 scores");
    bool sim = s.polarity == Polarity::similarity;
    double inf = std::numeric_limits<double>::infinity();
    std::vector<double> thresholds;
    thresholds.push_back(sim ? inf : -inf);
    {
        std::vector<double> u = s.genuine;
        u.insert(u.end(), s.impostor.begin(), s.impostor.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        if (sim) std::reverse(u.begin(), u.end());
        thresholds.insert(thresholds.end(), u.begin(), u.end());
    }
    thresholds.push_back(sim ? -inf : inf);

    struct Op {
        double far, frr;
    };
    std::vector<Op> ops;
    ops.reserve(thresholds.size());
    for (double t : thresholds) {
        std::size_t fa = 0, fr = 0;
        for (double v : s.impostor)
            if (sim ? v >= t : v <= t) ++fa;
        for (double v : s.genuine)
            if (sim ? v < t : v > t) ++fr;
        ops.push_back({static_cast<double>(fa) / s.impostor.size(),
                       static_cast<double>(fr) / s.genuine.size()});
    }
    return detail::eer_from_points(ops);
}

// ---------------------------------------------------------------------------
// Fold aggregation
// ---------------------------------------------------------------------------

struct FoldMetrics {
    int fold_id = 0;
    double eer_pct = 0;
    double auc_pct = 0;
};

struct AggregateMetrics {
    double eer_avg = 0;
    double auc_avg = 0;
    std::optional<double> eer_std;
    std::optional<double> auc_std;
};

inline AggregateMetrics aggregate_folds(const std::vector<FoldMetrics>& folds) {
    if (folds.empty()) throw DataError("no folds to aggregate");
    AggregateMetrics agg;
    for (const auto& f : folds) {
        agg.eer_avg += f.eer_pct;
        agg.auc_avg += f.auc_pct;
    }
    agg.eer_avg /= folds.size();
    agg.auc_avg /= folds.size();
    if (folds.size() >= 2) {
        double se = 0, sa = 0;
        for (const auto& f : folds) {
            se += (f.eer_pct - agg.eer_avg) * (f.eer_pct - agg.eer_avg);
            sa += (f.auc_pct - agg.auc_avg) * (f.auc_pct - agg.auc_avg);
        }
        agg.eer_std = std::sqrt(se / (folds.size() - 1));
        agg.auc_std = std::sqrt(sa / (folds.size() - 1));
    }
    return agg;
}

// ---------------------------------------------------------------------------
// Fusion weight sweep
// ---------------------------------------------------------------------------

struct SweepPoint {
    double a;
    double eer_pct;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double best_a = 0;
    double best_eer_pct = 0;
};

/// EER of the fused set at each grid weight; best weight is the EER argmin
/// with ties broken toward 0.5 and then toward the smaller weight.
inline SweepResult fusion_sweep(const ScoreSet& s1, const ScoreSet& s2, double grid_step = 0.1,
                                Normalize norm = Normalize::minmax) {
    if (!(grid_step > 0 && grid_step <= 0.5))
        throw ConfigError("sweep grid step must be in (0, 0.5]");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        double a = k * grid_step;
        if (a >= 1 - 1e-12) break;
        grid.push_back(a);
    }
    grid.push_back(1.0);

    SweepResult out;
    for (double a : grid) out.points.push_back({a, eer(fuse_scores(s1, s2, a, norm))});
    const SweepPoint* best = &out.points.front();
    for (const auto& p : out.points) {
        if (p.eer_pct < best->eer_pct ||
            (p.eer_pct == best->eer_pct &&
             (std::abs(p.a - 0.5) < std::abs(best->a - 0.5) ||
              (std::abs(p.a - 0.5) == std::abs(best->a - 0.5) && p.a < best->a))))
            best = &p;
    }
    out.best_a = best->a;
    out.best_eer_pct = best->eer_pct;
    return out;
}

}  // namespace periscope
