#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "periscope/metrics.hpp"
#include "periscope/protocols.hpp"
#include "periscope/types.hpp"

namespace periscope {

using ordered_json = nlohmann::ordered_json;

inline std::string digest_string(std::string_view data) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(data)));
    return buf;
}

inline ordered_json metrics_report(const ScoreSet& s, double eer_pct, double auc_pct) {
    return ordered_json{{"eer_pct", eer_pct},
                        {"auc_pct", auc_pct},
                        {"n_genuine", s.genuine.size()},
                        {"n_impostor", s.impostor.size()},
                        {"polarity", to_string(s.polarity)}};
}

inline ordered_json fold_report(const std::vector<FoldMetrics>& folds,
                                const AggregateMetrics& agg) {
    ordered_json out;
    out["folds"] = ordered_json::array();
    for (const auto& f : folds)
        out["folds"].push_back(
            ordered_json{{"fold_id", f.fold_id}, {"eer_pct", f.eer_pct}, {"auc_pct", f.auc_pct}});
    out["avg"] = ordered_json{{"eer_pct", agg.eer_avg}, {"auc_pct", agg.auc_avg}};
    if (agg.eer_std)
        out["std"] = ordered_json{{"eer_pct", *agg.eer_std}, {"auc_pct", *agg.auc_std}};
    else
        out["std"] = nullptr;
    return out;
}

inline ordered_json counts_report(const PairCounts& c) {
    return ordered_json{{"genuine", c.genuine}, {"impostor", c.impostor}};
}

inline std::string det_csv(const DetCurve& curve) {
    std::string out = "threshold,far,frr\n";
    for (const auto& p : curve.points) {
        out += detail::fmt_sig9(p.threshold);
        out += ',';
        out += detail::fmt_sig9(p.far);
        out += ',';
        out += detail::fmt_sig9(p.frr);
        out += '\n';
    }
    return out;
}

inline std::string sweep_csv(const SweepResult& sweep) {
    std::string out = "a,eer_pct\n";
    for (const auto& p : sweep.points) {
        out += detail::fmt_sig9(p.a);
        out += ',';
        out += detail::fmt_sig9(p.eer_pct);
        out += '\n';
    }
    return out;
}

inline ordered_json sweep_report(const SweepResult& sweep) {
    ordered_json out;
    out["sweep"] = ordered_json::array();
    for (const auto& p : sweep.points)
        out["sweep"].push_back(ordered_json{{"a", p.a}, {"eer_pct", p.eer_pct}});
    out["best_a"] = sweep.best_a;
    out["best_eer_pct"] = sweep.best_eer_pct;
    return out;
}

/// Envelope written by every CLI command.
struct RunReport {
    std::string command;
    ordered_json config = ordered_json::object();
    ordered_json inputs = ordered_json::object();
    ordered_json counts = ordered_json::object();
    ordered_json metrics = ordered_json::object();
    double wall_ms = 0;

    ordered_json to_json() const {
        return ordered_json{{"command", command}, {"config", config}, {"inputs", inputs},
                            {"counts", counts},   {"metrics", metrics}, {"wall_ms", wall_ms}};
    }
};

}  // namespace periscope
