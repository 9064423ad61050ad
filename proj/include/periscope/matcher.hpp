#pragma once

#include <algorithm>
#include <cmath>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "periscope/types.hpp"

namespace periscope {

// ---------------------------------------------------------------------------
// Metric kernels
// ---------------------------------------------------------------------------

/// Cosine similarity in [-1, 1]; accumulates in double regardless of input
/// element type.
template <class T>
double cosine_similarity(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size())
        throw DataError("cosine: dimension mismatch " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
    if (a.empty()) throw DataError("cosine: empty vectors");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x = a[i], y = b[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0 || nb == 0) throw DataError("cosine: zero-norm vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

/// Chi-squared distance over non-negative vectors. Terms with a zero
/// denominator contribute nothing (the limit of the usual epsilon guard).
template <class T>
double chi2_distance(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size())
        throw DataError("chi2: dimension mismatch " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
    if (a.empty()) throw DataError("chi2: empty vectors");
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x = a[i], y = b[i];
        if (x < 0 || y < 0) throw DataError("chi2: negative component");
        double denom = x + y;
        if (denom > 0) {
            double diff = x - y;
            sum += diff * diff / denom;
        }
    }
    return sum;
}

inline double metric_score(Metric m, std::span<const float> a, std::span<const float> b) {
    return m == Metric::cosine ? cosine_similarity(a, b) : chi2_distance(a, b);
}

// ---------------------------------------------------------------------------
// Template comparison
// ---------------------------------------------------------------------------

/// Compares two eye templates side by side and averages the per-side scores.
/// At least one eye side must be present in both templates.
inline double template_score(const EyeTemplate& a, const EyeTemplate& b, Metric m) {
    double sum = 0;
    int n = 0;
    if (a.left && b.left) {
        sum += metric_score(m, std::span<const float>(a.left->vector),
                            std::span<const float>(b.left->vector));
        ++n;
    }
    if (a.right && b.right) {
        sum += metric_score(m, std::span<const float>(a.right->vector),
                            std::span<const float>(b.right->vector));
        ++n;
    }
    if (n == 0) throw DataError("no shared eye side between templates");
    return sum / n;
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Scores every pair in the list. Output is independent of the worker count:
/// each pair's score is written into its own preallocated slot.
inline ScoredPairs score_pairs(const EmbeddingSet& set, const PairList& pairs, Metric m,
                               unsigned threads = 1) {
    std::unordered_map<std::string, EyeTemplate> templates;
    std::vector<std::string> missing;
    std::size_t n_missing = 0;
    auto resolve = [&](const SampleRef& ref) {
        std::string key = ref.subject_id + "\x1f" + ref.image_id;
        if (templates.count(key)) return;
        EyeTemplate t = set.find_template(ref.subject_id, ref.image_id);
        if (t.empty()) {
            ++n_missing;
            if (missing.size() < 10) missing.push_back(ref.subject_id + "/" + ref.image_id);
        }
        templates[key] = t;
    };
    for (const auto& e : pairs.entries) {
        resolve(e.a);
        resolve(e.b);
    }
    if (n_missing > 0) {
        std::string msg = "no embeddings for " + std::to_string(n_missing) + " samples:";
        for (const auto& k : missing) msg += " " + k;
        if (n_missing > missing.size()) msg += " ...";
        throw DataError(msg);
    }

    ScoredPairs out;
    out.pairs = pairs;
    out.polarity = polarity_of(m);
    out.scores.assign(pairs.entries.size(), 0.0);

    unsigned n_threads = resolve_threads(threads);
    std::size_t n = pairs.entries.size();
    if (n_threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = pairs.entries[i];
            const auto& ta = templates.at(e.a.subject_id + "\x1f" + e.a.image_id);
            const auto& tb = templates.at(e.b.subject_id + "\x1f" + e.b.image_id);
            out.scores[i] = template_score(ta, tb, m);
        }
        return out;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    std::size_t chunk = (n + n_threads - 1) / n_threads;
    for (unsigned w = 0; w < n_threads; ++w) {
        std::size_t begin = static_cast<std::size_t>(w) * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    const auto& e = pairs.entries[i];
                    const auto& ta = templates.at(e.a.subject_id + "\x1f" + e.a.image_id);
                    const auto& tb = templates.at(e.b.subject_id + "\x1f" + e.b.image_id);
                    out.scores[i] = template_score(ta, tb, m);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

// ---------------------------------------------------------------------------
// Score fusion
// ---------------------------------------------------------------------------

enum class Normalize { none, minmax };

inline Normalize parse_normalize(std::string_view s) {
    if (s == "none") return Normalize::none;
    if (s == "minmax") return Normalize::minmax;
    throw ConfigError("unknown normalization '" + std::string(s) + "'");
}

inline std::string to_string(Normalize n) {
    return n == Normalize::none ? "none" : "minmax";
}

namespace detail {

struct MinMax {
    double lo, hi;
    double map(double v) const { return (v - lo) / (hi - lo); }
};

inline MinMax minmax_of(const ScoreSet& s, const char* name) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : s.genuine) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : s.impostor) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) throw DataError(std::string(name) + " has constant scores; cannot normalize");
    return {lo, hi};
}

}  // namespace detail

/// Convex combination a*s1 + (1-a)*s2 of two score sets covering the same
/// pairs in the same order.
inline ScoreSet fuse_scores(const ScoreSet& s1, const ScoreSet& s2, double a,
                            Normalize norm = Normalize::minmax) {
    if (!(a >= 0 && a <= 1)) throw ConfigError("fusion weight must be in [0, 1]");
    if (s1.polarity != s2.polarity)
        throw DataError("cannot fuse score sets with different polarities");
    if (s1.genuine.size() != s2.genuine.size() || s1.impostor.size() != s2.impostor.size())
        throw DataError("cannot fuse score sets of different sizes");
    detail::MinMax m1{0, 1}, m2{0, 1};
    if (norm == Normalize::minmax) {
        m1 = detail::minmax_of(s1, "first score set");
        m2 = detail::minmax_of(s2, "second score set");
    } else {
        m1 = {0.0, 1.0};
        m2 = {0.0, 1.0};
    }
    ScoreSet out;
    out.polarity = s1.polarity;
    out.genuine.resize(s1.genuine.size());
    out.impostor.resize(s1.impostor.size());
    for (std::size_t i = 0; i < s1.genuine.size(); ++i)
        out.genuine[i] = a * m1.map(s1.genuine[i]) + (1 - a) * m2.map(s2.genuine[i]);
    for (std::size_t i = 0; i < s1.impostor.size(); ++i)
        out.impostor[i] = a * m1.map(s1.impostor[i]) + (1 - a) * m2.map(s2.impostor[i]);
    return out;
}

/// Pairwise variant: both inputs must cover the identical pair list.
inline ScoredPairs fuse_scored(const ScoredPairs& s1, const ScoredPairs& s2, double a,
                               Normalize norm = Normalize::minmax) {
    if (s1.pairs.entries.size() != s2.pairs.entries.size())
        throw DataError("cannot fuse score files over different pair lists");
    for (std::size_t i = 0; i < s1.pairs.entries.size(); ++i) {
        const auto& ea = s1.pairs.entries[i];
        const auto& eb = s2.pairs.entries[i];
        if (ea.label != eb.label || !(ea.a == eb.a) || !(ea.b == eb.b))
            throw DataError("pair mismatch at row " + std::to_string(i + 1) +
                            "; score files must cover identical pairs in order");
    }
    ScoreSet f = fuse_scores(s1.to_score_set(), s2.to_score_set(), a, norm);
    ScoredPairs out;
    out.pairs = s1.pairs;
    out.polarity = f.polarity;
    out.scores.resize(s1.scores.size());
    std::size_t gi = 0, ii = 0;
    for (std::size_t i = 0; i < s1.pairs.entries.size(); ++i)
        out.scores[i] = s1.pairs.entries[i].label == PairLabel::genuine ? f.genuine[gi++]
                                                                        : f.impostor[ii++];
    return out;
}

}  // namespace periscope
