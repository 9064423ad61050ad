#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "periscope/types.hpp"

namespace periscope {

// ---------------------------------------------------------------------------
// Galleries
// ---------------------------------------------------------------------------

/// Per-subject sample listing in input order; the order defines which image
/// is "1st" and "2nd" for impostor enumeration.
struct SubjectGallery {
    struct Sample {
        std::string image_id;
        Pose pose;
    };
    struct Entry {
        std::string subject_id;
        std::vector<Sample> samples;

        std::vector<const std::string*> images_of(Pose pose) const {
            std::vector<const std::string*> out;
            for (const auto& s : samples)
                if (s.pose == pose) out.push_back(&s.image_id);
            return out;
        }
    };
    std::vector<Entry> subjects;
};

inline SubjectGallery build_gallery(std::span<const FaceAnnotation> faces) {
    SubjectGallery g;
    std::unordered_map<std::string, std::size_t> index;
    std::unordered_set<std::string> seen;
    for (const auto& f : faces) {
        std::string key = f.subject_id + "\x1f" + f.image_id;
        if (!seen.insert(key).second)
            throw ValidationError("duplicate sample " + f.subject_id + "/" + f.image_id);
        auto [it, fresh] = index.emplace(f.subject_id, g.subjects.size());
        if (fresh) g.subjects.push_back({f.subject_id, {}});
        g.subjects[it->second].samples.push_back({f.image_id, f.pose});
    }
    return g;
}

inline SubjectGallery build_gallery(const EmbeddingSet& set) {
    SubjectGallery g;
    std::unordered_map<std::string, std::size_t> index;
    std::unordered_set<std::string> seen;
    for (const auto& r : set.records()) {
        std::string key = r.subject_id + "\x1f" + r.image_id;
        if (!seen.insert(key).second) continue;  // other eye of the same image
        auto [it, fresh] = index.emplace(r.subject_id, g.subjects.size());
        if (fresh) g.subjects.push_back({r.subject_id, {}});
        g.subjects[it->second].samples.push_back({r.image_id, r.pose});
    }
    return g;
}

/// Per-eye sample listing for stores where every image id carries exactly
/// one eye side (one record per ocular sample).
struct EyeGallery {
    struct Entry {
        std::string subject_id;
        std::vector<std::string> left;
        std::vector<std::string> right;
    };
    std::vector<Entry> subjects;

    const Entry* find(const std::string& subject_id) const {
        for (const auto& e : subjects)
            if (e.subject_id == subject_id) return &e;
        return nullptr;
    }
};

inline EyeGallery build_eye_gallery(const EmbeddingSet& set) {
    EyeGallery g;
    std::unordered_map<std::string, std::size_t> index;
    std::unordered_map<std::string, EyeSide> sides;
    for (const auto& r : set.records()) {
        std::string key = r.subject_id + "\x1f" + r.image_id;
        auto [sit, fresh_sample] = sides.emplace(key, r.eye_side);
        if (!fresh_sample)
            throw DataError("sample " + r.subject_id + "/" + r.image_id +
                            " carries both eye sides; per-eye protocol needs one record per "
                            "sample");
        auto [it, fresh] = index.emplace(r.subject_id, g.subjects.size());
        if (fresh) g.subjects.push_back({r.subject_id, {}, {}});
        auto& e = g.subjects[it->second];
        (r.eye_side == EyeSide::left ? e.left : e.right).push_back(r.image_id);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Closed-form counts
// ---------------------------------------------------------------------------

struct PairCounts {
    std::uint64_t genuine = 0;
    std::uint64_t impostor = 0;
};

inline PairCounts same_pose_counts(std::uint64_t subjects, std::uint64_t images) {
    return {subjects * (images * (images - 1) / 2), subjects * (subjects - 1)};
}

inline PairCounts cross_pose_counts(std::uint64_t subjects, std::uint64_t images_a,
                                    std::uint64_t images_b) {
    return {subjects * images_a * images_b, subjects * (subjects - 1)};
}

inline PairCounts ufpr_per_eye_counts(std::uint64_t subjects, std::uint64_t samples_per_eye) {
    return {subjects * 2 * (samples_per_eye * (samples_per_eye - 1) / 2),
            2 * subjects * (subjects - 1)};
}

// ---------------------------------------------------------------------------
// VGGFace2-Pose style protocols
// ---------------------------------------------------------------------------

namespace detail {

inline const SubjectGallery::Entry& require_subject(const SubjectGallery& g, std::size_t i) {
    return g.subjects[i];
}

}  // namespace detail

/// Genuine: all unordered within-subject image pairs of the pose. Impostor:
/// image #1 of subject i against image #2 of subject j, all ordered i != j.
inline PairList gen_same_pose_pairs(const SubjectGallery& gallery, Pose pose) {
    std::vector<std::vector<const std::string*>> images(gallery.subjects.size());
    for (std::size_t s = 0; s < gallery.subjects.size(); ++s) {
        images[s] = gallery.subjects[s].images_of(pose);
        if (images[s].size() < 2)
            throw DataError("subject " + gallery.subjects[s].subject_id + " has " +
                            std::to_string(images[s].size()) + " " + std::string(to_string(pose)) +
                            " images; need at least 2");
    }
    PairList out;
    for (std::size_t s = 0; s < gallery.subjects.size(); ++s) {
        const std::string& id = gallery.subjects[s].subject_id;
        for (std::size_t i = 0; i + 1 < images[s].size(); ++i)
            for (std::size_t j = i + 1; j < images[s].size(); ++j)
                out.entries.push_back(
                    {PairLabel::genuine, {id, *images[s][i]}, {id, *images[s][j]}});
    }
    for (std::size_t i = 0; i < gallery.subjects.size(); ++i)
        for (std::size_t j = 0; j < gallery.subjects.size(); ++j) {
            if (i == j) continue;
            out.entries.push_back({PairLabel::impostor,
                                   {gallery.subjects[i].subject_id, *images[i][0]},
                                   {gallery.subjects[j].subject_id, *images[j][1]}});
        }
    return out;
}

inline PairCounts count_same_pose(const SubjectGallery& gallery, Pose pose) {
    PairCounts c;
    for (const auto& e : gallery.subjects) {
        std::uint64_t n = e.images_of(pose).size();
        if (n < 2)
            throw DataError("subject " + e.subject_id + " has " + std::to_string(n) + " " +
                            std::string(to_string(pose)) + " images; need at least 2");
        c.genuine += n * (n - 1) / 2;
    }
    std::uint64_t s = gallery.subjects.size();
    c.impostor = s * (s - 1);
    return c;
}

/// Genuine: full within-subject cross product pose_a x pose_b. Impostor:
/// pose_a image #1 of subject i against pose_b image #2 of subject j,
/// ordered i != j.
inline PairList gen_cross_pose_pairs(const SubjectGallery& gallery, Pose pose_a, Pose pose_b) {
    if (pose_a == pose_b)
        throw ConfigError("cross-pose protocol needs two distinct poses; use same-pose");
    std::vector<std::vector<const std::string*>> a_imgs(gallery.subjects.size());
    std::vector<std::vector<const std::string*>> b_imgs(gallery.subjects.size());
    bool impostors_possible = gallery.subjects.size() >= 2;
    for (std::size_t s = 0; s < gallery.subjects.size(); ++s) {
        a_imgs[s] = gallery.subjects[s].images_of(pose_a);
        b_imgs[s] = gallery.subjects[s].images_of(pose_b);
        if (a_imgs[s].empty())
            throw DataError("subject " + gallery.subjects[s].subject_id + " has no " +
                            std::string(to_string(pose_a)) + " images");
        if (b_imgs[s].empty())
            throw DataError("subject " + gallery.subjects[s].subject_id + " has no " +
                            std::string(to_string(pose_b)) + " images");
        if (impostors_possible && b_imgs[s].size() < 2)
            throw DataError("subject " + gallery.subjects[s].subject_id + " has " +
                            std::to_string(b_imgs[s].size()) + " " + std::string(to_string(pose_b)) +
                            " images; impostor rule needs image #2");
    }
    PairList out;
    for (std::size_t s = 0; s < gallery.subjects.size(); ++s) {
        const std::string& id = gallery.subjects[s].subject_id;
        for (const auto* ia : a_imgs[s])
            for (const auto* ib : b_imgs[s])
                out.entries.push_back({PairLabel::genuine, {id, *ia}, {id, *ib}});
    }
    for (std::size_t i = 0; i < gallery.subjects.size(); ++i)
        for (std::size_t j = 0; j < gallery.subjects.size(); ++j) {
            if (i == j) continue;
            out.entries.push_back({PairLabel::impostor,
                                   {gallery.subjects[i].subject_id, *a_imgs[i][0]},
                                   {gallery.subjects[j].subject_id, *b_imgs[j][1]}});
        }
    return out;
}

inline PairCounts count_cross_pose(const SubjectGallery& gallery, Pose pose_a, Pose pose_b) {
    if (pose_a == pose_b)
        throw ConfigError("cross-pose protocol needs two distinct poses; use same-pose");
    PairCounts c;
    for (const auto& e : gallery.subjects) {
        std::uint64_t na = e.images_of(pose_a).size();
        std::uint64_t nb = e.images_of(pose_b).size();
        if (na == 0 || nb == 0)
            throw DataError("subject " + e.subject_id + " lacks images of a requested pose");
        c.genuine += na * nb;
    }
    std::uint64_t s = gallery.subjects.size();
    c.impostor = s * (s - 1);
    return c;
}

// ---------------------------------------------------------------------------
// UFPR-style per-fold protocol
// ---------------------------------------------------------------------------

enum class UfprMode { per_eye_exhaustive, external };

inline UfprMode parse_ufpr_mode(std::string_view s) {
    if (s == "per-eye" || s == "per_eye_exhaustive") return UfprMode::per_eye_exhaustive;
    if (s == "external") return UfprMode::external;
    throw ConfigError("unknown ufpr mode '" + std::string(s) + "'");
}

/// Per-eye enumeration over a fold: genuine = all unordered within-subject
/// sample pairs per eye side; impostor = side-matched sample #1 of subject i
/// against sample #2 of subject j, ordered i != j.
inline PairList gen_ufpr_per_eye_pairs(const FoldSpec& fold, const EyeGallery& gallery) {
    std::vector<const EyeGallery::Entry*> subjects;
    for (const auto& id : fold.test_subject_ids) {
        const auto* e = gallery.find(id);
        if (!e) throw DataError("fold subject " + id + " not present in the gallery");
        subjects.push_back(e);
    }
    bool impostors_possible = subjects.size() >= 2;
    auto side_of = [](const EyeGallery::Entry& e, bool left) -> const std::vector<std::string>& {
        return left ? e.left : e.right;
    };
    if (impostors_possible)
        for (const auto* e : subjects)
            for (bool left : {true, false})
                if (side_of(*e, left).size() < 2)
                    throw DataError("subject " + e->subject_id +
                                    " needs at least 2 samples per eye side for impostor "
                                    "enumeration");
    PairList out;
    for (const auto* e : subjects)
        for (bool left : {true, false}) {
            const auto& ids = side_of(*e, left);
            for (std::size_t i = 0; i + 1 < ids.size(); ++i)
                for (std::size_t j = i + 1; j < ids.size(); ++j)
                    out.entries.push_back(
                        {PairLabel::genuine, {e->subject_id, ids[i]}, {e->subject_id, ids[j]}});
        }
    for (bool left : {true, false})
        for (std::size_t i = 0; i < subjects.size(); ++i)
            for (std::size_t j = 0; j < subjects.size(); ++j) {
                if (i == j) continue;
                out.entries.push_back({PairLabel::impostor,
                                       {subjects[i]->subject_id, side_of(*subjects[i], left)[0]},
                                       {subjects[j]->subject_id, side_of(*subjects[j], left)[1]}});
            }
    return out;
}

/// External-mode validation: an official pair list may only reference the
/// fold's test subjects.
inline void validate_external_pairs(const PairList& pairs, const FoldSpec& fold) {
    std::unordered_set<std::string> allowed(fold.test_subject_ids.begin(),
                                            fold.test_subject_ids.end());
    for (std::size_t i = 0; i < pairs.entries.size(); ++i) {
        const auto& e = pairs.entries[i];
        for (const auto* ref : {&e.a, &e.b})
            if (!allowed.count(ref->subject_id))
                throw DataError("pair " + std::to_string(i + 1) + " references subject " +
                                ref->subject_id + " outside fold " +
                                std::to_string(fold.fold_id));
    }
}

}  // namespace periscope
