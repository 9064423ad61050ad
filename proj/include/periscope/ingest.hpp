#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "periscope/types.hpp"

namespace periscope {

// ---------------------------------------------------------------------------
// Face manifest (CSV)
// ---------------------------------------------------------------------------
// subject_id,image_id,pose,lx,ly,rx,ry,nx,ny,img_w,img_h
// Decimal pixel coordinates, origin top-left, x rightward, y downward.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kManifestHeader =
    "subject_id,image_id,pose,lx,ly,rx,ry,nx,ny,img_w,img_h";

inline std::vector<FaceAnnotation> parse_face_manifest(std::string_view text) {
    std::vector<FaceAnnotation> out;
    bool saw_header = false;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line_no == 1) {
            if (line != kManifestHeader)
                throw ParseError(line_no, "expected manifest header \"" + std::string(kManifestHeader) + "\"");
            saw_header = true;
            return;
        }
        if (line.empty()) throw ParseError(line_no, "empty manifest row");
        auto fields = detail::split(line, ',');
        if (fields.size() != 11)
            throw ParseError(line_no, "expected 11 fields, got " + std::to_string(fields.size()));

        FaceAnnotation face;
        face.subject_id = std::string(fields[0]);
        face.image_id = std::string(fields[1]);
        auto pose = parse_pose(fields[2]);
        if (!pose) throw ParseError(line_no, "unknown pose \"" + std::string(fields[2]) + "\"");
        face.pose = *pose;

        double coords[6];
        for (int i = 0; i < 6; ++i) {
            auto v = detail::parse_number<double>(fields[3 + i]);
            if (!v) throw ParseError(line_no, "bad coordinate \"" + std::string(fields[3 + i]) + "\"");
            coords[i] = *v;
        }
        face.left_eye = {coords[0], coords[1]};
        face.right_eye = {coords[2], coords[3]};
        face.nose = {coords[4], coords[5]};

        auto w = detail::parse_number<int>(fields[9]);
        auto h = detail::parse_number<int>(fields[10]);
        if (!w || !h) throw ParseError(line_no, "bad image dimensions");
        face.image_width = *w;
        face.image_height = *h;

        try {
            face.validate();
        } catch (const ValidationError& e) {
            throw ParseError(line_no, e.what());
        }
        out.push_back(std::move(face));
    });
    if (!saw_header) throw ParseError(1, "missing manifest header");
    return out;
}

inline std::string write_face_manifest(std::span<const FaceAnnotation> faces) {
    std::string out(kManifestHeader);
    out.push_back('\n');
    for (const auto& f : faces) {
        out += f.subject_id;
        out.push_back(',');
        out += f.image_id;
        out.push_back(',');
        out += to_string(f.pose);
        for (double v : {f.left_eye.x, f.left_eye.y, f.right_eye.x, f.right_eye.y, f.nose.x, f.nose.y}) {
            out.push_back(',');
            out += detail::fmt_exact(v);
        }
        out.push_back(',');
        out += std::to_string(f.image_width);
        out.push_back(',');
        out += std::to_string(f.image_height);
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Embedding store (text)
// ---------------------------------------------------------------------------
// Header: OCEMB v1 dim=<D>
// Record: subject_id<TAB>image_id<TAB>pose<TAB>eye_side<TAB>v1 v2 ... vD
// ---------------------------------------------------------------------------

/// strict: negative values are errors (descriptors are post-rectification).
/// lenient: negative values clamp to 0 and are counted.
enum class EmbeddingMode : std::uint8_t { strict, lenient };

struct EmbeddingReadResult {
    EmbeddingSet set;
    std::size_t clamped_values = 0;
};

inline EmbeddingReadResult read_embeddings(std::string_view text,
                                           EmbeddingMode mode = EmbeddingMode::strict) {
    EmbeddingReadResult result;
    bool saw_header = false;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line_no == 1) {
            constexpr std::string_view prefix = "OCEMB v1 dim=";
            if (!line.starts_with(prefix))
                throw ParseError(line_no, "expected header \"OCEMB v1 dim=<D>\"");
            auto dim = detail::parse_number<std::size_t>(line.substr(prefix.size()));
            if (!dim || *dim == 0) throw ParseError(line_no, "bad dimension in header");
            result.set = EmbeddingSet(*dim);
            saw_header = true;
            return;
        }
        if (line.empty()) throw ParseError(line_no, "empty record line");
        auto fields = detail::split(line, '\t');
        if (fields.size() != 5)
            throw ParseError(line_no, "expected 5 tab-separated fields, got " + std::to_string(fields.size()));

        EmbeddingRecord rec;
        rec.subject_id = std::string(fields[0]);
        rec.image_id = std::string(fields[1]);
        auto pose = parse_pose(fields[2]);
        if (!pose) throw ParseError(line_no, "unknown pose \"" + std::string(fields[2]) + "\"");
        rec.pose = *pose;
        auto side = parse_eye_side(fields[3]);
        if (!side) throw ParseError(line_no, "unknown eye side \"" + std::string(fields[3]) + "\"");
        rec.eye_side = *side;

        rec.vector.reserve(result.set.dim());
        for (std::string_view tok : detail::split(fields[4], ' ')) {
            if (tok.empty()) throw ParseError(line_no, "stray whitespace in value list");
            auto v = detail::parse_number<float>(tok);
            if (!v) throw ParseError(line_no, "bad value \"" + std::string(tok) + "\"");
            if (!std::isfinite(*v)) throw ParseError(line_no, "non-finite value");
            if (*v < 0.0f) {
                if (mode == EmbeddingMode::strict)
                    throw ParseError(line_no, "negative value " + std::string(tok) + " (strict mode)");
                *v = 0.0f;
                ++result.clamped_values;
            }
            rec.vector.push_back(*v);
        }
        if (rec.vector.size() != result.set.dim())
            throw ParseError(line_no, "expected " + std::to_string(result.set.dim()) + " values, got " +
                                          std::to_string(rec.vector.size()));
        try {
            result.set.add(std::move(rec));
        } catch (const ValidationError& e) {
            throw ParseError(line_no, e.what());
        }
    });
    if (!saw_header) throw ParseError(1, "missing embedding store header");
    return result;
}

/// Deterministic serialization: records sorted by (subject, image, eye side),
/// values in shortest exact decimal form.
inline std::string write_embeddings(const EmbeddingSet& set) {
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto recs = set.records();
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const auto& a = recs[i];
        const auto& b = recs[j];
        if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
        if (a.image_id != b.image_id) return a.image_id < b.image_id;
        return a.eye_side < b.eye_side;
    });

    std::string out = "OCEMB v1 dim=" + std::to_string(set.dim()) + "\n";
    for (std::size_t idx : order) {
        const auto& r = recs[idx];
        out += r.subject_id;
        out.push_back('\t');
        out += r.image_id;
        out.push_back('\t');
        out += to_string(r.pose);
        out.push_back('\t');
        out += to_string(r.eye_side);
        out.push_back('\t');
        for (std::size_t i = 0; i < r.vector.size(); ++i) {
            if (i) out.push_back(' ');
            out += detail::fmt_exact(r.vector[i]);
        }
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pair list (text): G|I subjA imgA subjB imgB
// ---------------------------------------------------------------------------

namespace detail {

inline std::string unordered_pair_key(const SampleRef& a, const SampleRef& b) {
    std::string ka = a.subject_id + '\x1f' + a.image_id;
    std::string kb = b.subject_id + '\x1f' + b.image_id;
    if (kb < ka) std::swap(ka, kb);
    return ka + '\x1e' + kb;
}

}  // namespace detail

inline PairList parse_pair_list(std::string_view text) {
    PairList out;
    std::unordered_set<std::string> seen;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) throw ParseError(line_no, "empty pair line");
        auto fields = detail::split(line, ' ');
        if (fields.size() != 5)
            throw ParseError(line_no, "expected \"G|I subjA imgA subjB imgB\", got " +
                                          std::to_string(fields.size()) + " fields");
        PairEntry e;
        if (fields[0] == "G") e.label = PairLabel::genuine;
        else if (fields[0] == "I") e.label = PairLabel::impostor;
        else throw ParseError(line_no, "label must be G or I");
        e.a = {std::string(fields[1]), std::string(fields[2])};
        e.b = {std::string(fields[3]), std::string(fields[4])};

        bool same_subject = e.a.subject_id == e.b.subject_id;
        if (e.label == PairLabel::genuine && !same_subject)
            throw ParseError(line_no, "genuine pair with different subjects");
        if (e.label == PairLabel::impostor && same_subject)
            throw ParseError(line_no, "impostor pair with equal subjects");
        if (e.a == e.b) throw ParseError(line_no, "pair compares an image with itself");
        if (!seen.insert(detail::unordered_pair_key(e.a, e.b)).second)
            throw ParseError(line_no, "duplicate pair");
        out.entries.push_back(std::move(e));
    });
    return out;
}

inline std::string write_pair_list(const PairList& pairs) {
    std::string out;
    for (const auto& e : pairs.entries) {
        out.push_back(e.label == PairLabel::genuine ? 'G' : 'I');
        out.push_back(' ');
        out += e.a.subject_id;
        out.push_back(' ');
        out += e.a.image_id;
        out.push_back(' ');
        out += e.b.subject_id;
        out.push_back(' ');
        out += e.b.image_id;
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fold definition (text): "fold <k>" line, then one subject_id per line
// ---------------------------------------------------------------------------

inline std::vector<FoldSpec> parse_folds(std::string_view text) {
    std::vector<FoldSpec> out;
    std::unordered_set<std::string> current_ids;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) return;  // blank separators allowed
        if (line.starts_with("fold ")) {
            auto id = detail::parse_number<int>(line.substr(5));
            if (!id) throw ParseError(line_no, "bad fold id");
            out.push_back(FoldSpec{*id, {}});
            current_ids.clear();
            return;
        }
        if (out.empty()) throw ParseError(line_no, "subject listed before any \"fold <k>\" line");
        if (!current_ids.insert(std::string(line)).second)
            throw ParseError(line_no, "duplicate subject \"" + std::string(line) + "\" in fold " +
                                          std::to_string(out.back().fold_id));
        out.back().test_subject_ids.emplace_back(line);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Score file (CSV): label,subject_a,image_a,subject_b,image_b,score
// ---------------------------------------------------------------------------

inline constexpr std::string_view kScoreHeader = "label,subject_a,image_a,subject_b,image_b,score";

/// Scores are printed with 9 significant digits.
inline std::string write_score_csv(const ScoredPairs& scored) {
    std::string out(kScoreHeader);
    out.push_back('\n');
    for (std::size_t i = 0; i < scored.pairs.entries.size(); ++i) {
        const auto& e = scored.pairs.entries[i];
        out.push_back(e.label == PairLabel::genuine ? 'G' : 'I');
        out.push_back(',');
        out += e.a.subject_id;
        out.push_back(',');
        out += e.a.image_id;
        out.push_back(',');
        out += e.b.subject_id;
        out.push_back(',');
        out += e.b.image_id;
        out.push_back(',');
        out += detail::fmt_sig9(scored.scores[i]);
        out.push_back('\n');
    }
    return out;
}

/// Polarity is not part of the file format; the caller supplies it.
inline ScoredPairs read_score_csv(std::string_view text, Polarity polarity) {
    ScoredPairs out;
    out.polarity = polarity;
    bool saw_header = false;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line_no == 1) {
            if (line != kScoreHeader)
                throw ParseError(line_no, "expected score header \"" + std::string(kScoreHeader) + "\"");
            saw_header = true;
            return;
        }
        auto fields = detail::split(line, ',');
        if (fields.size() != 6)
            throw ParseError(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
        PairEntry e;
        if (fields[0] == "G") e.label = PairLabel::genuine;
        else if (fields[0] == "I") e.label = PairLabel::impostor;
        else throw ParseError(line_no, "label must be G or I");
        e.a = {std::string(fields[1]), std::string(fields[2])};
        e.b = {std::string(fields[3]), std::string(fields[4])};
        bool same_subject = e.a.subject_id == e.b.subject_id;
        if ((e.label == PairLabel::genuine) != same_subject)
            throw ParseError(line_no, "label contradicts subject equality");
        auto score = detail::parse_number<double>(fields[5]);
        if (!score || !std::isfinite(*score)) throw ParseError(line_no, "bad score");
        out.pairs.entries.push_back(std::move(e));
        out.scores.push_back(*score);
    });
    if (!saw_header) throw ParseError(1, "missing score header");
    return out;
}

}  // namespace periscope
