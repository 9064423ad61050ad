#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace periscope {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for every error the library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Messages carry a 1-based line number.
struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

/// Structurally valid input that violates a domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// Bad parameter value (thresholds, weights, grid steps, modes).
struct ConfigError : Error {
    using Error::Error;
};

/// Runtime data problem: missing records, mismatched sets, degenerate ranges.
struct DataError : Error {
    using Error::Error;
};

/// Crop extraction failure for a specific eye.
struct ExtractionError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Enums
// ---------------------------------------------------------------------------

enum class Pose : std::uint8_t { frontal, three_quarter, profile, unspecified };
enum class EyeSide : std::uint8_t { left, right };
enum class PairLabel : std::uint8_t { genuine, impostor };
enum class Polarity : std::uint8_t { similarity, distance };
enum class Metric : std::uint8_t { cosine, chi2 };

inline constexpr Polarity polarity_of(Metric m) {
    return m == Metric::cosine ? Polarity::similarity : Polarity::distance;
}

inline std::string_view to_string(Pose p) {
    switch (p) {
        case Pose::frontal: return "frontal";
        case Pose::three_quarter: return "three_quarter";
        case Pose::profile: return "profile";
        default: return "unspecified";
    }
}

inline std::string_view to_string(EyeSide s) { return s == EyeSide::left ? "left" : "right"; }
inline std::string_view to_string(Polarity p) { return p == Polarity::similarity ? "similarity" : "distance"; }
inline std::string_view to_string(Metric m) { return m == Metric::cosine ? "cosine" : "chi2"; }

inline std::optional<Pose> parse_pose(std::string_view s) {
    if (s == "frontal") return Pose::frontal;
    if (s == "three_quarter") return Pose::three_quarter;
    if (s == "profile") return Pose::profile;
    if (s == "unspecified") return Pose::unspecified;
    return std::nullopt;
}

inline std::optional<EyeSide> parse_eye_side(std::string_view s) {
    if (s == "left") return EyeSide::left;
    if (s == "right") return EyeSide::right;
    return std::nullopt;
}

inline std::optional<Metric> parse_metric(std::string_view s) {
    if (s == "cosine") return Metric::cosine;
    if (s == "chi2") return Metric::chi2;
    return std::nullopt;
}

inline std::optional<Polarity> parse_polarity(std::string_view s) {
    if (s == "similarity") return Polarity::similarity;
    if (s == "distance") return Polarity::distance;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Geometry primitives
// ---------------------------------------------------------------------------

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// ---------------------------------------------------------------------------
// Face annotation
// ---------------------------------------------------------------------------

/// One annotated face: identity, pose tag and the three landmarks that drive
/// crop geometry. Coordinates are pixels, origin top-left, y down.
struct FaceAnnotation {
    std::string subject_id;
    std::string image_id;
    Pose pose = Pose::unspecified;
    Point left_eye;
    Point right_eye;
    Point nose;
    int image_width = 0;
    int image_height = 0;

    /// Throws ValidationError on coincident eyes, non-finite landmarks or
    /// non-positive image dimensions.
    void validate() const {
        auto finite = [](Point p) { return std::isfinite(p.x) && std::isfinite(p.y); };
        if (!finite(left_eye) || !finite(right_eye) || !finite(nose))
            throw ValidationError("face " + subject_id + "/" + image_id + ": non-finite landmark");
        if (image_width <= 0 || image_height <= 0)
            throw ValidationError("face " + subject_id + "/" + image_id + ": non-positive image dimensions");
        if (left_eye.x == right_eye.x && left_eye.y == right_eye.y)
            throw ValidationError("face " + subject_id + "/" + image_id + ": zero inter-eye distance");
    }
};

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

/// One descriptor vector for one (subject, image, eye side).
struct EmbeddingRecord {
    std::string subject_id;
    std::string image_id;
    Pose pose = Pose::unspecified;
    EyeSide eye_side = EyeSide::left;
    std::vector<float> vector;
};

/// The per-eye descriptors of one image, as resolved from an EmbeddingSet.
/// A side that has no record is null.
struct EyeTemplate {
    const EmbeddingRecord* left = nullptr;
    const EmbeddingRecord* right = nullptr;

    bool empty() const { return !left && !right; }
};

/// An immutable collection of embedding records with a uniform dimension,
/// indexed by (subject, image, eye side). Records keep insertion order,
/// which defines "1st image"/"2nd image" for protocol generation.
class EmbeddingSet {
public:
    EmbeddingSet() = default;
    explicit EmbeddingSet(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::span<const EmbeddingRecord> records() const { return records_; }

    /// Appends a record, enforcing uniform dimension and key uniqueness.
    void add(EmbeddingRecord rec) {
        if (records_.empty() && dim_ == 0) dim_ = rec.vector.size();
        if (rec.vector.size() != dim_)
            throw ValidationError("embedding " + rec.subject_id + "/" + rec.image_id +
                                  ": dimension " + std::to_string(rec.vector.size()) +
                                  " does not match set dimension " + std::to_string(dim_));
        std::string k = key(rec.subject_id, rec.image_id, rec.eye_side);
        if (index_.count(k))
            throw ValidationError("duplicate embedding key " + rec.subject_id + "/" +
                                  rec.image_id + "/" + std::string(to_string(rec.eye_side)));
        index_.emplace(std::move(k), records_.size());
        records_.push_back(std::move(rec));
    }

    const EmbeddingRecord* find(std::string_view subject, std::string_view image, EyeSide side) const {
        auto it = index_.find(key(subject, image, side));
        return it == index_.end() ? nullptr : &records_[it->second];
    }

    EyeTemplate find_template(std::string_view subject, std::string_view image) const {
        return {find(subject, image, EyeSide::left), find(subject, image, EyeSide::right)};
    }

private:
    static std::string key(std::string_view subject, std::string_view image, EyeSide side) {
        std::string k;
        k.reserve(subject.size() + image.size() + 2);
        k.append(subject);
        k.push_back('\x1f');
        k.append(image);
        k.push_back('\x1f');
        k.push_back(side == EyeSide::left ? 'L' : 'R');
        return k;
    }

    std::size_t dim_ = 0;
    std::vector<EmbeddingRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Pairs and folds
// ---------------------------------------------------------------------------

/// Reference to one sample: a (subject, image) pair.
struct SampleRef {
    std::string subject_id;
    std::string image_id;

    friend bool operator==(const SampleRef&, const SampleRef&) = default;
};

/// One enumerated comparison.
struct PairEntry {
    PairLabel label = PairLabel::genuine;
    SampleRef a;
    SampleRef b;
};

/// An enumerated genuine/impostor comparison list defining a protocol.
struct PairList {
    std::vector<PairEntry> entries;

    std::size_t size() const { return entries.size(); }
    std::size_t genuine_count() const {
        std::size_t n = 0;
        for (const auto& e : entries) n += e.label == PairLabel::genuine;
        return n;
    }
    std::size_t impostor_count() const { return entries.size() - genuine_count(); }
};

/// One cross-validation fold: the subjects evaluated in it.
struct FoldSpec {
    int fold_id = 0;
    std::vector<std::string> test_subject_ids;
};

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

/// Genuine and impostor score arrays with a single polarity; the input to
/// every metric computation.
struct ScoreSet {
    std::vector<double> genuine;
    std::vector<double> impostor;
    Polarity polarity = Polarity::similarity;
};

/// Scores aligned row-by-row with the pair list that produced them.
struct ScoredPairs {
    PairList pairs;
    std::vector<double> scores;
    Polarity polarity = Polarity::similarity;

    ScoreSet to_score_set() const {
        ScoreSet out;
        out.polarity = polarity;
        for (std::size_t i = 0; i < pairs.entries.size(); ++i) {
            (pairs.entries[i].label == PairLabel::genuine ? out.genuine : out.impostor)
                .push_back(scores[i]);
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Formatting / parsing helpers
// ---------------------------------------------------------------------------

namespace detail {

/// Shortest decimal string that parses back to exactly the same value.
template <typename T>
std::string fmt_exact(T v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Fixed 9-significant-digit formatting for score and curve files.
inline std::string fmt_sig9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return value;
}

/// Calls fn(line_number, line) for every line; 1-based numbers, tolerates a
/// trailing newline and CRLF endings. Empty input yields no lines.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(++line_no, line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

/// FNV-1a 64-bit, used for input digests in run reports.
inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

}  // namespace periscope
