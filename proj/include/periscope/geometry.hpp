#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "periscope/image.hpp"
#include "periscope/types.hpp"

namespace periscope {

inline constexpr int kCropSize = 113;
inline constexpr int kEyePixel = 56;  // crop row/col holding the eye center

/// Knobs for filtering and crop rendering.
struct CropConfig {
    double target_ied = 113.0;         // frontal images
    double three_quarter_ied = 80.0;   // three-quarter images
    double min_ied = 50.0;
    double frontality_ratio = 0.40;

    void validate() const {
        if (!(target_ied > 0) || !(three_quarter_ied > 0))
            throw ConfigError("target inter-eye distances must be positive");
        if (!(min_ied > 0)) throw ConfigError("min_ied must be positive");
        if (!(frontality_ratio > 0) || !(frontality_ratio <= 1))
            throw ConfigError("frontality_ratio must be in (0, 1]");
    }

    double target_for(Pose pose) const {
        return pose == Pose::three_quarter ? three_quarter_ied : target_ied;
    }
};

// ---------------------------------------------------------------------------
// Quality filters
// ---------------------------------------------------------------------------

inline double inter_eye_distance(const FaceAnnotation& face) {
    return distance(face.left_eye, face.right_eye);
}

/// Absolute projection of the nose offset from the eye midpoint onto the
/// inter-eye axis.
inline double frontality_offset(const FaceAnnotation& face) {
    double ied = inter_eye_distance(face);
    double ux = (face.right_eye.x - face.left_eye.x) / ied;
    double uy = (face.right_eye.y - face.left_eye.y) / ied;
    double mx = (face.left_eye.x + face.right_eye.x) / 2.0;
    double my = (face.left_eye.y + face.right_eye.y) / 2.0;
    return std::abs((face.nose.x - mx) * ux + (face.nose.y - my) * uy);
}

inline bool frontality_check(const FaceAnnotation& face, double ratio) {
    return frontality_offset(face) < ratio * inter_eye_distance(face);
}

inline bool resolution_check(const FaceAnnotation& face, double min_ied) {
    return inter_eye_distance(face) >= min_ied;
}

enum class CropStatus { accepted, rejected_frontality, rejected_resolution, excluded_pose };

inline std::string to_string(CropStatus s) {
    switch (s) {
        case CropStatus::accepted: return "accepted";
        case CropStatus::rejected_frontality: return "rejected_frontality";
        case CropStatus::rejected_resolution: return "rejected_resolution";
        case CropStatus::excluded_pose: return "excluded_pose";
    }
    throw ConfigError("unknown crop status");
}

inline CropStatus classify_face(const FaceAnnotation& face, const CropConfig& cfg) {
    if (face.pose == Pose::profile) return CropStatus::excluded_pose;
    if (!frontality_check(face, cfg.frontality_ratio)) return CropStatus::rejected_frontality;
    if (!resolution_check(face, cfg.min_ied)) return CropStatus::rejected_resolution;
    return CropStatus::accepted;
}

/// Per-status tallies; one status per input face.
struct CropCounts {
    std::size_t total = 0;
    std::size_t accepted = 0;
    std::size_t rejected_frontality = 0;
    std::size_t rejected_resolution = 0;
    std::size_t excluded_pose = 0;

    void add(CropStatus s) {
        ++total;
        switch (s) {
            case CropStatus::accepted: ++accepted; break;
            case CropStatus::rejected_frontality: ++rejected_frontality; break;
            case CropStatus::rejected_resolution: ++rejected_resolution; break;
            case CropStatus::excluded_pose: ++excluded_pose; break;
        }
    }

    bool consistent() const {
        return accepted + rejected_frontality + rejected_resolution + excluded_pose == total;
    }
};

// ---------------------------------------------------------------------------
// Alignment
// ---------------------------------------------------------------------------

/// Similarity transform mapping source coordinates into an eye-aligned frame:
/// eye midpoint at the origin, eyes on the x axis, inter-eye distance equal
/// to the target.
struct AlignmentTransform {
    double cos_t = 1.0;
    double sin_t = 0.0;
    double scale = 1.0;
    Point origin{0.0, 0.0};

    Point apply(Point p) const {
        double qx = p.x - origin.x;
        double qy = p.y - origin.y;
        return {scale * (cos_t * qx - sin_t * qy), scale * (sin_t * qx + cos_t * qy)};
    }

    Point invert(Point q) const {
        double rx = q.x / scale;
        double ry = q.y / scale;
        return {cos_t * rx + sin_t * ry + origin.x, -sin_t * rx + cos_t * ry + origin.y};
    }

    double rotation() const { return std::atan2(sin_t, cos_t); }
};

inline AlignmentTransform compute_alignment(const FaceAnnotation& face, double target_ied) {
    double dx = face.right_eye.x - face.left_eye.x;
    double dy = face.right_eye.y - face.left_eye.y;
    double ied = std::hypot(dx, dy);
    if (!(ied > 0)) throw ValidationError("coincident eye centers for " + face.subject_id);
    AlignmentTransform t;
    t.cos_t = dx / ied;
    t.sin_t = -dy / ied;
    t.scale = target_ied / ied;
    t.origin = {(face.left_eye.x + face.right_eye.x) / 2.0,
                (face.left_eye.y + face.right_eye.y) / 2.0};
    return t;
}

// ---------------------------------------------------------------------------
// Crop rendering
// ---------------------------------------------------------------------------

/// One 113x113 ocular crop; left crops are mirrored so both sides share the
/// right-eye orientation.
struct OcularCrop {
    EyeSide side = EyeSide::right;
    bool flipped = false;
    ImageBuffer image;
};

struct CropPair {
    OcularCrop left;
    OcularCrop right;
};

namespace detail {

inline double bilinear_sample(const ImageBuffer& img, double x, double y, int c) {
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0;
    double fy = y - y0;
    auto fetch = [&](int xi, int yi) -> double {
        if (xi < 0 || xi >= img.width || yi < 0 || yi >= img.height) return 0.0;
        return img.at(xi, yi, c);
    };
    return fetch(x0, y0) * (1 - fx) * (1 - fy) + fetch(x0 + 1, y0) * fx * (1 - fy) +
           fetch(x0, y0 + 1) * (1 - fx) * fy + fetch(x0 + 1, y0 + 1) * fx * fy;
}

inline ImageBuffer render_eye_crop(const ImageBuffer& src, const AlignmentTransform& t,
                                   Point eye_center) {
    Point ce = t.apply(eye_center);
    ImageBuffer crop = ImageBuffer::make(kCropSize, kCropSize, src.channels);
    for (int i = 0; i < kCropSize; ++i) {
        for (int j = 0; j < kCropSize; ++j) {
            Point aligned{ce.x + (j - kEyePixel), ce.y + (i - kEyePixel)};
            Point p = t.invert(aligned);
            for (int c = 0; c < src.channels; ++c) {
                double v = bilinear_sample(src, p.x, p.y, c);
                v = std::max(0.0, std::min(255.0, v));
                crop.set(j, i, c, static_cast<std::uint8_t>(std::lround(v)));
            }
        }
    }
    return crop;
}

}  // namespace detail

inline ImageBuffer flip_horizontal(const ImageBuffer& img) {
    ImageBuffer out = ImageBuffer::make(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.set(img.width - 1 - x, y, c, img.at(x, y, c));
    return out;
}

/// Renders both eye crops of an accepted face. Throws ExtractionError when an
/// eye center lies outside the source image.
inline CropPair extract_crops(const ImageBuffer& src, const FaceAnnotation& face,
                              const CropConfig& cfg) {
    auto in_bounds = [&](Point p) {
        return p.x >= 0 && p.x <= src.width - 1 && p.y >= 0 && p.y <= src.height - 1;
    };
    if (!in_bounds(face.left_eye))
        throw ExtractionError("left eye center outside image for " + face.subject_id + "/" +
                              face.image_id);
    if (!in_bounds(face.right_eye))
        throw ExtractionError("right eye center outside image for " + face.subject_id + "/" +
                              face.image_id);

    AlignmentTransform t = compute_alignment(face, cfg.target_for(face.pose));
    CropPair out;
    out.right = {EyeSide::right, false, detail::render_eye_crop(src, t, face.right_eye)};
    out.left = {EyeSide::left, true,
                flip_horizontal(detail::render_eye_crop(src, t, face.left_eye))};
    return out;
}

struct FaceResult {
    CropStatus status = CropStatus::accepted;
    std::optional<CropPair> crops;
};

inline FaceResult process_face(const ImageBuffer& src, const FaceAnnotation& face,
                               const CropConfig& cfg) {
    FaceResult r;
    r.status = classify_face(face, cfg);
    if (r.status == CropStatus::accepted) r.crops = extract_crops(src, face, cfg);
    return r;
}

/// Maps 8-bit pixels into the embedding-network input range.
inline std::vector<float> normalize_pixels(const ImageBuffer& img) {
    std::vector<float> out(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out[i] = (static_cast<float>(img.pixels[i]) - 127.5f) / 128.0f;
    return out;
}

inline std::string crop_filename(const FaceAnnotation& face, EyeSide side) {
    return face.subject_id + "_" + face.image_id + "_" +
           (side == EyeSide::left ? "L" : "R") + ".png";
}

/// CSV report: one row per input face with its filter outcome.
inline std::string write_crop_report(std::span<const FaceAnnotation> faces,
                                     std::span<const CropStatus> statuses) {
    if (faces.size() != statuses.size())
        throw ConfigError("crop report: faces and statuses differ in length");
    std::string out = "subject_id,image_id,pose,status\n";
    for (std::size_t i = 0; i < faces.size(); ++i) {
        out += faces[i].subject_id;
        out += ',';
        out += faces[i].image_id;
        out += ',';
        out += to_string(faces[i].pose);
        out += ',';
        out += to_string(statuses[i]);
        out += '\n';
    }
    return out;
}

}  // namespace periscope
