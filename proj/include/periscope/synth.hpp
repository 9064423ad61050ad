#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "periscope/types.hpp"

namespace periscope {

/// Seeded generator with hand-rolled uniform and normal draws so the output
/// stream is identical across platforms and standard libraries.
class SynthRng {
  public:
    explicit SynthRng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (cosine branch).
    double normal() {
        double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

  private:
    std::mt19937_64 eng_;
};

enum class EyeLayout { both_per_image, per_eye_samples };

struct SynthParams {
    int n_subjects = 10;
    int n_images = 4;
    int dim = 64;
    double separation = 1.0;
    double noise = 0.1;
    std::uint64_t seed = 1;
    EyeLayout layout = EyeLayout::both_per_image;

    void validate() const {
        if (n_subjects < 1 || n_images < 1 || dim < 1)
            throw ConfigError("synthetic counts must be positive");
        if (!(separation >= 0) || !(noise >= 0))
            throw ConfigError("separation and noise must be non-negative");
    }
};

namespace detail {

inline std::string synth_subject_id(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%04d", i);
    return buf;
}

inline std::string synth_image_id(char prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%02d", prefix, i);
    return buf;
}

}  // namespace detail

/// Non-negative class-mean-plus-noise embeddings, deterministic per seed.
/// both_per_image stores a left and a right record under each image id;
/// per_eye_samples stores one single-sided record per sample (UFPR style).
inline EmbeddingSet gen_synthetic_embeddings(const SynthParams& p) {
    p.validate();
    SynthRng rng(p.seed);
    EmbeddingSet set;
    std::vector<double> mean(p.dim);
    auto draw_record = [&](const std::string& subject, const std::string& image, EyeSide side) {
        EmbeddingRecord r;
        r.subject_id = subject;
        r.image_id = image;
        r.pose = Pose::frontal;
        r.eye_side = side;
        r.vector.resize(p.dim);
        for (int d = 0; d < p.dim; ++d) {
            double v = mean[d] + p.noise * rng.normal();
            r.vector[d] = static_cast<float>(v < 0 ? 0.0 : v);
        }
        set.add(std::move(r));
    };
    for (int s = 0; s < p.n_subjects; ++s) {
        std::string subject = detail::synth_subject_id(s);
        for (int d = 0; d < p.dim; ++d) mean[d] = p.separation * rng.uniform();
        if (p.layout == EyeLayout::both_per_image) {
            for (int i = 0; i < p.n_images; ++i) {
                std::string image = detail::synth_image_id('f', i);
                draw_record(subject, image, EyeSide::left);
                draw_record(subject, image, EyeSide::right);
            }
        } else {
            for (int i = 0; i < p.n_images; ++i)
                draw_record(subject, detail::synth_image_id('L', i), EyeSide::left);
            for (int i = 0; i < p.n_images; ++i)
                draw_record(subject, detail::synth_image_id('R', i), EyeSide::right);
        }
    }
    return set;
}

/// Filter-passing annotations: one row per subject, pose, and image index.
/// Frontal ids match the synthetic embedding store's image ids.
inline std::vector<FaceAnnotation> gen_synthetic_manifest(int n_subjects, int images_per_pose) {
    if (n_subjects < 1 || images_per_pose < 1)
        throw ConfigError("synthetic counts must be positive");
    std::vector<FaceAnnotation> out;
    out.reserve(static_cast<std::size_t>(n_subjects) * images_per_pose * 3);
    struct PoseTag {
        Pose pose;
        char prefix;
    };
    const PoseTag tags[] = {{Pose::frontal, 'f'}, {Pose::three_quarter, 'q'}, {Pose::profile, 'p'}};
    for (int s = 0; s < n_subjects; ++s) {
        std::string subject = detail::synth_subject_id(s);
        for (const auto& tag : tags)
            for (int i = 0; i < images_per_pose; ++i) {
                FaceAnnotation f;
                f.subject_id = subject;
                f.image_id = detail::synth_image_id(tag.prefix, i);
                f.pose = tag.pose;
                f.left_eye = {100, 100};
                f.right_eye = {200, 100};
                f.nose = {150, 160};
                f.image_width = 300;
                f.image_height = 300;
                out.push_back(std::move(f));
            }
    }
    return out;
}

}  // namespace periscope
