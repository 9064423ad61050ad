#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "periscope/geometry.hpp"
#include "periscope/image.hpp"

using namespace periscope;

namespace {

FaceAnnotation simple_face() {
    FaceAnnotation f;
    f.subject_id = "s1";
    f.image_id = "f00";
    f.pose = Pose::frontal;
    f.left_eye = {100, 100};
    f.right_eye = {200, 100};
    f.nose = {150, 160};
    f.image_width = 300;
    f.image_height = 300;
    return f;
}

ImageBuffer random_image(int w, int h, int channels, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ImageBuffer img = ImageBuffer::make(w, h, channels);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

}  // namespace

TEST_CASE("alignment on axis-aligned eyes") {
    FaceAnnotation f = simple_face();
    f.left_eye = {10, 20};
    f.right_eye = {110, 20};
    AlignmentTransform t = compute_alignment(f, 113.0);
    CHECK(t.rotation() == Catch::Approx(0.0).margin(1e-15));
    CHECK(t.scale == Catch::Approx(1.13).epsilon(1e-15));
    Point l = t.apply(f.left_eye);
    Point r = t.apply(f.right_eye);
    CHECK(l.x == Catch::Approx(-56.5).margin(1e-12));
    CHECK(l.y == Catch::Approx(0.0).margin(1e-12));
    CHECK(r.x == Catch::Approx(56.5).margin(1e-12));
    CHECK(r.y == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("alignment on vertical eye line") {
    FaceAnnotation f = simple_face();
    f.left_eye = {50, 10};
    f.right_eye = {50, 110};
    AlignmentTransform t = compute_alignment(f, 100.0);
    CHECK(std::abs(t.rotation()) == Catch::Approx(3.14159265358979323846 / 2).margin(1e-12));
    Point l = t.apply(f.left_eye);
    Point r = t.apply(f.right_eye);
    CHECK(l.y == Catch::Approx(0.0).margin(1e-9));
    CHECK(r.y == Catch::Approx(0.0).margin(1e-9));
    CHECK(distance(l, r) == Catch::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("aligned eyes are horizontal and separated by the target") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> coord(-500.0, 1500.0);
    std::uniform_real_distribution<double> target(20.0, 250.0);
    for (int i = 0; i < 1000; ++i) {
        FaceAnnotation f = simple_face();
        f.left_eye = {coord(rng), coord(rng)};
        f.right_eye = {coord(rng), coord(rng)};
        if (distance(f.left_eye, f.right_eye) < 1e-3) continue;
        double ied = target(rng);
        AlignmentTransform t = compute_alignment(f, ied);
        Point l = t.apply(f.left_eye);
        Point r = t.apply(f.right_eye);
        REQUIRE(std::abs(l.y) <= 1e-6);
        REQUIRE(std::abs(r.y) <= 1e-6);
        REQUIRE(std::abs(distance(l, r) - ied) <= 1e-6);
        // invert is the inverse map
        Point back = t.invert(t.apply(f.nose));
        REQUIRE(back.x == Catch::Approx(f.nose.x).margin(1e-6));
        REQUIRE(back.y == Catch::Approx(f.nose.y).margin(1e-6));
    }
}

TEST_CASE("frontality measures projection onto the eye axis") {
    FaceAnnotation f = simple_face();
    CHECK(frontality_offset(f) == Catch::Approx(0.0).margin(1e-12));
    f.nose = {175, 160};
    CHECK(frontality_offset(f) == Catch::Approx(25.0).epsilon(1e-12));
    CHECK(frontality_check(f, 0.40));

    f.nose = {195, 130};
    CHECK(frontality_offset(f) == Catch::Approx(45.0).epsilon(1e-12));
    CHECK_FALSE(frontality_check(f, 0.40));

    SECTION("boundary is strict") {
        f.nose = {200, 137};  // offset exactly 0.5 * 100, both representable
        CHECK(frontality_offset(f) == Catch::Approx(50.0).epsilon(1e-12));
        CHECK_FALSE(frontality_check(f, 0.5));
        CHECK(frontality_check(f, 0.50001));
    }
}

TEST_CASE("resolution check boundary") {
    FaceAnnotation f = simple_face();
    f.right_eye = {150, 100};  // IED 50
    CHECK(resolution_check(f, 50.0));
    f.right_eye = {149.999, 100};
    CHECK_FALSE(resolution_check(f, 50.0));
}

TEST_CASE("filters are invariant under rigid motion") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(0.0, 400.0);
    std::uniform_real_distribution<double> angle(-3.14, 3.14);
    std::uniform_real_distribution<double> shift(-800.0, 800.0);
    CropConfig cfg;
    for (int i = 0; i < 1000; ++i) {
        FaceAnnotation f = simple_face();
        f.left_eye = {coord(rng), coord(rng)};
        f.right_eye = {coord(rng), coord(rng)};
        f.nose = {coord(rng), coord(rng)};
        if (distance(f.left_eye, f.right_eye) < 1.0) continue;

        double th = angle(rng), tx = shift(rng), ty = shift(rng);
        double c = std::cos(th), s = std::sin(th);
        auto move = [&](Point p) {
            return Point{c * p.x - s * p.y + tx, s * p.x + c * p.y + ty};
        };
        FaceAnnotation g = f;
        g.left_eye = move(f.left_eye);
        g.right_eye = move(f.right_eye);
        g.nose = move(f.nose);

        REQUIRE(frontality_offset(g) ==
                Catch::Approx(frontality_offset(f)).margin(1e-7).epsilon(1e-9));
        REQUIRE(inter_eye_distance(g) == Catch::Approx(inter_eye_distance(f)).epsilon(1e-9));
        REQUIRE(frontality_check(g, cfg.frontality_ratio) ==
                frontality_check(f, cfg.frontality_ratio));
        REQUIRE(resolution_check(g, cfg.min_ied) == resolution_check(f, cfg.min_ied));
    }
}

TEST_CASE("classification order and bookkeeping") {
    CropConfig cfg;
    FaceAnnotation f = simple_face();
    CHECK(classify_face(f, cfg) == CropStatus::accepted);

    f.pose = Pose::profile;
    f.nose = {300, 100};  // would also fail frontality
    CHECK(classify_face(f, cfg) == CropStatus::excluded_pose);

    f.pose = Pose::frontal;
    f.right_eye = {130, 100};  // IED 30: fails resolution; nose fails frontality first
    CHECK(classify_face(f, cfg) == CropStatus::rejected_frontality);

    f.nose = {115, 160};
    CHECK(classify_face(f, cfg) == CropStatus::rejected_resolution);

    CropCounts counts;
    counts.add(CropStatus::accepted);
    counts.add(CropStatus::rejected_frontality);
    counts.add(CropStatus::rejected_resolution);
    counts.add(CropStatus::excluded_pose);
    counts.add(CropStatus::accepted);
    CHECK(counts.total == 5);
    CHECK(counts.accepted == 2);
    CHECK(counts.consistent());
}

TEST_CASE("unspecified pose is treated as frontal; three-quarter uses its own target") {
    CropConfig cfg;
    CHECK(cfg.target_for(Pose::frontal) == 113.0);
    CHECK(cfg.target_for(Pose::unspecified) == 113.0);
    CHECK(cfg.target_for(Pose::three_quarter) == 80.0);
    FaceAnnotation f = simple_face();
    f.pose = Pose::unspecified;
    CHECK(classify_face(f, cfg) == CropStatus::accepted);
}

TEST_CASE("identity-scale crop copies source pixels around the eye") {
    ImageBuffer src = random_image(240, 140, 1, 7);
    FaceAnnotation f = simple_face();
    f.left_eye = {60, 60};
    f.right_eye = {173, 60};  // IED exactly 113
    f.nose = {116, 80};
    f.image_width = 240;
    f.image_height = 140;
    CropConfig cfg;

    CropPair crops = extract_crops(src, f, cfg);
    REQUIRE(crops.right.image.width == kCropSize);
    REQUIRE(crops.right.image.height == kCropSize);
    CHECK(crops.right.side == EyeSide::right);
    CHECK_FALSE(crops.right.flipped);
    CHECK(crops.left.flipped);

    auto src_at = [&](int x, int y) -> int {
        if (x < 0 || x >= src.width || y < 0 || y >= src.height) return 0;
        return src.at(x, y, 0);
    };
    for (int i = 0; i < kCropSize; i += 7)
        for (int j = 0; j < kCropSize; j += 7) {
            REQUIRE(crops.right.image.at(j, i, 0) ==
                    src_at(173 + j - kEyePixel, 60 + i - kEyePixel));
            // left crop is mirrored after sampling
            REQUIRE(crops.left.image.at(kCropSize - 1 - j, i, 0) ==
                    src_at(60 + j - kEyePixel, 60 + i - kEyePixel));
        }
}

TEST_CASE("crop rejects out-of-image eye centers") {
    ImageBuffer src = random_image(100, 100, 1, 8);
    FaceAnnotation f = simple_face();
    f.left_eye = {-5, 50};
    f.right_eye = {90, 50};
    f.image_width = 100;
    f.image_height = 100;
    CHECK_THROWS_AS(extract_crops(src, f, CropConfig{}), ExtractionError);
    f.left_eye = {10, 50};
    f.right_eye = {90, 120};
    CHECK_THROWS_AS(extract_crops(src, f, CropConfig{}), ExtractionError);
}

TEST_CASE("flip is an involution") {
    for (std::uint64_t seed : {1, 2, 3}) {
        ImageBuffer img = random_image(31, 17, 3, seed);
        ImageBuffer twice = flip_horizontal(flip_horizontal(img));
        REQUIRE(twice.pixels == img.pixels);
    }
}

TEST_CASE("pixel normalization range") {
    ImageBuffer img = ImageBuffer::make(2, 1, 1);
    img.set(0, 0, 0, 0);
    img.set(1, 0, 0, 255);
    auto v = normalize_pixels(img);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == Catch::Approx(-127.5 / 128.0).epsilon(1e-12));
    CHECK(v[1] == Catch::Approx(127.5 / 128.0).epsilon(1e-12));
}

TEST_CASE("crop report lists one status per face") {
    std::vector<FaceAnnotation> faces = {simple_face(), simple_face()};
    faces[1].image_id = "f01";
    faces[1].pose = Pose::profile;
    std::vector<CropStatus> statuses = {CropStatus::accepted, CropStatus::excluded_pose};
    std::string csv = write_crop_report(faces, statuses);
    CHECK(csv == "subject_id,image_id,pose,status\n"
                 "s1,f00,frontal,accepted\n"
                 "s1,f01,profile,excluded_pose\n");
}

TEST_CASE("png encode/decode round trip") {
    for (int channels : {1, 3}) {
        ImageBuffer img = random_image(37, 23, channels, 99 + channels);
        ImageBuffer back = decode_png(encode_png(img));
        REQUIRE(back.width == img.width);
        REQUIRE(back.height == img.height);
        REQUIRE(back.channels == img.channels);
        REQUIRE(back.pixels == img.pixels);
    }
    CHECK_THROWS_AS(decode_png("not a png"), DataError);
}

TEST_CASE("pnm encode/decode round trip") {
    for (int channels : {1, 3}) {
        ImageBuffer img = random_image(19, 11, channels, 5 + channels);
        ImageBuffer back = decode_pnm(encode_pnm(img));
        REQUIRE(back.channels == img.channels);
        REQUIRE(back.pixels == img.pixels);
    }
    CHECK_THROWS_AS(decode_pnm("P7\n1 1\n255\nx"), DataError);
    CHECK_THROWS_AS(decode_pnm("P5\n4 4\n255\nxx"), DataError);  // truncated
}
