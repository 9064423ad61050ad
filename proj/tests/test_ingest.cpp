#include <catch2/catch_amalgamated.hpp>

#include "periscope/ingest.hpp"

using namespace periscope;

namespace {

FaceAnnotation face(const std::string& subject, const std::string& image, Pose pose) {
    FaceAnnotation f;
    f.subject_id = subject;
    f.image_id = image;
    f.pose = pose;
    f.left_eye = {100.25, 100.5};
    f.right_eye = {200.0, 101.0};
    f.nose = {150.0, 160.0};
    f.image_width = 300;
    f.image_height = 300;
    return f;
}

}  // namespace

TEST_CASE("face manifest round trip") {
    std::vector<FaceAnnotation> faces = {face("s1", "f00", Pose::frontal),
                                         face("s1", "q00", Pose::three_quarter),
                                         face("s2", "p01", Pose::profile)};
    std::string text = write_face_manifest(faces);
    auto parsed = parse_face_manifest(text);
    REQUIRE(parsed.size() == 3);
    CHECK(parsed[0].subject_id == "s1");
    CHECK(parsed[1].pose == Pose::three_quarter);
    CHECK(parsed[2].image_id == "p01");
    CHECK(parsed[0].left_eye.x == 100.25);
    CHECK(parsed[0].right_eye.y == 101.0);
    CHECK(write_face_manifest(parsed) == text);
}

TEST_CASE("face manifest rejects malformed input") {
    CHECK_THROWS_AS(parse_face_manifest(""), ParseError);
    CHECK_THROWS_AS(parse_face_manifest("wrong,header\n"), ParseError);

    std::string header(kManifestHeader);
    CHECK_THROWS_AS(parse_face_manifest(header + "\ns1,f00,frontal,1,2,3\n"), ParseError);
    CHECK_THROWS_AS(
        parse_face_manifest(header + "\ns1,f00,sideways,1,2,3,4,5,6,10,10\n"), ParseError);
    CHECK_THROWS_AS(parse_face_manifest(header + "\ns1,f00,frontal,1,2,3,x,5,6,10,10\n"),
                    ParseError);
    // coincident eyes fail row validation
    CHECK_THROWS_AS(parse_face_manifest(header + "\ns1,f00,frontal,1,2,1,2,5,6,10,10\n"),
                    ParseError);

    try {
        parse_face_manifest(header + "\ns1,f00,frontal,1,2,3,4,5,6,10,10\nbroken\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("header-only manifest is empty") {
    CHECK(parse_face_manifest(std::string(kManifestHeader) + "\n").empty());
}

TEST_CASE("embedding store round trip") {
    EmbeddingSet set(3);
    EmbeddingRecord r;
    r.subject_id = "s1";
    r.image_id = "f00";
    r.pose = Pose::frontal;
    r.eye_side = EyeSide::left;
    r.vector = {0.5f, 0.0f, 1.25f};
    set.add(r);
    r.eye_side = EyeSide::right;
    r.vector = {1.0f, 2.0f, 3.0f};
    set.add(r);

    std::string text = write_embeddings(set);
    auto result = read_embeddings(text);
    REQUIRE(result.set.size() == 2);
    CHECK(result.clamped_values == 0);
    CHECK(result.set.dim() == 3);
    const auto* left = result.set.find("s1", "f00", EyeSide::left);
    REQUIRE(left != nullptr);
    CHECK(left->vector == std::vector<float>{0.5f, 0.0f, 1.25f});
    CHECK(write_embeddings(result.set) == text);
}

TEST_CASE("embedding store validation") {
    CHECK_THROWS_AS(read_embeddings("BAD header\n"), ParseError);
    CHECK_THROWS_AS(read_embeddings("OCEMB v1 dim=0\n"), ParseError);

    std::string good = "OCEMB v1 dim=2\ns1\tf00\tfrontal\tleft\t1 2\n";
    CHECK(read_embeddings(good).set.size() == 1);

    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(read_embeddings("OCEMB v1 dim=2\ns1\tf00\tfrontal\tleft\t1 2 3\n"),
                        ParseError);
    }
    SECTION("duplicate key") {
        CHECK_THROWS_AS(read_embeddings(good + "s1\tf00\tfrontal\tleft\t3 4\n"), ParseError);
    }
    SECTION("negative values: strict throws, lenient clamps and counts") {
        std::string neg = "OCEMB v1 dim=2\ns1\tf00\tfrontal\tleft\t1 -2\n";
        CHECK_THROWS_AS(read_embeddings(neg, EmbeddingMode::strict), ParseError);
        auto lenient = read_embeddings(neg, EmbeddingMode::lenient);
        CHECK(lenient.clamped_values == 1);
        CHECK(lenient.set.find("s1", "f00", EyeSide::left)->vector ==
              std::vector<float>{1.0f, 0.0f});
    }
    SECTION("non-finite value") {
        CHECK_THROWS_AS(read_embeddings("OCEMB v1 dim=2\ns1\tf00\tfrontal\tleft\t1 inf\n"),
                        ParseError);
    }
}

TEST_CASE("pair list round trip and validation") {
    std::string text = "G s1 f00 s1 f01\nI s1 f00 s2 f01\n";
    PairList pairs = parse_pair_list(text);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs.genuine_count() == 1);
    CHECK(pairs.impostor_count() == 1);
    CHECK(write_pair_list(pairs) == text);

    CHECK_THROWS_AS(parse_pair_list("X s1 f00 s1 f01\n"), ParseError);
    CHECK_THROWS_AS(parse_pair_list("G s1 f00 s2 f01\n"), ParseError);
    CHECK_THROWS_AS(parse_pair_list("I s1 f00 s1 f01\n"), ParseError);
    CHECK_THROWS_AS(parse_pair_list("G s1 f00 s1 f00\n"), ParseError);
    // duplicates are rejected regardless of orientation
    CHECK_THROWS_AS(parse_pair_list("G s1 f00 s1 f01\nG s1 f01 s1 f00\n"), ParseError);
    CHECK(parse_pair_list("").size() == 0);
}

TEST_CASE("fold file parsing") {
    auto folds = parse_folds("fold 1\ns1\ns2\n\nfold 2\ns3\n");
    REQUIRE(folds.size() == 2);
    CHECK(folds[0].fold_id == 1);
    CHECK(folds[0].test_subject_ids == std::vector<std::string>{"s1", "s2"});
    CHECK(folds[1].test_subject_ids == std::vector<std::string>{"s3"});

    CHECK_THROWS_AS(parse_folds("s1\nfold 1\n"), ParseError);
    CHECK_THROWS_AS(parse_folds("fold 1\ns1\ns1\n"), ParseError);
    CHECK_THROWS_AS(parse_folds("fold x\n"), ParseError);
}

TEST_CASE("score csv round trip") {
    ScoredPairs scored;
    scored.polarity = Polarity::similarity;
    scored.pairs.entries = {{PairLabel::genuine, {"s1", "f00"}, {"s1", "f01"}},
                            {PairLabel::impostor, {"s1", "f00"}, {"s2", "f01"}}};
    scored.scores = {0.123456789123, 0.5};
    std::string text = write_score_csv(scored);
    CHECK(text.find("0.123456789,") == std::string::npos);  // 9 significant digits, no comma after
    CHECK(text.find(",0.123456789\n") != std::string::npos);

    ScoredPairs back = read_score_csv(text, Polarity::similarity);
    REQUIRE(back.scores.size() == 2);
    CHECK(back.scores[0] == Catch::Approx(0.123456789).epsilon(1e-12));
    CHECK(back.pairs.entries[1].b.subject_id == "s2");
    CHECK(back.polarity == Polarity::similarity);

    CHECK_THROWS_AS(read_score_csv("nope\n", Polarity::similarity), ParseError);
    std::string header(kScoreHeader);
    CHECK_THROWS_AS(read_score_csv(header + "\nG,s1,f00,s2,f01,0.5\n", Polarity::similarity),
                    ParseError);
    CHECK_THROWS_AS(read_score_csv(header + "\nG,s1,f00,s1,f01,nan\n", Polarity::similarity),
                    ParseError);
}
