#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "periscope/geometry.hpp"
#include "periscope/image.hpp"
#include "periscope/ingest.hpp"
#include "periscope/matcher.hpp"
#include "periscope/metrics.hpp"
#include "periscope/protocols.hpp"
#include "periscope/report.hpp"
#include "periscope/synth.hpp"
#include "periscope/types.hpp"

namespace ps = periscope;
namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    ps::CropConfig crop;
    std::string metric = "chi2";
    std::string normalize = "minmax";
    bool strict_embeddings = true;
    std::string threads = "1";
    std::uint64_t seed = 1;

    unsigned thread_count() const {
        if (threads == "auto") return ps::resolve_threads(0);
        auto n = ps::detail::parse_number<long>(threads);
        if (!n || *n < 1) throw ps::ConfigError("--threads wants a positive integer or 'auto'");
        return static_cast<unsigned>(*n);
    }

    ps::Metric metric_enum() const {
        auto m = ps::parse_metric(metric);
        if (!m) throw ps::ConfigError("unknown metric '" + metric + "'");
        return *m;
    }

    ps::Normalize normalize_enum() const { return ps::parse_normalize(normalize); }

    ps::ordered_json to_json() const {
        return ps::ordered_json{{"target_ied", crop.target_ied},
                                {"three_quarter_ied", crop.three_quarter_ied},
                                {"min_ied", crop.min_ied},
                                {"frontality_ratio", crop.frontality_ratio},
                                {"metric", metric},
                                {"normalize", normalize},
                                {"strict_embeddings", strict_embeddings},
                                {"threads", threads},
                                {"seed", seed}};
    }
};

std::string join_args(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

void write_output(const std::string& path, std::string_view content) {
    if (path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    ps::write_file(path, content);
}

void write_json(const std::string& path, const ps::ordered_json& j) {
    write_output(path, j.dump(2) + "\n");
}

class Stopwatch {
  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ps::Polarity polarity_arg(const std::string& s) {
    auto p = ps::parse_polarity(s);
    if (!p) throw ps::ConfigError("unknown polarity '" + s + "'");
    return *p;
}

void maybe_write_report(const std::string& path, const ps::RunReport& report) {
    if (!path.empty()) write_json(path, report.to_json());
}

// ---------------------------------------------------------------------------
// crop
// ---------------------------------------------------------------------------

struct CropArgs {
    std::string manifest;
    std::string image_dir;
    std::string out_dir;
    std::string report;
};

int cmd_crop(const GlobalOpts& g, const CropArgs& a, const std::string& echo) {
    Stopwatch watch;
    g.crop.validate();
    std::string manifest_text = ps::read_file(a.manifest);
    std::vector<ps::FaceAnnotation> faces = ps::parse_face_manifest(manifest_text);
    fs::create_directories(a.out_dir);

    struct FaceOut {
        ps::CropStatus status = ps::CropStatus::accepted;
        std::string error;
        std::string left_png;
        std::string right_png;
    };
    std::vector<FaceOut> results(faces.size());

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            FaceOut& r = results[i];
            r.status = ps::classify_face(faces[i], g.crop);
            if (r.status != ps::CropStatus::accepted) continue;
            fs::path png = fs::path(a.image_dir) /
                           (faces[i].subject_id + "_" + faces[i].image_id + ".png");
            fs::path pnm = fs::path(a.image_dir) /
                           (faces[i].subject_id + "_" + faces[i].image_id + ".pnm");
            try {
                fs::path src = fs::exists(png) ? png : pnm;
                ps::ImageBuffer img = ps::load_image(src);
                ps::CropPair crops = ps::extract_crops(img, faces[i], g.crop);
                r.left_png = ps::encode_png(crops.left.image);
                r.right_png = ps::encode_png(crops.right.image);
            } catch (const std::exception& e) {
                r.error = faces[i].subject_id + "/" + faces[i].image_id + ": " + e.what();
            }
        }
    };
    unsigned n_threads = g.thread_count();
    if (n_threads <= 1 || faces.size() < 2) {
        worker(0, faces.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (faces.size() + n_threads - 1) / n_threads;
        for (unsigned w = 0; w < n_threads; ++w) {
            std::size_t begin = static_cast<std::size_t>(w) * chunk;
            if (begin >= faces.size()) break;
            pool.emplace_back(worker, begin, std::min(faces.size(), begin + chunk));
        }
        for (auto& t : pool) t.join();
    }

    ps::CropCounts counts;
    std::vector<ps::CropStatus> statuses;
    std::vector<std::string> errors;
    std::size_t crops_written = 0;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        counts.add(results[i].status);
        statuses.push_back(results[i].status);
        if (!results[i].error.empty()) {
            errors.push_back(results[i].error);
            continue;
        }
        if (results[i].status != ps::CropStatus::accepted) continue;
        ps::write_file(fs::path(a.out_dir) / ps::crop_filename(faces[i], ps::EyeSide::left),
                       results[i].left_png);
        ps::write_file(fs::path(a.out_dir) / ps::crop_filename(faces[i], ps::EyeSide::right),
                       results[i].right_png);
        crops_written += 2;
    }
    ps::write_file(fs::path(a.out_dir) / "crops.csv", ps::write_crop_report(faces, statuses));

    ps::RunReport report;
    report.command = echo;
    report.config = g.to_json();
    report.inputs[a.manifest] = ps::digest_string(manifest_text);
    report.counts = ps::ordered_json{{"total", counts.total},
                                     {"accepted", counts.accepted},
                                     {"rejected_frontality", counts.rejected_frontality},
                                     {"rejected_resolution", counts.rejected_resolution},
                                     {"excluded_pose", counts.excluded_pose},
                                     {"io_errors", errors.size()},
                                     {"crops_written", crops_written}};
    if (!errors.empty()) report.counts["errors"] = errors;
    report.wall_ms = watch.ms();
    maybe_write_report(a.report.empty() ? (fs::path(a.out_dir) / "report.json").string()
                                        : a.report,
                       report);
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return errors.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// pairs
// ---------------------------------------------------------------------------

struct PairsArgs {
    std::string protocol;
    std::string manifest;
    std::string embeddings;
    std::string folds;
    int fold = 1;
    std::string mode = "external";
    std::string external_pairs;
    std::string pose = "frontal";
    std::string pose_a = "frontal";
    std::string pose_b = "three_quarter";
    bool counts_only = false;
    std::string out;
    std::string report;
};

ps::Pose pose_arg(const std::string& s) {
    auto p = ps::parse_pose(s);
    if (!p) throw ps::ConfigError("unknown pose '" + s + "'");
    return *p;
}

int cmd_pairs(const GlobalOpts& g, const PairsArgs& a, const std::string& echo) {
    Stopwatch watch;
    ps::RunReport report;
    report.command = echo;
    report.config = g.to_json();

    ps::PairCounts counts;
    ps::PairList pairs;
    bool enumerated = !a.counts_only;

    if (a.protocol == "same-pose" || a.protocol == "cross-pose") {
        if (a.manifest.empty()) throw ps::ConfigError(a.protocol + " needs --manifest");
        std::string text = ps::read_file(a.manifest);
        report.inputs[a.manifest] = ps::digest_string(text);
        ps::SubjectGallery gallery = ps::build_gallery(ps::parse_face_manifest(text));
        if (a.protocol == "same-pose") {
            if (enumerated) {
                pairs = ps::gen_same_pose_pairs(gallery, pose_arg(a.pose));
                counts = {pairs.genuine_count(), pairs.impostor_count()};
            } else {
                counts = ps::count_same_pose(gallery, pose_arg(a.pose));
            }
        } else {
            ps::Pose pa = pose_arg(a.pose_a);
            ps::Pose pb = pose_arg(a.pose_b);
            if (enumerated) {
                pairs = ps::gen_cross_pose_pairs(gallery, pa, pb);
                counts = {pairs.genuine_count(), pairs.impostor_count()};
            } else {
                counts = ps::count_cross_pose(gallery, pa, pb);
            }
        }
    } else if (a.protocol == "ufpr") {
        if (a.folds.empty()) throw ps::ConfigError("ufpr needs --folds");
        std::string folds_text = ps::read_file(a.folds);
        report.inputs[a.folds] = ps::digest_string(folds_text);
        std::vector<ps::FoldSpec> folds = ps::parse_folds(folds_text);
        const ps::FoldSpec* fold = nullptr;
        for (const auto& f : folds)
            if (f.fold_id == a.fold) fold = &f;
        if (!fold) throw ps::DataError("fold " + std::to_string(a.fold) + " not in folds file");

        if (ps::parse_ufpr_mode(a.mode) == ps::UfprMode::external) {
            if (a.external_pairs.empty())
                throw ps::ConfigError("ufpr external mode needs --external-pairs");
            std::string text = ps::read_file(a.external_pairs);
            report.inputs[a.external_pairs] = ps::digest_string(text);
            pairs = ps::parse_pair_list(text);
            ps::validate_external_pairs(pairs, *fold);
            counts = {pairs.genuine_count(), pairs.impostor_count()};
            enumerated = true;
        } else {
            if (a.embeddings.empty())
                throw ps::ConfigError("ufpr per-eye mode needs --embeddings");
            std::string text = ps::read_file(a.embeddings);
            report.inputs[a.embeddings] = ps::digest_string(text);
            ps::EyeGallery gallery = ps::build_eye_gallery(
                ps::read_embeddings(text, g.strict_embeddings ? ps::EmbeddingMode::strict
                                                              : ps::EmbeddingMode::lenient)
                    .set);
            pairs = ps::gen_ufpr_per_eye_pairs(*fold, gallery);
            counts = {pairs.genuine_count(), pairs.impostor_count()};
            if (a.counts_only) enumerated = false;
        }
    } else {
        throw ps::ConfigError("unknown protocol '" + a.protocol + "'");
    }

    if (a.counts_only || !enumerated) {
        write_json(a.out, ps::counts_report(counts));
    } else {
        write_output(a.out, ps::write_pair_list(pairs));
    }
    report.counts = ps::counts_report(counts);
    report.wall_ms = watch.ms();
    maybe_write_report(a.report, report);
    return 0;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreArgs {
    std::string embeddings;
    std::string pairs;
    std::string out;
    std::string report;
};

int cmd_score(const GlobalOpts& g, const ScoreArgs& a, const std::string& echo) {
    Stopwatch watch;
    std::string emb_text = ps::read_file(a.embeddings);
    std::string pairs_text = ps::read_file(a.pairs);
    ps::EmbeddingReadResult emb = ps::read_embeddings(
        emb_text, g.strict_embeddings ? ps::EmbeddingMode::strict : ps::EmbeddingMode::lenient);
    ps::PairList pairs = ps::parse_pair_list(pairs_text);
    ps::ScoredPairs scored = ps::score_pairs(emb.set, pairs, g.metric_enum(), g.thread_count());
    write_output(a.out, ps::write_score_csv(scored));

    ps::RunReport report;
    report.command = echo;
    report.config = g.to_json();
    report.inputs[a.embeddings] = ps::digest_string(emb_text);
    report.inputs[a.pairs] = ps::digest_string(pairs_text);
    report.counts = ps::ordered_json{{"pairs", pairs.size()},
                                     {"genuine", pairs.genuine_count()},
                                     {"impostor", pairs.impostor_count()},
                                     {"clamped_values", emb.clamped_values}};
    report.wall_ms = watch.ms();
    maybe_write_report(a.report, report);
    return 0;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

struct MetricsArgs {
    std::vector<std::string> scores;
    std::string polarity = "similarity";
    bool pool = false;
    std::string det;
    std::string out;
    std::string report;
};

int cmd_metrics(const GlobalOpts& g, const MetricsArgs& a, const std::string& echo) {
    Stopwatch watch;
    ps::Polarity polarity = polarity_arg(a.polarity);
    ps::RunReport report;
    report.command = echo;
    report.config = g.to_json();

    std::vector<ps::ScoreSet> sets;
    for (const auto& path : a.scores) {
        std::string text = ps::read_file(path);
        report.inputs[path] = ps::digest_string(text);
        sets.push_back(ps::read_score_csv(text, polarity).to_score_set());
    }

    ps::ordered_json payload;
    if (sets.size() == 1) {
        payload = ps::metrics_report(sets[0], ps::eer(sets[0]), ps::auc(sets[0]));
        if (!a.det.empty()) write_output(a.det, ps::det_csv(ps::det_curve(sets[0])));
    } else if (a.pool) {
        ps::ScoreSet pooled;
        pooled.polarity = polarity;
        for (const auto& s : sets) {
            pooled.genuine.insert(pooled.genuine.end(), s.genuine.begin(), s.genuine.end());
            pooled.impostor.insert(pooled.impostor.end(), s.impostor.begin(), s.impostor.end());
        }
        payload = ps::metrics_report(pooled, ps::eer(pooled), ps::auc(pooled));
        payload["pooled"] = true;
        if (!a.det.empty()) write_output(a.det, ps::det_csv(ps::det_curve(pooled)));
    } else {
        if (!a.det.empty())
            throw ps::ConfigError("--det needs a single score file or --pool");
        std::vector<ps::FoldMetrics> folds;
        for (std::size_t i = 0; i < sets.size(); ++i)
            folds.push_back({static_cast<int>(i + 1), ps::eer(sets[i]), ps::auc(sets[i])});
        payload = ps::fold_report(folds, ps::aggregate_folds(folds));
    }
    write_json(a.out, payload);
    report.metrics = payload;
    report.wall_ms = watch.ms();
    maybe_write_report(a.report, report);
    return 0;
}

// ---------------------------------------------------------------------------
// fuse
// ---------------------------------------------------------------------------

struct FuseArgs {
    std::string scores_a;
    std::string scores_b;
    std::string polarity = "similarity";
    double weight = -1;
    bool sweep = false;
    double grid_step = 0.1;
    std::string fused_out;
    std::string sweep_csv;
    std::string out;
    std::string report;
};

int cmd_fuse(const GlobalOpts& g, const FuseArgs& a, const std::string& echo) {
    Stopwatch watch;
    bool have_weight = a.weight >= 0;
    if (have_weight == a.sweep)
        throw ps::ConfigError("fuse wants exactly one of --weight or --sweep");
    ps::Polarity polarity = polarity_arg(a.polarity);
    std::string text_a = ps::read_file(a.scores_a);
    std::string text_b = ps::read_file(a.scores_b);
    ps::ScoredPairs sa = ps::read_score_csv(text_a, polarity);
    ps::ScoredPairs sb = ps::read_score_csv(text_b, polarity);

    ps::RunReport report;
    report.command = echo;
    report.config = g.to_json();
    report.inputs[a.scores_a] = ps::digest_string(text_a);
    report.inputs[a.scores_b] = ps::digest_string(text_b);

    ps::ordered_json payload;
    if (have_weight) {
        ps::ScoredPairs fused = ps::fuse_scored(sa, sb, a.weight, g.normalize_enum());
        if (!a.fused_out.empty()) write_output(a.fused_out, ps::write_score_csv(fused));
        ps::ScoreSet set = fused.to_score_set();
        payload = ps::metrics_report(set, ps::eer(set), ps::auc(set));
        payload["weight"] = a.weight;
    } else {
        ps::SweepResult sweep = ps::fusion_sweep(sa.to_score_set(), sb.to_score_set(),
                                                 a.grid_step, g.normalize_enum());
        if (!a.sweep_csv.empty()) write_output(a.sweep_csv, ps::sweep_csv(sweep));
        payload = ps::sweep_report(sweep);
    }
    write_json(a.out, payload);
    report.metrics = payload;
    report.wall_ms = watch.ms();
    maybe_write_report(a.report, report);
    return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    int subjects = 10;
    int images = 4;
    int dim = 64;
    double separation = 1.0;
    double noise = 0.1;
    std::string layout = "both";
    std::string out_embeddings;
    std::string out_manifest;
    std::string report;
};

int cmd_synth(const GlobalOpts& g, const SynthArgs& a, const std::string& echo) {
    Stopwatch watch;
    ps::SynthParams params;
    params.n_subjects = a.subjects;
    params.n_images = a.images;
    params.dim = a.dim;
    params.separation = a.separation;
    params.noise = a.noise;
    params.seed = g.seed;
    if (a.layout == "both")
        params.layout = ps::EyeLayout::both_per_image;
    else if (a.layout == "per-eye")
        params.layout = ps::EyeLayout::per_eye_samples;
    else
        throw ps::ConfigError("unknown layout '" + a.layout + "'");

    ps::EmbeddingSet set = ps::gen_synthetic_embeddings(params);
    write_output(a.out_embeddings, ps::write_embeddings(set));
    if (!a.out_manifest.empty())
        write_output(a.out_manifest,
                     ps::write_face_manifest(ps::gen_synthetic_manifest(a.subjects, a.images)));

    ps::RunReport report;
    report.command = echo;
    report.config = g.to_json();
    report.counts = ps::ordered_json{{"records", set.records().size()},
                                     {"subjects", a.subjects},
                                     {"images", a.images},
                                     {"dim", a.dim}};
    report.wall_ms = watch.ms();
    maybe_write_report(a.report, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ocular biometrics evaluation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config")->description("key=value config file");

    GlobalOpts g;
    app.add_option("--target-ied", g.crop.target_ied, "frontal target inter-eye distance (px)")
        ->capture_default_str();
    app.add_option("--three-quarter-ied", g.crop.three_quarter_ied,
                   "three-quarter target inter-eye distance (px)")
        ->capture_default_str();
    app.add_option("--min-ied", g.crop.min_ied, "minimum source inter-eye distance (px)")
        ->capture_default_str();
    app.add_option("--frontality-ratio", g.crop.frontality_ratio,
                   "nose offset threshold as a fraction of the inter-eye distance")
        ->capture_default_str();
    app.add_option("--metric", g.metric, "comparison metric: cosine|chi2")
        ->capture_default_str();
    app.add_option("--normalize", g.normalize, "fusion normalization: minmax|none")
        ->capture_default_str();
    app.add_option("--strict-embeddings", g.strict_embeddings,
                   "reject negative embedding values instead of clamping")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "worker count or 'auto'")->capture_default_str();
    app.add_option("--seed", g.seed, "random seed for synthetic data")->capture_default_str();

    CropArgs crop_args;
    CLI::App* crop = app.add_subcommand("crop", "extract ocular crops from annotated faces");
    crop->add_option("--manifest", crop_args.manifest, "face annotation CSV")->required();
    crop->add_option("--image-dir", crop_args.image_dir, "directory with source images")
        ->required();
    crop->add_option("--out-dir", crop_args.out_dir, "output directory")->required();
    crop->add_option("--report", crop_args.report, "run report path (default out-dir/report.json)");

    PairsArgs pairs_args;
    CLI::App* pairs = app.add_subcommand("pairs", "generate a verification pair list");
    pairs->add_option("--protocol", pairs_args.protocol, "same-pose|cross-pose|ufpr")->required();
    pairs->add_option("--manifest", pairs_args.manifest, "face annotation CSV");
    pairs->add_option("--embeddings", pairs_args.embeddings, "embedding store (ufpr per-eye)");
    pairs->add_option("--folds", pairs_args.folds, "fold definition file (ufpr)");
    pairs->add_option("--fold", pairs_args.fold, "fold id to generate (ufpr)");
    pairs->add_option("--mode", pairs_args.mode, "ufpr mode: external|per-eye")
        ->capture_default_str();
    pairs->add_option("--external-pairs", pairs_args.external_pairs,
                      "official pair list (ufpr external)");
    pairs->add_option("--pose", pairs_args.pose, "pose for same-pose")->capture_default_str();
    pairs->add_option("--pose-a", pairs_args.pose_a, "first pose for cross-pose")
        ->capture_default_str();
    pairs->add_option("--pose-b", pairs_args.pose_b, "second pose for cross-pose")
        ->capture_default_str();
    pairs->add_flag("--counts-only", pairs_args.counts_only,
                    "emit closed-form counts as JSON instead of enumerating");
    pairs->add_option("--out", pairs_args.out, "output path or -")->required();
    pairs->add_option("--report", pairs_args.report, "run report path");

    ScoreArgs score_args;
    CLI::App* score = app.add_subcommand("score", "score a pair list against an embedding store");
    score->add_option("--embeddings", score_args.embeddings, "embedding store")->required();
    score->add_option("--pairs", score_args.pairs, "pair list")->required();
    score->add_option("--out", score_args.out, "score CSV path or -")->required();
    score->add_option("--report", score_args.report, "run report path");

    MetricsArgs metrics_args;
    CLI::App* metrics = app.add_subcommand("metrics", "EER/AUC reports from score files");
    metrics->add_option("--scores", metrics_args.scores, "score CSV (repeat for folds)")
        ->required();
    metrics->add_option("--polarity", metrics_args.polarity, "similarity|distance")
        ->capture_default_str();
    metrics->add_flag("--pool", metrics_args.pool, "pool scores across files instead of per-fold");
    metrics->add_option("--det", metrics_args.det, "write DET curve CSV here");
    metrics->add_option("--out", metrics_args.out, "report path or -")->required();
    metrics->add_option("--report", metrics_args.report, "run report path");

    FuseArgs fuse_args;
    CLI::App* fuse = app.add_subcommand("fuse", "weighted score fusion of two systems");
    fuse->add_option("--scores-a", fuse_args.scores_a, "first score CSV")->required();
    fuse->add_option("--scores-b", fuse_args.scores_b, "second score CSV")->required();
    fuse->add_option("--polarity", fuse_args.polarity, "similarity|distance")
        ->capture_default_str();
    fuse->add_option("--weight", fuse_args.weight, "fusion weight a in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    fuse->add_flag("--sweep", fuse_args.sweep, "sweep the weight grid instead");
    fuse->add_option("--grid-step", fuse_args.grid_step, "sweep grid step")
        ->capture_default_str();
    fuse->add_option("--fused-out", fuse_args.fused_out, "write fused score CSV here");
    fuse->add_option("--sweep-csv", fuse_args.sweep_csv, "write sweep table CSV here");
    fuse->add_option("--out", fuse_args.out, "report path or -")->required();
    fuse->add_option("--report", fuse_args.report, "run report path");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic embedding store");
    synth->add_option("--subjects", synth_args.subjects, "subject count")->capture_default_str();
    synth->add_option("--images", synth_args.images, "images (samples) per subject")
        ->capture_default_str();
    synth->add_option("--dim", synth_args.dim, "embedding dimension")->capture_default_str();
    synth->add_option("--separation", synth_args.separation, "class mean spread")
        ->capture_default_str();
    synth->add_option("--noise", synth_args.noise, "within-class noise sigma")
        ->capture_default_str();
    synth->add_option("--layout", synth_args.layout, "both|per-eye")->capture_default_str();
    synth->add_option("--out-embeddings", synth_args.out_embeddings, "embedding store path or -")
        ->required();
    synth->add_option("--out-manifest", synth_args.out_manifest,
                      "also write a matching face manifest");
    synth->add_option("--report", synth_args.report, "run report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string echo = join_args(argc, argv);
    try {
        if (*crop) return cmd_crop(g, crop_args, echo);
        if (*pairs) return cmd_pairs(g, pairs_args, echo);
        if (*score) return cmd_score(g, score_args, echo);
        if (*metrics) return cmd_metrics(g, metrics_args, echo);
        if (*fuse) return cmd_fuse(g, fuse_args, echo);
        if (*synth) return cmd_synth(g, synth_args, echo);
    } catch (const ps::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ps::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
