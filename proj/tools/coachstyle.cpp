#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "coachstyle/pipeline.hpp"
#include "coachstyle/synth.hpp"
#include "coachstyle/util.hpp"

namespace cs = coachstyle;
namespace fs = std::filesystem;

namespace {

std::string default_store() {
    const char* env = std::getenv("COACHSTYLE_STORE");
    return env ? env : "store";
}

void add_store_option(CLI::App* cmd, std::string& store) {
    store = default_store();
    cmd->add_option("--store", store, "store directory (matches.ndjson + events.ndjson)")
        ->capture_default_str();
}

void write_and_report(const fs::path& path, const std::string& content) {
    cs::util::write_file(path, content);
    std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"possession-style profiling of soccer coaches from event streams"};
    app.require_subcommand(1);

    cs::pipeline::PipelineConfig cfg;
    std::string store = default_store();
    std::string out_dir = "out";

    // ---- synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic event corpus");
    std::string synth_out = "store";
    int coaches_per_archetype = 8, matches_per_coach = 30, possessions_per_match = 20;
    std::uint64_t synth_seed = 1;
    synth->add_option("--out", synth_out, "output store directory")->capture_default_str();
    synth->add_option("--coaches-per-archetype", coaches_per_archetype)->capture_default_str();
    synth->add_option("--matches-per-coach", matches_per_coach)->capture_default_str();
    synth->add_option("--possessions-per-match", possessions_per_match)->capture_default_str();
    synth->add_option("--seed", synth_seed, "generator seed")->capture_default_str();

    // ---- ingest
    auto* ingest = app.add_subcommand("ingest", "validate raw records into a canonical store");
    std::string in_events, in_matches, ingest_store = default_store();
    bool strict = false;
    ingest->add_option("--events", in_events, "events ndjson")->required();
    ingest->add_option("--matches", in_matches, "matches ndjson")->required();
    ingest->add_option("--store", ingest_store, "canonical store output directory")
        ->capture_default_str();
    ingest->add_flag("--strict", strict, "abort on the first malformed record");

    // ---- stage subcommands
    auto* possessions = app.add_subcommand("possessions", "segment possessions, dump csv");
    auto* featurescmd = app.add_subcommand("features", "possession features + z-score scaler");
    auto* elbow = app.add_subcommand("elbow", "SSE curve over a k range");
    auto* cluster = app.add_subcommand("cluster", "k-means possession typing");
    auto* profilescmd = app.add_subcommand("profiles", "coach profile matrices");
    auto* train = app.add_subcommand("train", "train the profile autoencoder");
    auto* encode = app.add_subcommand("encode", "encode profiles with trained weights");
    auto* query = app.add_subcommand("query", "nearest coaches to a (coach, team) pair");
    auto* report = app.add_subcommand("report", "pairwise distance matrix");
    auto* pipelinecmd = app.add_subcommand("pipeline", "run every stage end to end");

    std::string poss_store, feat_store, elbow_store, cluster_store, prof_store, pipe_store;
    add_store_option(possessions, poss_store);
    add_store_option(featurescmd, feat_store);
    add_store_option(elbow, elbow_store);
    add_store_option(cluster, cluster_store);
    add_store_option(profilescmd, prof_store);
    add_store_option(pipelinecmd, pipe_store);

    for (CLI::App* cmd : {possessions, featurescmd, elbow, cluster, profilescmd, train, encode,
                          query, report, pipelinecmd}) {
        cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    }
    for (CLI::App* cmd : {possessions, featurescmd, elbow, cluster, profilescmd, pipelinecmd}) {
        cmd->add_option("--min-events", cfg.min_events)->capture_default_str();
        cmd->add_option("--min-duration", cfg.min_duration)->capture_default_str();
    }

    int k_min = 2, k_max = 15;
    bool emit_svg = false;
    elbow->add_option("--kmin", k_min)->capture_default_str();
    elbow->add_option("--kmax", k_max)->capture_default_str();
    elbow->add_flag("--svg", emit_svg, "also render the curve as svg");
    for (CLI::App* cmd : {elbow, cluster, pipelinecmd}) {
        cmd->add_option("--k", cfg.k, "cluster count")->capture_default_str();
        cmd->add_option("--cluster-seed", cfg.cluster_seed)->capture_default_str();
        cmd->add_option("--restarts", cfg.restarts)->capture_default_str();
    }

    std::string model_path, weights_path, inputs_path, encodings_path;
    profilescmd->add_option("--model", model_path, "cluster model json (default <out>/cluster_model.json)");
    for (CLI::App* cmd : {train, encode}) {
        cmd->add_option("--inputs", inputs_path, "inputs csv (default <out>/inputs.csv)");
    }
    encode->add_option("--weights", weights_path, "autoencoder json (default <out>/autoencoder.json)");
    for (CLI::App* cmd : {train, pipelinecmd}) {
        cmd->add_option("--epochs", cfg.train.epochs)->capture_default_str();
        cmd->add_option("--train-seed", cfg.train.seed)->capture_default_str();
        cmd->add_option("--rho", cfg.train.rho)->capture_default_str();
        cmd->add_option("--eps", cfg.train.eps)->capture_default_str();
    }

    std::string q_coach, q_team;
    int q_top = 5;
    bool pairwise = false, by_coach = false;
    query->add_option("--coach", q_coach)->required();
    query->add_option("--team", q_team)->required();
    query->add_option("--top", q_top)->capture_default_str();
    query->add_option("--encodings", encodings_path, "encodings json (default <out>/encodings.json)");
    report->add_flag("--pairwise", pairwise, "emit the pairwise matrix");
    report->add_flag("--by-coach", by_coach, "aggregate entries per coach");
    report->add_option("--encodings", encodings_path, "encodings json (default <out>/encodings.json)");

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path out(out_dir);
        if (*synth) {
            cs::synth::GeneratorConfig gen;
            gen.archetypes = cs::synth::default_archetypes();
            gen.coaches_per_archetype = coaches_per_archetype;
            gen.matches_per_coach = matches_per_coach;
            gen.possessions_per_match = possessions_per_match;
            gen.seed = synth_seed;
            auto [store_data, truth] = cs::synth::generate(gen);
            cs::pipeline::save_store(store_data, synth_out);
            cs::util::write_file(fs::path(synth_out) / "ground_truth.csv",
                                 cs::synth::ground_truth_csv(truth));
            std::cout << "generated " << store_data.matches().size() << " matches, "
                      << store_data.total_events() << " events into " << synth_out
                      << " (seed " << gen.seed << ")\n";
        } else if (*ingest) {
            std::ifstream matches_in(in_matches), events_in(in_events);
            if (!matches_in) throw cs::IoError("cannot open " + in_matches);
            if (!events_in) throw cs::IoError("cannot open " + in_events);
            cs::model::ParseReport rep;
            const auto store_data = cs::model::parse_store(matches_in, events_in, strict, &rep);
            cs::pipeline::save_store(store_data, ingest_store);
            std::cout << "ingested " << rep.matches_parsed << " matches, " << rep.events_parsed
                      << " events (skipped: " << rep.skipped() << " = " << rep.malformed
                      << " malformed, " << rep.unknown_match << " unknown match, "
                      << rep.unknown_team << " unknown team) into " << ingest_store << "\n";
        } else if (*possessions) {
            const auto store_data = cs::pipeline::load_store(poss_store);
            const auto corpus = cs::pipeline::build_corpus(store_data, cfg);
            write_and_report(out / cs::pipeline::artifact::kPossessions,
                             cs::pipeline::possessions_csv(corpus));
        } else if (*featurescmd) {
            const auto store_data = cs::pipeline::load_store(feat_store);
            const auto corpus = cs::pipeline::build_corpus(store_data, cfg);
            write_and_report(out / cs::pipeline::artifact::kFeatures,
                             cs::pipeline::features_csv(corpus));
            cs::features::save_scaler(corpus.scaler, out / cs::pipeline::artifact::kScaler);
            std::cout << "wrote " << (out / cs::pipeline::artifact::kScaler).string() << "\n";
        } else if (*elbow) {
            const auto store_data = cs::pipeline::load_store(elbow_store);
            const auto corpus = cs::pipeline::build_corpus(store_data, cfg);
            const auto curve = cs::clustering::sse_curve(corpus.standardized, k_min, k_max,
                                                         cfg.cluster_seed, cfg.restarts,
                                                         cfg.kmeans);
            write_and_report(out / cs::pipeline::artifact::kSseCurve,
                             cs::pipeline::sse_curve_csv(curve));
            if (emit_svg) {
                write_and_report(out / "sse_curve.svg", cs::pipeline::sse_curve_svg(curve));
            }
            std::cout << "seed " << cfg.cluster_seed << ", restarts " << cfg.restarts << "\n";
        } else if (*cluster) {
            const auto store_data = cs::pipeline::load_store(cluster_store);
            const auto corpus = cs::pipeline::build_corpus(store_data, cfg);
            auto model = cs::clustering::kmeans(corpus.standardized, cfg.k, cfg.cluster_seed,
                                                cfg.restarts, cfg.kmeans);
            model.labels = cs::clustering::label_all(model.centroids, cfg.naming);
            cs::clustering::save_model(model, out / cs::pipeline::artifact::kClusterModel);
            write_and_report(out / cs::pipeline::artifact::kCentroids,
                             cs::pipeline::centroids_csv(model));
            std::cout << "k=" << model.k << " sse=" << model.sse << " seed=" << model.seed
                      << "\n";
        } else if (*profilescmd) {
            const auto store_data = cs::pipeline::load_store(prof_store);
            const auto corpus = cs::pipeline::build_corpus(store_data, cfg);
            const fs::path mp =
                model_path.empty() ? out / cs::pipeline::artifact::kClusterModel : model_path;
            const auto model = cs::clustering::load_model(mp);
            const auto stage = cs::pipeline::build_profiles(store_data, corpus, model, cfg);
            write_and_report(out / cs::pipeline::artifact::kProfiles,
                             cs::pipeline::profiles_csv(stage.coach_profiles));
            write_and_report(out / cs::pipeline::artifact::kInputs,
                             cs::pipeline::inputs_csv(stage.coach_profiles, stage.flat));
            cs::profiles::save_scaling(stage.flat.scaling,
                                       out / cs::pipeline::artifact::kProfileScaling);
            std::cout << "wrote " << (out / cs::pipeline::artifact::kProfileScaling).string()
                      << "\n";
        } else if (*train) {
            const fs::path ip = inputs_path.empty() ? out / cs::pipeline::artifact::kInputs
                                                    : fs::path(inputs_path);
            const auto rows = cs::pipeline::load_inputs_csv(ip);
            const auto trained = cs::nn::train(rows.vectors, cfg.train);
            cs::nn::save_weights(trained.model, out / cs::pipeline::artifact::kWeights);
            write_and_report(out / cs::pipeline::artifact::kLossHistory,
                             cs::pipeline::loss_history_csv(trained.loss_history));
            std::cout << "final loss " << trained.final_loss << " after " << cfg.train.epochs
                      << " epochs (seed " << cfg.train.seed << ")\n";
        } else if (*encode) {
            const fs::path ip = inputs_path.empty() ? out / cs::pipeline::artifact::kInputs
                                                    : fs::path(inputs_path);
            const fs::path wp = weights_path.empty() ? out / cs::pipeline::artifact::kWeights
                                                     : fs::path(weights_path);
            const auto rows = cs::pipeline::load_inputs_csv(ip);
            const auto model = cs::nn::load_weights(wp);
            const auto index =
                cs::pipeline::encode_all(model, rows, cs::util::file_digest(wp));
            cs::similarity::save_index(index, out / cs::pipeline::artifact::kEncodings);
            std::cout << "wrote " << (out / cs::pipeline::artifact::kEncodings).string() << " ("
                      << index.entries().size() << " encodings)\n";
        } else if (*query) {
            const fs::path ep = encodings_path.empty() ? out / cs::pipeline::artifact::kEncodings
                                                       : fs::path(encodings_path);
            const auto index = cs::similarity::load_index(ep);
            std::cout << cs::similarity::nearest_csv(index, {q_coach, q_team}, q_top);
        } else if (*report) {
            const fs::path ep = encodings_path.empty() ? out / cs::pipeline::artifact::kEncodings
                                                       : fs::path(encodings_path);
            const auto index = cs::similarity::load_index(ep);
            if (!pairwise && !by_coach) pairwise = true;
            if (by_coach) {
                write_and_report(out / "pairwise_by_coach.csv",
                                 cs::similarity::pairwise_by_coach_csv(index));
            }
            if (pairwise) {
                write_and_report(out / "pairwise.csv", cs::similarity::pairwise_csv(index));
            }
        } else if (*pipelinecmd) {
            cfg.store_dir = pipe_store;
            cfg.out_dir = out;
            const auto manifest = cs::pipeline::run_pipeline(cfg);
            std::cout << "pipeline complete: " << manifest.matches << " matches, "
                      << manifest.possessions_valid << " possessions, " << manifest.profiles
                      << " profiles, " << manifest.encodings << " encodings\n"
                      << "kmeans sse " << manifest.kmeans_sse << ", final train loss "
                      << manifest.final_train_loss << "\n"
                      << "manifest: " << (out / cs::pipeline::artifact::kManifest).string()
                      << "\n";
        }
    } catch (const cs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
