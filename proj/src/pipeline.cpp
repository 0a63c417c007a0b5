#include "coachstyle/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coachstyle/util.hpp"

namespace coachstyle::pipeline {

namespace {

using util::csv_row;
using util::fmt_double;

// Minimal CSV line splitter aware of double-quoted fields.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw IoError("trailing characters in number: " + s);
        return v;
    } catch (const std::exception&) {
        throw IoError("cannot parse number: " + s);
    }
}

std::vector<std::string> value_column_names(int k) {
    std::vector<std::string> names;
    for (int row = 0; row < profiles::kProfileRows; ++row) {
        for (int c = 0; c < k; ++c) {
            names.push_back(std::string(profiles::kRowNames[row]) + "_" + std::to_string(c));
        }
    }
    return names;
}

}  // namespace

model::EventStore load_store(const std::filesystem::path& store_dir, bool strict,
                             model::ParseReport* report) {
    std::ifstream matches(store_dir / "matches.ndjson");
    std::ifstream events(store_dir / "events.ndjson");
    if (!matches) throw IoError("cannot open " + (store_dir / "matches.ndjson").string());
    if (!events) throw IoError("cannot open " + (store_dir / "events.ndjson").string());
    return model::parse_store(matches, events, strict, report);
}

void save_store(const model::EventStore& store, const std::filesystem::path& store_dir) {
    std::filesystem::create_directories(store_dir);
    std::ofstream matches(store_dir / "matches.ndjson");
    std::ofstream events(store_dir / "events.ndjson");
    if (!matches || !events) throw IoError("cannot write store to " + store_dir.string());
    model::serialize_store(store, matches, events);
}

Corpus build_corpus(const model::EventStore& store, const PipelineConfig& cfg) {
    Corpus corpus;
    const auto& matches = store.matches();
    std::vector<std::vector<possession::Possession>> per_match(matches.size());
#pragma omp parallel for schedule(static)
    for (long long m = 0; m < static_cast<long long>(matches.size()); ++m) {
        const auto mi = static_cast<std::size_t>(m);
        per_match[mi] = possession::filter_valid(
            possession::segment(store.events(matches[mi].match_id)), cfg.min_events,
            cfg.min_duration);
    }
    for (auto& ps : per_match) {
        for (auto& p : ps) corpus.possessions.push_back(std::move(p));
    }
    if (corpus.possessions.empty()) {
        throw EmptyCorpus("no valid possessions in store");
    }
    corpus.raw = features::compute_features_batch(corpus.possessions);
    corpus.scaler = features::fit_scaler(corpus.raw);
    corpus.standardized.reserve(corpus.raw.size());
    for (const auto& f : corpus.raw) {
        corpus.standardized.push_back(features::apply_scaler(f, corpus.scaler));
    }
    return corpus;
}

std::string possessions_csv(const Corpus& corpus) {
    std::string out = "match_id,team_id,period,start_t,end_t,n_events\n";
    for (const auto& p : corpus.possessions) {
        out += csv_row({p.match_id, p.team_id, std::to_string(p.period), fmt_double(p.start_t),
                        fmt_double(p.end_t), std::to_string(p.events.size())});
    }
    return out;
}

std::string features_csv(const Corpus& corpus) {
    std::string out = "match_id,possession_index,team_id,period,start_t,end_t,n_events";
    for (int d = 0; d < 7; ++d) out += std::string(",") + features::FeatureVector::name(d);
    for (int d = 0; d < 7; ++d) out += std::string(",z_") + features::FeatureVector::name(d);
    out += '\n';
    std::string last_match;
    long index = 0;
    for (std::size_t i = 0; i < corpus.possessions.size(); ++i) {
        const auto& p = corpus.possessions[i];
        if (p.match_id != last_match) {
            last_match = p.match_id;
            index = 0;
        }
        std::vector<std::string> fields = {p.match_id,
                                           std::to_string(index++),
                                           p.team_id,
                                           std::to_string(p.period),
                                           fmt_double(p.start_t),
                                           fmt_double(p.end_t),
                                           std::to_string(p.events.size())};
        for (double v : corpus.raw[i].as_array()) fields.push_back(fmt_double(v));
        for (double v : corpus.standardized[i]) fields.push_back(fmt_double(v));
        out += csv_row(fields);
    }
    return out;
}

std::string centroids_csv(const clustering::KMeansModel& model) {
    std::string out = "cluster,label";
    for (int d = 0; d < 7; ++d) out += std::string(",") + features::FeatureVector::name(d);
    out += '\n';
    for (int j = 0; j < model.k; ++j) {
        std::vector<std::string> fields = {std::to_string(j),
                                           model.labels[static_cast<std::size_t>(j)]};
        for (double v : model.centroids[static_cast<std::size_t>(j)]) {
            fields.push_back(fmt_double(v));
        }
        out += csv_row(fields);
    }
    return out;
}

std::string sse_curve_csv(const std::vector<std::pair<int, double>>& curve) {
    std::string out = "k,sse\n";
    for (const auto& [k, sse] : curve) {
        out += csv_row({std::to_string(k), fmt_double(sse)});
    }
    return out;
}

std::string sse_curve_svg(const std::vector<std::pair<int, double>>& curve) {
    // Minimal elbow-curve rendering: axes plus one polyline.
    const double width = 640, height = 400, margin = 50;
    double max_sse = 0.0;
    for (const auto& [k, sse] : curve) max_sse = std::max(max_sse, sse);
    if (max_sse <= 0.0) max_sse = 1.0;
    const int k_min = curve.front().first;
    const int k_max = curve.back().first;
    const double k_span = std::max(1, k_max - k_min);

    auto px = [&](int k) {
        return margin + (width - 2 * margin) * (k - k_min) / k_span;
    };
    auto py = [&](double sse) { return height - margin - (height - 2 * margin) * sse / max_sse; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& [k, sse] : curve) svg << px(k) << "," << py(sse) << " ";
    svg << "\"/>\n";
    for (const auto& [k, sse] : curve) {
        svg << "<circle cx=\"" << px(k) << "\" cy=\"" << py(sse) << "\" r=\"3\" fill=\"steelblue\"/>\n";
        svg << "<text x=\"" << px(k) << "\" y=\"" << height - margin + 20
            << "\" font-size=\"10\" text-anchor=\"middle\">" << k << "</text>\n";
    }
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
        << "\" font-size=\"12\" text-anchor=\"middle\">k</text>\n";
    svg << "<text x=\"15\" y=\"" << height / 2 << "\" font-size=\"12\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 15 " << height / 2 << ")\">SSE</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string loss_history_csv(const std::vector<double>& history) {
    std::string out = "epoch,loss\n";
    for (std::size_t e = 0; e < history.size(); ++e) {
        out += csv_row({std::to_string(e), fmt_double(history[e])});
    }
    return out;
}

ProfileStage build_profiles(const model::EventStore& store, const Corpus& corpus,
                            const clustering::KMeansModel& model, const PipelineConfig& cfg) {
    const std::vector<int> assignments = clustering::assign_all(corpus.standardized, model);

    // Group typed possessions by match.
    std::map<std::string, std::vector<profiles::TypedPossession>> by_match;
    for (std::size_t i = 0; i < corpus.possessions.size(); ++i) {
        by_match[corpus.possessions[i].match_id].push_back(
            {corpus.possessions[i], assignments[i]});
    }

    // One record per match per side, accumulated per (coach, team) pair in
    // match_id order.
    std::map<similarity::Key, std::vector<profiles::MatchRecord>> per_pair;
    for (const auto& meta : store.matches()) {
        const auto timeline = model::goal_timeline(store, meta.match_id);
        const auto it = by_match.find(meta.match_id);
        static const std::vector<profiles::TypedPossession> none;
        const auto& typed = it == by_match.end() ? none : it->second;

        profiles::MatchRecord home{meta, {}, {}, timeline};
        profiles::MatchRecord away{meta, {}, {}, timeline};
        for (const auto& tp : typed) {
            if (tp.poss.team_id == meta.home_team_id) {
                home.own.push_back(tp);
                away.opponent.push_back(tp);
            } else {
                away.own.push_back(tp);
                home.opponent.push_back(tp);
            }
        }
        per_pair[{meta.home_coach_id, meta.home_team_id}].push_back(std::move(home));
        per_pair[{meta.away_coach_id, meta.away_team_id}].push_back(std::move(away));
    }

    ProfileStage stage;
    for (const auto& [key, records] : per_pair) {
        stage.coach_profiles.push_back(
            profiles::build_profile(key.coach_id, key.team_id, records, model.k, cfg.xg));
    }
    stage.flat = profiles::flatten_and_scale(stage.coach_profiles);
    return stage;
}

std::string profiles_csv(const std::vector<profiles::CoachProfile>& profs) {
    if (profs.empty()) throw EmptyCorpus("no profiles");
    const int k = profs.front().k();
    std::vector<std::string> header = {"coach_id", "team_id"};
    for (const auto& name : value_column_names(k)) header.push_back(name);
    std::string out = csv_row(header);
    for (const auto& p : profs) {
        std::vector<std::string> fields = {p.coach_id, p.team_id};
        for (const auto& row : p.matrix) {
            for (double v : row) fields.push_back(fmt_double(v));
        }
        out += csv_row(fields);
    }
    return out;
}

std::string inputs_csv(const std::vector<profiles::CoachProfile>& profs,
                       const profiles::FlattenResult& flat) {
    if (profs.empty()) throw EmptyCorpus("no profiles");
    const int k = profs.front().k();
    std::vector<std::string> header = {"coach_id", "team_id"};
    for (const auto& name : value_column_names(k)) header.push_back(name);
    std::string out = csv_row(header);
    for (std::size_t i = 0; i < profs.size(); ++i) {
        std::vector<std::string> fields = {profs[i].coach_id, profs[i].team_id};
        for (double v : flat.vectors[i]) fields.push_back(fmt_double(v));
        out += csv_row(fields);
    }
    return out;
}

InputRows load_inputs_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path.string());
    const auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "coach_id" || header[1] != "team_id") {
        throw IoError("unexpected header in " + path.string());
    }
    InputRows rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) throw IoError("ragged csv row in " + path.string());
        rows.keys.push_back({fields[0], fields[1]});
        std::vector<double> v;
        v.reserve(fields.size() - 2);
        for (std::size_t i = 2; i < fields.size(); ++i) v.push_back(parse_double(fields[i]));
        rows.vectors.push_back(std::move(v));
    }
    return rows;
}

similarity::EncodingIndex encode_all(const nn::AutoencoderModel& model, const InputRows& rows,
                                     const std::string& fingerprint) {
    std::vector<similarity::EncodingEntry> entries;
    entries.reserve(rows.keys.size());
    for (std::size_t i = 0; i < rows.keys.size(); ++i) {
        entries.push_back({rows.keys[i], nn::encode(model, rows.vectors[i])});
    }
    return similarity::EncodingIndex(std::move(entries), fingerprint);
}

RunManifest run_pipeline(const PipelineConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    RunManifest manifest;

    auto emit = [&](const char* name, const std::string& content) {
        const fs::path path = cfg.out_dir / name;
        util::write_file(path, content);
        manifest.outputs[name] = util::file_digest(path);
    };

    // ingest
    model::EventStore store = [&] {
        try {
            return load_store(cfg.store_dir, true);
        } catch (const Error& e) {
            throw StageError("ingest", e.what());
        }
    }();
    manifest.matches = static_cast<long>(store.matches().size());
    manifest.events = store.total_events();

    // segment + features
    Corpus corpus;
    try {
        long segmented = 0;
        for (const auto& m : store.matches()) {
            segmented +=
                static_cast<long>(possession::segment(store.events(m.match_id)).size());
        }
        manifest.possessions_segmented = segmented;
        corpus = build_corpus(store, cfg);
    } catch (const Error& e) {
        throw StageError("features", e.what());
    }
    manifest.possessions_valid = static_cast<long>(corpus.possessions.size());
    emit(artifact::kPossessions, possessions_csv(corpus));
    emit(artifact::kFeatures, features_csv(corpus));
    features::save_scaler(corpus.scaler, cfg.out_dir / artifact::kScaler);
    manifest.outputs[artifact::kScaler] = util::file_digest(cfg.out_dir / artifact::kScaler);

    // cluster
    clustering::KMeansModel model;
    try {
        model = clustering::kmeans(corpus.standardized, cfg.k, cfg.cluster_seed, cfg.restarts,
                                   cfg.kmeans);
        model.labels = clustering::label_all(model.centroids, cfg.naming);
    } catch (const Error& e) {
        throw StageError("cluster", e.what());
    }
    manifest.kmeans_sse = model.sse;
    clustering::save_model(model, cfg.out_dir / artifact::kClusterModel);
    manifest.outputs[artifact::kClusterModel] =
        util::file_digest(cfg.out_dir / artifact::kClusterModel);
    emit(artifact::kCentroids, centroids_csv(model));

    // profiles
    ProfileStage stage;
    try {
        stage = build_profiles(store, corpus, model, cfg);
    } catch (const Error& e) {
        throw StageError("profiles", e.what());
    }
    manifest.profiles = static_cast<long>(stage.coach_profiles.size());
    emit(artifact::kProfiles, profiles_csv(stage.coach_profiles));
    emit(artifact::kInputs, inputs_csv(stage.coach_profiles, stage.flat));
    profiles::save_scaling(stage.flat.scaling, cfg.out_dir / artifact::kProfileScaling);
    manifest.outputs[artifact::kProfileScaling] =
        util::file_digest(cfg.out_dir / artifact::kProfileScaling);

    // train
    nn::TrainResult trained;
    try {
        trained = nn::train(stage.flat.vectors, cfg.train);
    } catch (const Error& e) {
        throw StageError("train", e.what());
    }
    manifest.final_train_loss = trained.final_loss;
    nn::save_weights(trained.model, cfg.out_dir / artifact::kWeights);
    manifest.outputs[artifact::kWeights] = util::file_digest(cfg.out_dir / artifact::kWeights);
    emit(artifact::kLossHistory, loss_history_csv(trained.loss_history));

    // encode + index
    try {
        InputRows rows;
        for (std::size_t i = 0; i < stage.coach_profiles.size(); ++i) {
            rows.keys.push_back(
                {stage.coach_profiles[i].coach_id, stage.coach_profiles[i].team_id});
            rows.vectors.push_back(stage.flat.vectors[i]);
        }
        const std::string fingerprint = util::file_digest(cfg.out_dir / artifact::kWeights);
        const auto index = encode_all(trained.model, rows, fingerprint);
        manifest.encodings = static_cast<long>(index.entries().size());
        similarity::save_index(index, cfg.out_dir / artifact::kEncodings);
        manifest.outputs[artifact::kEncodings] =
            util::file_digest(cfg.out_dir / artifact::kEncodings);
    } catch (const Error& e) {
        throw StageError("encode", e.what());
    }

    // manifest
    nlohmann::ordered_json m;
    m["format"] = "coachstyle.manifest";
    m["version"] = 1;
    m["config"]["store_dir"] = cfg.store_dir.string();
    m["config"]["k"] = cfg.k;
    m["config"]["restarts"] = cfg.restarts;
    m["config"]["cluster_seed"] = cfg.cluster_seed;
    m["config"]["min_events"] = cfg.min_events;
    m["config"]["min_duration"] = cfg.min_duration;
    m["config"]["kmeans_max_iter"] = cfg.kmeans.max_iter;
    m["config"]["kmeans_tol"] = cfg.kmeans.tol;
    m["config"]["naming_theta_hi"] = cfg.naming.theta_hi;
    m["config"]["naming_theta_lo"] = cfg.naming.theta_lo;
    m["config"]["train_epochs"] = cfg.train.epochs;
    m["config"]["train_rho"] = cfg.train.rho;
    m["config"]["train_eps"] = cfg.train.eps;
    m["config"]["train_seed"] = cfg.train.seed;
    m["config"]["train_dims"] = cfg.train.dims;
    m["config"]["xg_beta0"] = cfg.xg.beta0;
    m["config"]["xg_beta_dist"] = cfg.xg.beta_dist;
    m["config"]["xg_beta_angle"] = cfg.xg.beta_angle;
    m["counts"]["matches"] = manifest.matches;
    m["counts"]["events"] = manifest.events;
    m["counts"]["possessions_segmented"] = manifest.possessions_segmented;
    m["counts"]["possessions_valid"] = manifest.possessions_valid;
    m["counts"]["profiles"] = manifest.profiles;
    m["counts"]["encodings"] = manifest.encodings;
    m["results"]["kmeans_sse"] = manifest.kmeans_sse;
    m["results"]["final_train_loss"] = manifest.final_train_loss;
    m["outputs"] = manifest.outputs;
    util::write_file(cfg.out_dir / artifact::kManifest, m.dump(2) + "\n");
    return manifest;
}

}  // namespace coachstyle::pipeline
