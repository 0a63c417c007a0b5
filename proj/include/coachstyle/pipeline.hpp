#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "coachstyle/clustering.hpp"
#include "coachstyle/features.hpp"
#include "coachstyle/model.hpp"
#include "coachstyle/nn.hpp"
#include "coachstyle/possession.hpp"
#include "coachstyle/profiles.hpp"
#include "coachstyle/similarity.hpp"

namespace coachstyle::pipeline {

struct PipelineConfig {
    std::filesystem::path store_dir;  // matches.ndjson + events.ndjson
    std::filesystem::path out_dir;
    int k = 10;
    int restarts = 10;
    std::uint64_t cluster_seed = 10;
    int min_events = 2;
    double min_duration = 0.0;
    clustering::KMeansParams kmeans;
    clustering::NamingConfig naming;
    nn::TrainConfig train;  // 3000 epochs, adadelta rho/eps, 70-32-5-32-70
    profiles::XgModelParams xg;
};

// Fixed artifact names under out_dir.
namespace artifact {
inline constexpr const char* kPossessions = "possessions.csv";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kScaler = "scaler.json";
inline constexpr const char* kClusterModel = "cluster_model.json";
inline constexpr const char* kCentroids = "centroids.csv";
inline constexpr const char* kSseCurve = "sse_curve.csv";
inline constexpr const char* kProfiles = "profiles.csv";
inline constexpr const char* kInputs = "inputs.csv";
inline constexpr const char* kProfileScaling = "profile_scaling.json";
inline constexpr const char* kWeights = "autoencoder.json";
inline constexpr const char* kLossHistory = "loss_history.csv";
inline constexpr const char* kEncodings = "encodings.json";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

model::EventStore load_store(const std::filesystem::path& store_dir, bool strict = true,
                             model::ParseReport* report = nullptr);
void save_store(const model::EventStore& store, const std::filesystem::path& store_dir);

// Valid possessions of the whole store (match_id order) plus their features
// and the fitted scaler.
struct Corpus {
    std::vector<possession::Possession> possessions;
    std::vector<features::FeatureVector> raw;
    features::ScalerParams scaler;
    std::vector<par::Vec7> standardized;
};
Corpus build_corpus(const model::EventStore& store, const PipelineConfig& cfg);

std::string possessions_csv(const Corpus& corpus);
std::string features_csv(const Corpus& corpus);
std::string centroids_csv(const clustering::KMeansModel& model);
std::string sse_curve_csv(const std::vector<std::pair<int, double>>& curve);
std::string sse_curve_svg(const std::vector<std::pair<int, double>>& curve);
std::string loss_history_csv(const std::vector<double>& history);

struct ProfileStage {
    std::vector<profiles::CoachProfile> coach_profiles;  // (coach, team) sorted
    profiles::FlattenResult flat;
};
ProfileStage build_profiles(const model::EventStore& store, const Corpus& corpus,
                            const clustering::KMeansModel& model, const PipelineConfig& cfg);

std::string profiles_csv(const std::vector<profiles::CoachProfile>& profs);
std::string inputs_csv(const std::vector<profiles::CoachProfile>& profs,
                       const profiles::FlattenResult& flat);
// Reads a profiles/inputs CSV back into keys + row-major value vectors.
struct InputRows {
    std::vector<similarity::Key> keys;
    std::vector<std::vector<double>> vectors;
};
InputRows load_inputs_csv(const std::filesystem::path& path);

similarity::EncodingIndex encode_all(const nn::AutoencoderModel& model, const InputRows& rows,
                                     const std::string& fingerprint);

struct RunManifest {
    long matches = 0;
    long events = 0;
    long possessions_segmented = 0;
    long possessions_valid = 0;
    long profiles = 0;
    long encodings = 0;
    double kmeans_sse = 0.0;
    double final_train_loss = 0.0;
    std::map<std::string, std::string> outputs;  // artifact name -> digest
};

// ingest -> segment -> features -> cluster -> profiles -> train -> encode ->
// index; every stage artifact plus manifest.json lands in cfg.out_dir.
// Byte-identical outputs for identical configs, any worker count.
RunManifest run_pipeline(const PipelineConfig& cfg);

}  // namespace coachstyle::pipeline
