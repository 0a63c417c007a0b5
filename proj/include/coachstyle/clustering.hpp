#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coachstyle/parallel.hpp"

namespace coachstyle::clustering {

using par::Vec7;

struct KMeansParams {
    int max_iter = 300;
    double tol = 1e-4;  // convergence on max centroid displacement
};

struct KMeansModel {
    int k = 0;
    std::vector<Vec7> centroids;
    std::vector<std::string> labels;  // one name per centroid, unique
    double sse = 0.0;
    std::uint64_t seed = 0;
    int iterations_run = 0;
    std::vector<double> sse_trace;  // per-iteration SSE of the winning restart
};

// Lloyd's algorithm, k-means++ seeding per restart, nearest-centroid ties to
// the lowest index, empty clusters reseeded with the point farthest from its
// centroid. Returns the restart with minimum SSE. Deterministic in
// (points order, k, seed, restarts) for any worker count.
KMeansModel kmeans(std::span<const Vec7> points, int k, std::uint64_t seed, int restarts,
                   const KMeansParams& params = {});

// One Lloyd run from explicit starting centroids (no seeding).
KMeansModel lloyd_from(std::span<const Vec7> points, std::vector<Vec7> init,
                       const KMeansParams& params = {});

// Best SSE per k over [k_min, k_max]. Each k also tries a warm start built
// from the previous k's best centroids plus the farthest point, which keeps
// the reported curve non-increasing in k.
std::vector<std::pair<int, double>> sse_curve(std::span<const Vec7> points, int k_min, int k_max,
                                              std::uint64_t seed, int restarts,
                                              const KMeansParams& params = {});

int assign(const Vec7& point, const KMeansModel& model);
std::vector<int> assign_all(std::span<const Vec7> points, const KMeansModel& model);

struct NamingConfig {
    double theta_hi = 0.75;
    double theta_lo = -0.75;
    bool left_flank_negative_y = true;  // standardized avg_y <= theta_lo reads as left flank
};

// Names one centroid from its standardized feature pattern; first matching
// rule wins, "possession type {i}" as fallback.
std::string label_centroid(const Vec7& centroid, std::span<const Vec7> all_centroids,
                           const NamingConfig& cfg = {});
// Names every centroid and disambiguates duplicates with "#2", "#3", ...
std::vector<std::string> label_all(std::span<const Vec7> centroids, const NamingConfig& cfg = {});

// Mean silhouette coefficient over points with integer labels; generic
// dimension, used for clustering-quality checks.
double silhouette(std::span<const std::vector<double>> points, std::span<const int> labels);

int count_distinct(std::span<const Vec7> points);

void save_model(const KMeansModel& model, const std::filesystem::path& path);
KMeansModel load_model(const std::filesystem::path& path);

}  // namespace coachstyle::clustering
