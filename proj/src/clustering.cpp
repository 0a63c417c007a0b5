#include "coachstyle/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "coachstyle/errors.hpp"
#include "coachstyle/util.hpp"

namespace coachstyle::clustering {

namespace {

struct LloydRun {
    std::vector<Vec7> centroids;
    std::vector<int> assign;
    double sse = 0.0;
    int iterations = 0;
    std::vector<double> trace;
};

// One full Lloyd optimization from the given centroids. SSE is recorded after
// every iteration and must never increase (tolerance 1e-9).
LloydRun lloyd(std::span<const Vec7> points, std::vector<Vec7> centroids,
               const KMeansParams& params) {
    const std::size_t n = points.size();
    const int k = static_cast<int>(centroids.size());
    LloydRun run;
    run.assign.assign(n, 0);

    double prev_sse = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.max_iter; ++iter) {
        par::assign_nearest(points, centroids, run.assign);

        std::vector<Vec7> sums;
        std::vector<long> counts;
        par::accumulate_clusters(points, run.assign, k, sums, counts);

        double max_shift_sq = 0.0;
        for (int j = 0; j < k; ++j) {
            const auto ji = static_cast<std::size_t>(j);
            if (counts[ji] == 0) continue;  // reseeded below
            Vec7 next{};
            for (std::size_t d = 0; d < 7; ++d) {
                next[d] = sums[ji][d] / static_cast<double>(counts[ji]);
            }
            max_shift_sq = std::max(max_shift_sq, par::dist_sq(next, centroids[ji]));
            centroids[ji] = next;
        }

        // Reseed empty clusters with the point farthest from its centroid
        // (ties to the lowest point index); each reseed claims one point.
        std::vector<std::size_t> claimed;
        for (int j = 0; j < k; ++j) {
            const auto ji = static_cast<std::size_t>(j);
            if (counts[ji] != 0) continue;
            std::size_t far_idx = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (std::find(claimed.begin(), claimed.end(), i) != claimed.end()) continue;
                const double d =
                    par::dist_sq(points[i], centroids[static_cast<std::size_t>(run.assign[i])]);
                if (d > far_d) {
                    far_d = d;
                    far_idx = i;
                }
            }
            centroids[ji] = points[far_idx];
            run.assign[far_idx] = j;
            claimed.push_back(far_idx);
            max_shift_sq = std::numeric_limits<double>::infinity();
        }

        const double sse = par::total_sse(points, centroids, run.assign);
        if (sse > prev_sse + 1e-9) {
            throw Error("Lloyd SSE increased between iterations");
        }
        prev_sse = sse;
        run.trace.push_back(sse);
        run.iterations = iter + 1;
        if (max_shift_sq < params.tol * params.tol) break;
    }

    // Final assignment so the reported SSE is consistent with the centroids.
    par::assign_nearest(points, centroids, run.assign);
    run.sse = par::total_sse(points, centroids, run.assign);
    if (run.sse > prev_sse + 1e-9) throw Error("Lloyd SSE increased at final assignment");
    run.trace.push_back(run.sse);
    run.centroids = std::move(centroids);
    return run;
}

// k-means++: first centroid uniform, the rest sampled proportionally to the
// squared distance from the nearest chosen centroid.
std::vector<Vec7> kmeanspp_init(std::span<const Vec7> points, int k, std::mt19937_64& rng) {
    const std::size_t n = points.size();
    std::vector<Vec7> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(points[util::uniform_index(rng, n)]);

    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    for (int j = 1; j < k; ++j) {
        par::update_min_dist_sq(points, centroids.back(), d2);
        const double total = par::chunked_sum(n, [&](std::size_t i) { return d2[i]; });
        if (!(total > 0.0)) {
            throw TooFewPoints("k-means++ ran out of distinct points");
        }
        const double r = util::uniform01(rng) * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc > r) {
                pick = i;
                break;
            }
        }
        // Land on a point with nonzero weight even if rounding pushed past it.
        while (d2[pick] == 0.0 && pick > 0) --pick;
        centroids.push_back(points[pick]);
    }
    return centroids;
}

KMeansModel to_model(LloydRun run, int k, std::uint64_t seed) {
    KMeansModel model;
    model.k = k;
    model.centroids = std::move(run.centroids);
    model.sse = run.sse;
    model.seed = seed;
    model.iterations_run = run.iterations;
    model.sse_trace = std::move(run.trace);
    model.labels = label_all(model.centroids);
    return model;
}

}  // namespace

int count_distinct(std::span<const Vec7> points) {
    std::vector<Vec7> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

KMeansModel kmeans(std::span<const Vec7> points, int k, std::uint64_t seed, int restarts,
                   const KMeansParams& params) {
    if (points.empty()) throw EmptyInput("kmeans requires points");
    if (k < 1) throw Error("k must be >= 1");
    if (restarts < 1) throw Error("restarts must be >= 1");
    if (k > count_distinct(points)) {
        throw TooFewPoints("k exceeds the number of distinct points");
    }

    std::vector<LloydRun> runs(static_cast<std::size_t>(restarts));
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(util::mix_seed(seed, static_cast<std::uint64_t>(r)));
        runs[static_cast<std::size_t>(r)] = lloyd(points, kmeanspp_init(points, k, rng), params);
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].sse < runs[best].sse) best = r;
    }
    return to_model(std::move(runs[best]), k, seed);
}

KMeansModel lloyd_from(std::span<const Vec7> points, std::vector<Vec7> init,
                       const KMeansParams& params) {
    if (points.empty()) throw EmptyInput("lloyd requires points");
    const int k = static_cast<int>(init.size());
    return to_model(lloyd(points, std::move(init), params), k, 0);
}

std::vector<std::pair<int, double>> sse_curve(std::span<const Vec7> points, int k_min, int k_max,
                                              std::uint64_t seed, int restarts,
                                              const KMeansParams& params) {
    if (k_min < 1 || k_min > k_max) throw Error("invalid k range");
    if (k_max > count_distinct(points)) {
        throw TooFewPoints("k_max exceeds the number of distinct points");
    }
    std::vector<std::pair<int, double>> out;
    std::vector<Vec7> prev_best;
    for (int k = k_min; k <= k_max; ++k) {
        KMeansModel best = kmeans(points, k, seed, restarts, params);
        if (!prev_best.empty()) {
            // Warm start: previous best centroids plus the point farthest from
            // them. Its starting SSE is below the previous k's, and Lloyd only
            // improves it, so the curve cannot rise.
            std::vector<int> a(points.size());
            par::assign_nearest(points, prev_best, a);
            std::size_t far_idx = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double d =
                    par::dist_sq(points[i], prev_best[static_cast<std::size_t>(a[i])]);
                if (d > far_d) {
                    far_d = d;
                    far_idx = i;
                }
            }
            std::vector<Vec7> warm = prev_best;
            warm.push_back(points[far_idx]);
            KMeansModel warmed = to_model(lloyd(points, std::move(warm), params), k, seed);
            if (warmed.sse < best.sse) best = std::move(warmed);
        }
        out.emplace_back(k, best.sse);
        prev_best = std::move(best.centroids);
    }
    return out;
}

int assign(const Vec7& point, const KMeansModel& model) {
    return par::nearest_centroid(point, model.centroids);
}

std::vector<int> assign_all(std::span<const Vec7> points, const KMeansModel& model) {
    std::vector<int> out(points.size());
    par::assign_nearest(points, model.centroids, out);
    return out;
}

std::string label_centroid(const Vec7& centroid, std::span<const Vec7> all_centroids,
                           const NamingConfig& cfg) {
    // Feature indices in the standardized vector.
    constexpr std::size_t kDuration = 0, kPassLen = 1, kAvgY = 2, kStartX = 3;
    constexpr std::size_t kSpeed1 = 4, kSpeed2 = 5, kSpeed3 = 6;

    const double hi = cfg.theta_hi;
    const double lo = cfg.theta_lo;

    if (centroid[kDuration] >= hi) {
        if (centroid[kSpeed3] >= hi) return "long possession final acceleration";
        if (centroid[kSpeed2] >= hi) return "long possession fast approaching";
        return "long possession slow advancing";
    }

    bool is_max_pass_len = true;
    for (const Vec7& c : all_centroids) {
        if (c[kPassLen] > centroid[kPassLen]) {
            is_max_pass_len = false;
            break;
        }
    }
    if (is_max_pass_len) return "long ball";

    const double y = cfg.left_flank_negative_y ? centroid[kAvgY] : -centroid[kAvgY];
    if (y <= lo || y >= hi) {
        const std::string side = y <= lo ? "left flank" : "right flank";
        const std::string prefix = centroid[kStartX] >= hi ? "high recovery" : "fast build";
        return prefix + " " + side;
    }

    if (centroid[kStartX] >= hi && centroid[kSpeed1] <= lo) return "high recovery and rebuild";
    if (centroid[kStartX] <= lo && centroid[kSpeed1] >= hi) return "fast bottom build";

    const auto it = std::find(all_centroids.begin(), all_centroids.end(), centroid);
    const auto idx = it == all_centroids.end() ? 0 : it - all_centroids.begin();
    return "possession type " + std::to_string(idx);
}

std::vector<std::string> label_all(std::span<const Vec7> centroids, const NamingConfig& cfg) {
    std::vector<std::string> labels;
    labels.reserve(centroids.size());
    std::set<std::string> used;
    for (std::size_t i = 0; i < centroids.size(); ++i) {
        std::string base = label_centroid(centroids[i], centroids, cfg);
        std::string name = base;
        for (int suffix = 2; used.count(name); ++suffix) {
            name = base + " #" + std::to_string(suffix);
        }
        used.insert(name);
        labels.push_back(std::move(name));
    }
    return labels;
}

double silhouette(std::span<const std::vector<double>> points, std::span<const int> labels) {
    const std::size_t n = points.size();
    if (n != labels.size()) throw Error("silhouette: size mismatch");
    if (n < 2) return 0.0;

    auto dist = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t d = 0; d < points[a].size(); ++d) {
            const double diff = points[a][d] - points[b][d];
            s += diff * diff;
        }
        return std::sqrt(s);
    };

    std::set<int> label_set(labels.begin(), labels.end());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a_sum = 0.0;
        long a_count = 0;
        std::map<int, std::pair<double, long>> other;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = dist(i, j);
            if (labels[j] == labels[i]) {
                a_sum += d;
                ++a_count;
            } else {
                auto& [s, c] = other[labels[j]];
                s += d;
                ++c;
            }
        }
        if (a_count == 0 || other.empty()) continue;  // singleton cluster scores 0
        const double a = a_sum / static_cast<double>(a_count);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [lbl, sc] : other) {
            b = std::min(b, sc.first / static_cast<double>(sc.second));
        }
        const double m = std::max(a, b);
        total += m > 0.0 ? (b - a) / m : 0.0;
    }
    return total / static_cast<double>(n);
}

void save_model(const KMeansModel& model, const std::filesystem::path& path) {
    nlohmann::ordered_json rec;
    rec["format"] = "coachstyle.kmeans";
    rec["version"] = 1;
    rec["k"] = model.k;
    rec["seed"] = model.seed;
    rec["sse"] = model.sse;
    rec["iterations_run"] = model.iterations_run;
    rec["centroids"] = model.centroids;
    rec["labels"] = model.labels;
    util::write_file(path, rec.dump(2) + "\n");
}

KMeansModel load_model(const std::filesystem::path& path) {
    const auto rec = nlohmann::json::parse(util::read_file(path));
    if (rec.value("format", "") != "coachstyle.kmeans") {
        throw IoError("not a k-means model file: " + path.string());
    }
    KMeansModel model;
    model.k = rec.at("k").get<int>();
    model.seed = rec.at("seed").get<std::uint64_t>();
    model.sse = rec.at("sse").get<double>();
    model.iterations_run = rec.at("iterations_run").get<int>();
    for (const auto& c : rec.at("centroids")) {
        Vec7 v{};
        for (std::size_t d = 0; d < 7; ++d) v[d] = c.at(d).get<double>();
        model.centroids.push_back(v);
    }
    for (const auto& l : rec.at("labels")) model.labels.push_back(l.get<std::string>());
    return model;
}

}  // namespace coachstyle::clustering
