#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "coachstyle/clustering.hpp"
#include "coachstyle/util.hpp"
#include "oracles.hpp"

using namespace coachstyle;
using clustering::Vec7;

namespace {

Vec7 vec7(double a, double b = 0) {
    Vec7 v{};
    v[0] = a;
    v[1] = b;
    return v;
}

const std::vector<Vec7> kFourPoints = {vec7(0, 0), vec7(0, 1), vec7(10, 10), vec7(10, 11)};

}  // namespace

TEST_CASE("four-point instance: k=2 splits the pairs with SSE 1.0") {
    const auto model = clustering::kmeans(kFourPoints, 2, 7, 10);
    CHECK(model.sse == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.sse == doctest::Approx(oracle::best_partition_sse(kFourPoints, 2)).epsilon(1e-9));
    const auto assign = clustering::assign_all(kFourPoints, model);
    CHECK(assign[0] == assign[1]);
    CHECK(assign[2] == assign[3]);
    CHECK(assign[0] != assign[2]);
}

TEST_CASE("k equal to the distinct point count reaches SSE 0, duplicates collapse") {
    std::vector<Vec7> pts = {vec7(1), vec7(1), vec7(2), vec7(3), vec7(3)};
    const auto model = clustering::kmeans(pts, 3, 3, 5);
    CHECK(model.sse == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(clustering::count_distinct(pts) == 3);
}

TEST_CASE("k=1 gives the corpus mean and total deviation") {
    const auto model = clustering::kmeans(kFourPoints, 1, 1, 1);
    CHECK(model.centroids[0][0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(model.centroids[0][1] == doctest::Approx(5.5).epsilon(1e-12));
    double expect = 0.0;
    for (const auto& p : kFourPoints) expect += par::dist_sq(p, model.centroids[0]);
    CHECK(model.sse == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(clustering::kmeans({}, 1, 1, 1), EmptyInput);
    std::vector<Vec7> pts = {vec7(1), vec7(1)};
    CHECK_THROWS_AS(clustering::kmeans(pts, 2, 1, 1), TooFewPoints);
}

TEST_CASE("sse curve endpoints and ordering on the four-point instance") {
    const auto curve = clustering::sse_curve(kFourPoints, 1, 2, 5, 10);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].first == 1);
    CHECK(curve[1].second == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(curve[0].second > curve[1].second);

    const auto zero_end = clustering::sse_curve(kFourPoints, 4, 4, 5, 4);
    CHECK(zero_end[0].second == doctest::Approx(0.0).epsilon(1e-15));

    const auto single = clustering::sse_curve(kFourPoints, 1, 1, 5, 1);
    CHECK(single[0].second == doctest::Approx(oracle::best_partition_sse(kFourPoints, 1)).epsilon(1e-9));
}

TEST_CASE("assign follows the nearest centroid with ties to the lowest index") {
    clustering::KMeansModel model;
    model.k = 4;
    model.centroids = {vec7(0), vec7(-1), vec7(5), vec7(1)};
    CHECK(clustering::assign(vec7(5), model) == 2);     // exact hit
    CHECK(clustering::assign(vec7(0, 0.0), model) == 0);
    // equidistant between centroids 1 and 3
    CHECK(clustering::assign(vec7(0, 2), model) == 0);
    model.centroids = {vec7(10), vec7(-1), vec7(10), vec7(1)};
    CHECK(clustering::assign(vec7(0), model) == 1);     // -1 and 1 tie -> index 1

    const auto pair_model = clustering::kmeans(kFourPoints, 2, 7, 10);
    const int left = clustering::assign(vec7(0, 0.4), pair_model);
    CHECK(left == clustering::assign(vec7(0, 0), pair_model));
}

TEST_CASE("centroid naming rules") {
    const auto named = [](Vec7 c, std::vector<Vec7> all = {}) {
        all.insert(all.begin(), c);
        // a decoy owning the max pass length unless the case provides one
        Vec7 decoy{};
        decoy[1] = 99.0;
        all.push_back(decoy);
        return clustering::label_centroid(c, all);
    };

    Vec7 long_accel{};
    long_accel[0] = 2.0;
    long_accel[6] = 1.2;
    CHECK(named(long_accel) == "long possession final acceleration");

    Vec7 long_approach{};
    long_approach[0] = 1.0;
    long_approach[5] = 0.9;
    CHECK(named(long_approach) == "long possession fast approaching");

    Vec7 long_slow{};
    long_slow[0] = 0.8;
    CHECK(named(long_slow) == "long possession slow advancing");

    Vec7 longest_ball{};
    longest_ball[1] = 3.0;
    CHECK(clustering::label_centroid(longest_ball, {&longest_ball, 1}) == "long ball");

    Vec7 left_recovery{};
    left_recovery[2] = -1.0;
    left_recovery[3] = 1.0;
    CHECK(named(left_recovery) == "high recovery left flank");

    Vec7 right_build{};
    right_build[2] = 1.0;
    right_build[3] = 0.0;
    CHECK(named(right_build) == "fast build right flank");

    Vec7 rebuild{};
    rebuild[3] = 1.0;
    rebuild[4] = -1.2;
    CHECK(named(rebuild) == "high recovery and rebuild");

    Vec7 bottom{};
    bottom[3] = -1.0;
    bottom[4] = 1.2;
    CHECK(named(bottom) == "fast bottom build");

    Vec7 zero{};
    CHECK(named(zero) == "possession type 0");
}

TEST_CASE("duplicate names get suffixes and stay unique") {
    Vec7 a{}, b{};
    a[0] = 2.0;
    b[0] = 2.5;
    const auto labels = clustering::label_all(std::vector<Vec7>{a, b});
    CHECK(labels[0] == "long possession slow advancing");
    CHECK(labels[1] == "long possession slow advancing #2");
}

TEST_CASE("flank sign convention is configurable") {
    Vec7 c{};
    c[2] = -1.0;
    Vec7 decoy{};
    decoy[1] = 99.0;
    const std::vector<Vec7> all = {c, decoy};
    clustering::NamingConfig cfg;
    cfg.left_flank_negative_y = false;
    CHECK(clustering::label_centroid(c, all).find("left") != std::string::npos);
    CHECK(clustering::label_centroid(c, all, cfg).find("right") != std::string::npos);
}

TEST_CASE("restart determinism is independent of the thread count") {
    std::mt19937_64 rng(123);
    std::vector<Vec7> pts(400);
    for (auto& p : pts) {
        for (auto& v : p) v = util::uniform_range(rng, -2, 2);
    }
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto m1 = clustering::kmeans(pts, 6, 42, 8);
    omp_set_num_threads(4);
    const auto m2 = clustering::kmeans(pts, 6, 42, 8);
    omp_set_num_threads(saved);
    CHECK(m1.centroids == m2.centroids);  // bit-exact
    CHECK(m1.sse == m2.sse);
    CHECK(clustering::assign_all(pts, m1) == clustering::assign_all(pts, m2));
}

TEST_CASE("lloyd SSE trace never increases") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 10; ++round) {
        std::vector<Vec7> pts(150);
        for (auto& p : pts) {
            for (auto& v : p) v = util::uniform_range(rng, -1, 1);
        }
        const auto model = clustering::kmeans(pts, 5, 100 + static_cast<std::uint64_t>(round), 3);
        for (std::size_t i = 1; i < model.sse_trace.size(); ++i) {
            CHECK(model.sse_trace[i] <= model.sse_trace[i - 1] + 1e-9);
        }
    }
}

TEST_CASE("small instances reach the exhaustive optimum with restarts") {
    std::mt19937_64 rng(2024);
    int hits = 0;
    const int rounds = 25;
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = 6 + util::uniform_index(rng, 7);   // 6..12
        const int k = 2 + static_cast<int>(util::uniform_index(rng, 2));  // 2..3
        std::vector<Vec7> pts(n);
        for (auto& p : pts) {
            p = Vec7{};
            p[0] = util::uniform_range(rng, -5, 5);
            p[1] = util::uniform_range(rng, -5, 5);
        }
        const auto model = clustering::kmeans(pts, k, rng(), 10);
        const double best = oracle::best_partition_sse(pts, k);
        if (model.sse <= best * 1.01 + 1e-12) ++hits;
    }
    CHECK(hits >= rounds - 1);
}

TEST_CASE("silhouette separates well-separated groups") {
    std::vector<std::vector<double>> pts = {{0, 0}, {0, 1}, {10, 10}, {10, 11}};
    std::vector<int> good = {0, 0, 1, 1};
    std::vector<int> bad = {0, 1, 0, 1};
    CHECK(clustering::silhouette(pts, good) > 0.8);
    CHECK(clustering::silhouette(pts, bad) < 0.0);
}

TEST_CASE("model file round-trips exactly") {
    const auto model = clustering::kmeans(kFourPoints, 2, 7, 10);
    const auto path = std::filesystem::temp_directory_path() / "coachstyle_kmeans_test.json";
    clustering::save_model(model, path);
    const auto loaded = clustering::load_model(path);
    CHECK(loaded.k == model.k);
    CHECK(loaded.centroids == model.centroids);
    CHECK(loaded.labels == model.labels);
    CHECK(loaded.sse == model.sse);
    std::filesystem::remove(path);
}
