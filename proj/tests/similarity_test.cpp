#include <doctest.h>

#include <cmath>
#include <random>

#include "coachstyle/similarity.hpp"
#include "coachstyle/util.hpp"

using namespace coachstyle;
using similarity::EncodingEntry;
using similarity::EncodingIndex;
using similarity::Key;

namespace {

EncodingEntry entry(const std::string& coach, const std::string& team,
                    std::vector<double> enc) {
    return {{coach, team}, std::move(enc)};
}

}  // namespace

TEST_CASE("euclidean distance basics") {
    const std::vector<double> zero5 = {0, 0, 0, 0, 0};
    const std::vector<double> v345 = {3, 4, 0, 0, 0};
    CHECK(similarity::distance(zero5, zero5) == 0.0);
    CHECK(similarity::distance(zero5, v345) == 5.0);

    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> a(5), b(5);
        for (auto& v : a) v = util::uniform_range(rng, -2, 2);
        for (auto& v : b) v = util::uniform_range(rng, -2, 2);
        CHECK(similarity::distance(a, b) == similarity::distance(b, a));
        CHECK(similarity::distance(a, b) >= 0.0);
    }
}

TEST_CASE("nearest of two entries is the other") {
    EncodingIndex index({entry("C1", "T1", {0, 0, 0, 0, 0}), entry("C2", "T2", {1, 0, 0, 0, 0})},
                        "fp");
    const auto nb = similarity::nearest(index, {"C1", "T1"}, 3);
    REQUIRE(nb.size() == 1);
    CHECK(nb[0].key == Key{"C2", "T2"});
    CHECK(nb[0].dist == 1.0);
}

TEST_CASE("a duplicated encoding ranks first with distance zero") {
    EncodingIndex index({entry("C1", "T1", {2, 2, 0, 0, 0}), entry("C2", "T2", {2, 2, 0, 0, 0}),
                         entry("C3", "T3", {5, 5, 0, 0, 0})},
                        "fp");
    const auto nb = similarity::nearest(index, {"C1", "T1"}, 2);
    REQUIRE(nb.size() == 2);
    CHECK(nb[0].key == Key{"C2", "T2"});
    CHECK(nb[0].dist == 0.0);
}

TEST_CASE("three collinear encodings rank by distance") {
    EncodingIndex index({entry("A", "T", {0, 0, 0, 0, 0}), entry("B", "T", {1, 0, 0, 0, 0}),
                         entry("C", "T", {3, 0, 0, 0, 0})},
                        "fp");
    const auto nb = similarity::nearest(index, {"A", "T"}, 2);
    CHECK(nb[0].key == Key{"B", "T"});
    CHECK(nb[1].key == Key{"C", "T"});
}

TEST_CASE("unknown query key raises") {
    EncodingIndex index({entry("C1", "T1", {0, 0, 0, 0, 0})}, "fp");
    CHECK_THROWS_AS(similarity::nearest(index, {"CX", "TX"}, 1), UnknownKey);
}

TEST_CASE("pairwise matrix shape, symmetry, and metric axioms") {
    EncodingIndex single({entry("C1", "T1", {1, 2, 3, 4, 5})}, "fp");
    const auto m1 = similarity::pairwise_matrix(single);
    REQUIRE(m1.size() == 1);
    CHECK(m1[0][0] == 0.0);

    EncodingIndex twins({entry("C1", "T1", {1, 1, 1, 1, 1}), entry("C2", "T2", {1, 1, 1, 1, 1})},
                        "fp");
    for (const auto& row : similarity::pairwise_matrix(twins)) {
        for (double v : row) CHECK(v == 0.0);
    }

    std::mt19937_64 rng(5);
    std::vector<EncodingEntry> entries;
    for (int i = 0; i < 8; ++i) {
        std::vector<double> e(5);
        for (auto& v : e) v = util::uniform_range(rng, -1, 1);
        entries.push_back(entry("C" + std::to_string(i), "T", std::move(e)));
    }
    EncodingIndex index(std::move(entries), "fp");
    const auto m = similarity::pairwise_matrix(index);
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(m[i][i] == 0.0);
        for (std::size_t j = 0; j < m.size(); ++j) {
            CHECK(m[i][j] == m[j][i]);
            CHECK(m[i][j] >= 0.0);
            for (std::size_t l = 0; l < m.size(); ++l) {
                CHECK(m[i][j] <= m[i][l] + m[l][j] + 1e-12);
            }
        }
    }
}

TEST_CASE("ranking does not depend on insertion order") {
    std::vector<EncodingEntry> a = {entry("C1", "T", {0, 0, 0, 0, 0}),
                                    entry("C2", "T", {1, 0, 0, 0, 0}),
                                    entry("C3", "T", {2, 0, 0, 0, 0})};
    std::vector<EncodingEntry> b = {a[2], a[0], a[1]};
    EncodingIndex ia(a, "fp");
    EncodingIndex ib(b, "fp");
    const auto na = similarity::nearest(ia, {"C1", "T"}, 2);
    const auto nb = similarity::nearest(ib, {"C1", "T"}, 2);
    REQUIRE(na.size() == nb.size());
    for (std::size_t i = 0; i < na.size(); ++i) {
        CHECK(na[i].key == nb[i].key);
        CHECK(na[i].dist == nb[i].dist);
    }
}

TEST_CASE("duplicate keys are rejected") {
    std::vector<EncodingEntry> dup = {entry("C1", "T1", {0, 0, 0, 0, 0}),
                                      entry("C1", "T1", {1, 0, 0, 0, 0})};
    CHECK_THROWS_AS(EncodingIndex(std::move(dup), "fp"), Error);
}

TEST_CASE("index file round-trips exactly") {
    EncodingIndex index({entry("C1", "T1", {0.1, 0.25, -3.5, 1e-9, 42.0}),
                         entry("C2", "T2", {1, 2, 3, 4, 5})},
                        "fingerprint123");
    const auto path = std::filesystem::temp_directory_path() / "coachstyle_index_test.json";
    similarity::save_index(index, path);
    const auto loaded = similarity::load_index(path);
    CHECK(loaded.fingerprint() == "fingerprint123");
    REQUIRE(loaded.entries().size() == 2);
    CHECK(loaded.entries()[0].encoding == index.entries()[0].encoding);
    std::filesystem::remove(path);
}

TEST_CASE("csv reports have headers and one row per entry") {
    EncodingIndex index({entry("C1", "T1", {0, 0, 0, 0, 0}), entry("C1", "T2", {1, 0, 0, 0, 0}),
                         entry("C2", "T3", {4, 0, 0, 0, 0})},
                        "fp");
    const auto pw = similarity::pairwise_csv(index);
    CHECK(pw.find("key,C1/T1,C1/T2,C2/T3") == 0);
    CHECK(std::count(pw.begin(), pw.end(), '\n') == 4);

    const auto by_coach = similarity::pairwise_by_coach_csv(index);
    CHECK(by_coach.find("coach,C1,C2") == 0);
    CHECK(std::count(by_coach.begin(), by_coach.end(), '\n') == 3);

    const auto nb = similarity::nearest_csv(index, {"C2", "T3"}, 2);
    CHECK(nb.find("rank,coach_id,team_id,distance") == 0);
    CHECK(std::count(nb.begin(), nb.end(), '\n') == 3);
}
