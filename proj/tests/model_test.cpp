#include <doctest.h>

#include <random>
#include <sstream>

#include "coachstyle/model.hpp"
#include "coachstyle/util.hpp"
#include "helpers.hpp"

using namespace coachstyle;
using namespace testutil;

namespace {

const char* kMatchLine =
    R"({"match_id":"M1","season":"S1","home_team_id":"TH","away_team_id":"TA",)"
    R"("home_coach_id":"CH","away_coach_id":"CA"})";

model::EventStore parse(const std::string& matches, const std::string& events, bool strict,
                        model::ParseReport* rep = nullptr) {
    std::istringstream m(matches), e(events);
    return model::parse_store(m, e, strict, rep);
}

}  // namespace

TEST_CASE("well-formed pass record produces one match and one event") {
    const std::string event_line =
        R"({"match_id":"M1","period":1,"t":10.0,"team_id":"TH","event_type":"pass",)"
        R"("x":50,"y":50,"end_x":60,"end_y":50,"tags":[],"xg":null,"seq":0})";
    const auto store = parse(kMatchLine, event_line, true);
    CHECK(store.matches().size() == 1);
    REQUIRE(store.events("M1").size() == 1);
    const auto& e = store.events("M1")[0];
    CHECK(e.type == model::EventType::Pass);
    CHECK(e.x == 50.0);
    CHECK(e.end_x == 60.0);
}

TEST_CASE("coordinate out of range aborts in strict mode, skips otherwise") {
    const std::string bad =
        R"({"match_id":"M1","period":1,"t":1.0,"team_id":"TH","event_type":"touch",)"
        R"("x":101,"y":50,"end_x":null,"end_y":null,"tags":[],"xg":null,"seq":0})";
    CHECK_THROWS_AS(parse(kMatchLine, bad, true), MalformedRecord);
    model::ParseReport rep;
    const auto store = parse(kMatchLine, bad, false, &rep);
    CHECK(store.events("M1").empty());
    CHECK(rep.malformed == 1);
    CHECK(rep.skipped() == 1);
}

TEST_CASE("events with equal (period, t) keep seq order through round-trip") {
    const std::string lines =
        R"({"match_id":"M1","period":1,"t":5.0,"team_id":"TH","event_type":"touch",)"
        R"("x":10,"y":10,"end_x":null,"end_y":null,"tags":[],"xg":null,"seq":7})"
        "\n"
        R"({"match_id":"M1","period":1,"t":5.0,"team_id":"TH","event_type":"touch",)"
        R"("x":20,"y":20,"end_x":null,"end_y":null,"tags":[],"xg":null,"seq":3})";
    const auto store = parse(kMatchLine, lines, true);
    REQUIRE(store.events("M1").size() == 2);
    CHECK(store.events("M1")[0].seq == 3);
    CHECK(store.events("M1")[1].seq == 7);
    const auto again = roundtrip(store);
    CHECK(again.events("M1") == store.events("M1"));
}

TEST_CASE("pass without end position is malformed") {
    const std::string bad =
        R"({"match_id":"M1","period":1,"t":1.0,"team_id":"TH","event_type":"pass",)"
        R"("x":50,"y":50,"end_x":null,"end_y":null,"tags":[],"xg":null,"seq":0})";
    CHECK_THROWS_AS(parse(kMatchLine, bad, true), MalformedRecord);
}

TEST_CASE("shot without end position is malformed") {
    const std::string bad =
        R"({"match_id":"M1","period":1,"t":1.0,"team_id":"TH","event_type":"shot",)"
        R"("x":90,"y":50,"end_x":null,"end_y":null,"tags":[],"xg":null,"seq":0})";
    CHECK_THROWS_AS(parse(kMatchLine, bad, true), MalformedRecord);
}

TEST_CASE("unknown match and unknown team are reported") {
    const std::string wrong_match =
        R"({"match_id":"M9","period":1,"t":1.0,"team_id":"TH","event_type":"touch",)"
        R"("x":50,"y":50,"end_x":null,"end_y":null,"tags":[],"xg":null,"seq":0})";
    CHECK_THROWS_AS(parse(kMatchLine, wrong_match, true), UnknownMatch);
    const std::string wrong_team =
        R"({"match_id":"M1","period":1,"t":1.0,"team_id":"TX","event_type":"touch",)"
        R"("x":50,"y":50,"end_x":null,"end_y":null,"tags":[],"xg":null,"seq":0})";
    CHECK_THROWS_AS(parse(kMatchLine, wrong_team, true), UnknownTeam);
    model::ParseReport rep;
    parse(kMatchLine, wrong_match + std::string("\n") + wrong_team, false, &rep);
    CHECK(rep.unknown_match == 1);
    CHECK(rep.unknown_team == 1);
}

TEST_CASE("unsorted input is sorted by (period, t, seq) at ingestion") {
    std::map<std::string, std::vector<model::Event>> events;
    events["M1"] = {make_event("M1", "TH", 2, 1.0, model::EventType::Touch, 1, 1, {}, {}, 2),
                    make_event("M1", "TH", 1, 9.0, model::EventType::Touch, 2, 2, {}, {}, 1),
                    make_event("M1", "TH", 1, 3.0, model::EventType::Touch, 3, 3, {}, {}, 0)};
    const auto store = make_store({make_meta("M1")}, std::move(events));
    const auto& evs = store.events("M1");
    CHECK(evs[0].t == 3.0);
    CHECK(evs[1].t == 9.0);
    CHECK(evs[2].period == 2);
}

TEST_CASE("parse -> serialize -> parse is the identity on a randomized store") {
    std::mt19937_64 rng(99);
    std::map<std::string, std::vector<model::Event>> events;
    std::vector<model::MatchMeta> metas;
    for (int m = 0; m < 4; ++m) {
        const std::string id = "M" + std::to_string(m);
        metas.push_back(make_meta(id));
        for (int i = 0; i < 50; ++i) {
            auto e = make_event(id, i % 3 == 0 ? "TA" : "TH", 1 + (i > 25),
                                util::uniform_range(rng, 0, 2700.0),
                                i % 5 ? model::EventType::Pass : model::EventType::Duel,
                                util::uniform_range(rng, 0, 100), util::uniform_range(rng, 0, 100),
                                std::nullopt, std::nullopt, i);
            if (e.type == model::EventType::Pass) {
                e.end_x = util::uniform_range(rng, 0, 100);
                e.end_y = util::uniform_range(rng, 0, 100);
            }
            if (i % 7 == 0) e.tags = {"accurate"};
            if (i % 11 == 0) e.xg = util::uniform01(rng);
            events[id].push_back(std::move(e));
        }
    }
    const auto store = make_store(std::move(metas), std::move(events));
    const auto again = roundtrip(store);
    REQUIRE(again.matches().size() == store.matches().size());
    for (const auto& meta : store.matches()) {
        CHECK(again.match(meta.match_id) == meta);
        CHECK(again.events(meta.match_id) == store.events(meta.match_id));
    }
}

TEST_CASE("goal timeline credits goals and own goals in time order") {
    std::map<std::string, std::vector<model::Event>> events;
    auto shot = make_event("M1", "TH", 1, 600.0, model::EventType::Shot, 90, 50, 100.0, 50.0);
    shot.tags = {"goal"};
    auto own = make_event("M1", "TH", 2, 100.0, model::EventType::Clearance, 5, 50);
    own.tags = {"own_goal"};
    events["M1"] = {shot, own};
    const auto store = make_store({make_meta("M1")}, std::move(events));

    const auto timeline = model::goal_timeline(store, "M1");
    REQUIRE(timeline.size() == 2);
    CHECK(timeline[0] == model::GoalEntry{1, 600.0, "TH"});
    CHECK(timeline[1] == model::GoalEntry{2, 100.0, "TA"});  // own goal credits the opponent
    for (std::size_t i = 1; i < timeline.size(); ++i) {
        CHECK(std::pair(timeline[i - 1].period, timeline[i - 1].t) <=
              std::pair(timeline[i].period, timeline[i].t));
    }
    CHECK_THROWS_AS(model::goal_timeline(store, "M404"), UnknownMatch);
}

TEST_CASE("no goal tags means an empty timeline") {
    std::map<std::string, std::vector<model::Event>> events;
    events["M1"] = {make_event("M1", "TH", 1, 5.0)};
    const auto store = make_store({make_meta("M1")}, std::move(events));
    CHECK(model::goal_timeline(store, "M1").empty());
}
