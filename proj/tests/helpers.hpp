#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coachstyle/model.hpp"
#include "coachstyle/possession.hpp"

namespace testutil {

using coachstyle::model::Event;
using coachstyle::model::EventStore;
using coachstyle::model::EventType;
using coachstyle::model::MatchMeta;

inline Event make_event(std::string match_id, std::string team_id, int period, double t,
                        EventType type = EventType::Touch, double x = 50, double y = 50,
                        std::optional<double> end_x = std::nullopt,
                        std::optional<double> end_y = std::nullopt, long seq = 0) {
    Event e;
    e.match_id = std::move(match_id);
    e.team_id = std::move(team_id);
    e.period = period;
    e.t = t;
    e.type = type;
    e.x = x;
    e.y = y;
    e.end_x = end_x;
    e.end_y = end_y;
    e.seq = seq;
    return e;
}

inline Event make_pass(std::string match_id, std::string team_id, int period, double t, double x,
                       double y, double end_x, double end_y, long seq = 0) {
    return make_event(std::move(match_id), std::move(team_id), period, t, EventType::Pass, x, y,
                      end_x, end_y, seq);
}

inline MatchMeta make_meta(std::string match_id, std::string home_team = "TH",
                           std::string away_team = "TA", std::string home_coach = "CH",
                           std::string away_coach = "CA") {
    return {std::move(match_id), "S1", std::move(home_team), std::move(away_team),
            std::move(home_coach), std::move(away_coach)};
}

inline EventStore make_store(std::vector<MatchMeta> metas,
                             std::map<std::string, std::vector<Event>> events) {
    return EventStore(std::move(metas), std::move(events));
}

inline coachstyle::possession::Possession make_possession(std::vector<Event> events) {
    coachstyle::possession::Possession p;
    p.match_id = events.front().match_id;
    p.team_id = events.front().team_id;
    p.period = events.front().period;
    p.start_t = events.front().t;
    p.end_t = events.back().t;
    p.events = std::move(events);
    return p;
}

inline EventStore roundtrip(const EventStore& store) {
    std::ostringstream matches_out, events_out;
    coachstyle::model::serialize_store(store, matches_out, events_out);
    std::istringstream matches_in(matches_out.str()), events_in(events_out.str());
    return coachstyle::model::parse_store(matches_in, events_in, true);
}

}  // namespace testutil
