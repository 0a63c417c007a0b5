#include "coachstyle/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "coachstyle/util.hpp"

namespace coachstyle::model {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kEventTypeNames[] = {
    "pass",       "shot",      "duel",  "free_kick",    "throw_in",
    "goalkeeper", "clearance", "touch", "interruption",
};

bool event_order_lt(const Event& a, const Event& b) {
    return std::tie(a.period, a.t, a.seq) < std::tie(b.period, b.t, b.seq);
}

double require_number(const nlohmann::json& rec, const char* field) {
    if (!rec.contains(field) || !rec[field].is_number()) {
        throw MalformedRecord(std::string("missing or non-numeric field: ") + field);
    }
    return rec[field].get<double>();
}

std::string require_string(const nlohmann::json& rec, const char* field) {
    if (!rec.contains(field) || !rec[field].is_string() || rec[field].get<std::string>().empty()) {
        throw MalformedRecord(std::string("missing or empty field: ") + field);
    }
    return rec[field].get<std::string>();
}

std::optional<double> optional_number(const nlohmann::json& rec, const char* field) {
    if (!rec.contains(field) || rec[field].is_null()) return std::nullopt;
    if (!rec[field].is_number()) {
        throw MalformedRecord(std::string("non-numeric field: ") + field);
    }
    return rec[field].get<double>();
}

void check_coordinate(double v, const char* field) {
    if (!(v >= 0.0 && v <= 100.0)) {
        throw MalformedRecord(std::string(field) + " out of [0,100]: " + util::fmt_double(v));
    }
}

Event parse_event_record(const std::string& line, long fallback_seq) {
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("bad json: ") + e.what());
    }
    if (!rec.is_object()) throw MalformedRecord("event record is not an object");

    Event e;
    e.match_id = require_string(rec, "match_id");
    const double period = require_number(rec, "period");
    if (period != 1.0 && period != 2.0) throw MalformedRecord("period must be 1 or 2");
    e.period = static_cast<int>(period);
    e.t = require_number(rec, "t");
    if (!(e.t >= 0.0)) throw MalformedRecord("t must be non-negative");
    e.team_id = require_string(rec, "team_id");
    e.type = event_type_from_string(require_string(rec, "event_type"));
    e.x = require_number(rec, "x");
    e.y = require_number(rec, "y");
    check_coordinate(e.x, "x");
    check_coordinate(e.y, "y");
    e.end_x = optional_number(rec, "end_x");
    e.end_y = optional_number(rec, "end_y");
    if (e.end_x) check_coordinate(*e.end_x, "end_x");
    if (e.end_y) check_coordinate(*e.end_y, "end_y");
    if (e.end_x.has_value() != e.end_y.has_value()) {
        throw MalformedRecord("end_x and end_y must be present together");
    }
    if ((e.type == EventType::Pass || e.type == EventType::Shot) && !e.end_x) {
        throw MalformedRecord(std::string(to_string(e.type)) + " requires end_x and end_y");
    }
    if (rec.contains("tags") && !rec["tags"].is_null()) {
        if (!rec["tags"].is_array()) throw MalformedRecord("tags must be an array");
        for (const auto& tag : rec["tags"]) {
            if (!tag.is_string()) throw MalformedRecord("tags must be strings");
            e.tags.insert(tag.get<std::string>());
        }
    }
    e.xg = optional_number(rec, "xg");
    if (e.xg && !(*e.xg >= 0.0 && *e.xg <= 1.0)) {
        throw MalformedRecord("xg out of [0,1]");
    }
    if (rec.contains("seq") && !rec["seq"].is_null()) {
        if (!rec["seq"].is_number_integer()) throw MalformedRecord("seq must be an integer");
        e.seq = rec["seq"].get<long>();
    } else {
        e.seq = fallback_seq;
    }
    return e;
}

MatchMeta parse_match_record(const std::string& line) {
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("bad json: ") + e.what());
    }
    if (!rec.is_object()) throw MalformedRecord("match record is not an object");

    MatchMeta m;
    m.match_id = require_string(rec, "match_id");
    m.season = require_string(rec, "season");
    m.home_team_id = require_string(rec, "home_team_id");
    m.away_team_id = require_string(rec, "away_team_id");
    m.home_coach_id = require_string(rec, "home_coach_id");
    m.away_coach_id = require_string(rec, "away_coach_id");
    if (m.home_team_id == m.away_team_id) {
        throw MalformedRecord("home_team_id equals away_team_id");
    }
    return m;
}

void put_optional(ordered_json& rec, const char* field, const std::optional<double>& v) {
    if (v) rec[field] = *v;
    else rec[field] = nullptr;
}

}  // namespace

const char* to_string(EventType t) { return kEventTypeNames[static_cast<int>(t)]; }

EventType event_type_from_string(const std::string& s) {
    for (int i = 0; i < 9; ++i) {
        if (s == kEventTypeNames[i]) return static_cast<EventType>(i);
    }
    throw MalformedRecord("unknown event_type: " + s);
}

EventStore::EventStore(std::vector<MatchMeta> matches,
                       std::map<std::string, std::vector<Event>> events)
    : matches_(std::move(matches)), events_(std::move(events)) {
    std::sort(matches_.begin(), matches_.end(),
              [](const MatchMeta& a, const MatchMeta& b) { return a.match_id < b.match_id; });
    for (auto& [id, evs] : events_) {
        std::stable_sort(evs.begin(), evs.end(), event_order_lt);
    }
    validate();
}

const MatchMeta& EventStore::match(const std::string& match_id) const {
    auto it = std::lower_bound(
        matches_.begin(), matches_.end(), match_id,
        [](const MatchMeta& m, const std::string& id) { return m.match_id < id; });
    if (it == matches_.end() || it->match_id != match_id) {
        throw UnknownMatch("no such match: " + match_id);
    }
    return *it;
}

bool EventStore::has_match(const std::string& match_id) const {
    auto it = std::lower_bound(
        matches_.begin(), matches_.end(), match_id,
        [](const MatchMeta& m, const std::string& id) { return m.match_id < id; });
    return it != matches_.end() && it->match_id == match_id;
}

const std::vector<Event>& EventStore::events(const std::string& match_id) const {
    static const std::vector<Event> empty;
    if (!has_match(match_id)) throw UnknownMatch("no such match: " + match_id);
    auto it = events_.find(match_id);
    return it == events_.end() ? empty : it->second;
}

long EventStore::total_events() const {
    long n = 0;
    for (const auto& [id, evs] : events_) n += static_cast<long>(evs.size());
    return n;
}

void EventStore::validate() const {
    for (std::size_t i = 0; i + 1 < matches_.size(); ++i) {
        if (matches_[i].match_id == matches_[i + 1].match_id) {
            throw MalformedRecord("duplicate match_id: " + matches_[i].match_id);
        }
    }
    for (const auto& m : matches_) {
        if (m.home_team_id == m.away_team_id) {
            throw MalformedRecord("home_team_id equals away_team_id in " + m.match_id);
        }
    }
    for (const auto& [match_id, evs] : events_) {
        if (!has_match(match_id)) throw UnknownMatch("events reference absent match: " + match_id);
        const MatchMeta& meta = match(match_id);
        const Event* prev = nullptr;
        for (const Event& e : evs) {
            if (e.match_id != match_id) throw MalformedRecord("event match_id mismatch");
            if (e.period != 1 && e.period != 2) throw MalformedRecord("period out of range");
            if (!(e.t >= 0.0)) throw MalformedRecord("negative t");
            if (!(e.x >= 0.0 && e.x <= 100.0 && e.y >= 0.0 && e.y <= 100.0)) {
                throw MalformedRecord("coordinates out of range");
            }
            if (e.end_x && !(*e.end_x >= 0.0 && *e.end_x <= 100.0)) {
                throw MalformedRecord("end_x out of range");
            }
            if (e.end_y && !(*e.end_y >= 0.0 && *e.end_y <= 100.0)) {
                throw MalformedRecord("end_y out of range");
            }
            if ((e.type == EventType::Pass || e.type == EventType::Shot) &&
                (!e.end_x || !e.end_y)) {
                throw MalformedRecord("pass/shot without end position");
            }
            if (e.xg && !(*e.xg >= 0.0 && *e.xg <= 1.0)) throw MalformedRecord("xg out of range");
            if (e.team_id != meta.home_team_id && e.team_id != meta.away_team_id) {
                throw UnknownTeam("event team " + e.team_id + " not in match " + match_id);
            }
            if (prev && event_order_lt(e, *prev)) {
                throw MalformedRecord("events not sorted in " + match_id);
            }
            prev = &e;
        }
    }
}

EventStore parse_store(std::istream& matches_in, std::istream& events_in, bool strict,
                       ParseReport* report) {
    ParseReport local;
    std::vector<MatchMeta> matches;
    std::string line;
    while (std::getline(matches_in, line)) {
        if (line.empty()) continue;
        try {
            matches.push_back(parse_match_record(line));
            ++local.matches_parsed;
        } catch (const MalformedRecord&) {
            if (strict) throw;
            ++local.malformed;
        }
    }
    std::sort(matches.begin(), matches.end(),
              [](const MatchMeta& a, const MatchMeta& b) { return a.match_id < b.match_id; });

    auto find_match = [&](const std::string& id) -> const MatchMeta* {
        auto it = std::lower_bound(
            matches.begin(), matches.end(), id,
            [](const MatchMeta& m, const std::string& mid) { return m.match_id < mid; });
        return (it != matches.end() && it->match_id == id) ? &*it : nullptr;
    };

    std::map<std::string, std::vector<Event>> events;
    long fallback_seq = 0;
    while (std::getline(events_in, line)) {
        if (line.empty()) continue;
        try {
            Event e = parse_event_record(line, fallback_seq);
            const MatchMeta* meta = find_match(e.match_id);
            if (!meta) throw UnknownMatch("event references absent match: " + e.match_id);
            if (e.team_id != meta->home_team_id && e.team_id != meta->away_team_id) {
                throw UnknownTeam("team " + e.team_id + " not in match " + e.match_id);
            }
            events[e.match_id].push_back(std::move(e));
            ++local.events_parsed;
        } catch (const UnknownMatch&) {
            if (strict) throw;
            ++local.unknown_match;
        } catch (const UnknownTeam&) {
            if (strict) throw;
            ++local.unknown_team;
        } catch (const MalformedRecord&) {
            if (strict) throw;
            ++local.malformed;
        }
        ++fallback_seq;
    }
    if (report) *report = local;
    return EventStore(std::move(matches), std::move(events));
}

std::string serialize_event(const Event& e) {
    ordered_json rec;
    rec["match_id"] = e.match_id;
    rec["period"] = e.period;
    rec["t"] = e.t;
    rec["team_id"] = e.team_id;
    rec["event_type"] = to_string(e.type);
    rec["x"] = e.x;
    rec["y"] = e.y;
    put_optional(rec, "end_x", e.end_x);
    put_optional(rec, "end_y", e.end_y);
    rec["tags"] = e.tags;  // std::set keeps tag order stable
    if (e.xg) rec["xg"] = *e.xg;
    else rec["xg"] = nullptr;
    rec["seq"] = e.seq;
    return rec.dump();
}

std::string serialize_match(const MatchMeta& m) {
    ordered_json rec;
    rec["match_id"] = m.match_id;
    rec["season"] = m.season;
    rec["home_team_id"] = m.home_team_id;
    rec["away_team_id"] = m.away_team_id;
    rec["home_coach_id"] = m.home_coach_id;
    rec["away_coach_id"] = m.away_coach_id;
    return rec.dump();
}

void serialize_store(const EventStore& store, std::ostream& matches_out,
                     std::ostream& events_out) {
    for (const MatchMeta& m : store.matches()) {
        matches_out << serialize_match(m) << '\n';
    }
    for (const MatchMeta& m : store.matches()) {
        for (const Event& e : store.events(m.match_id)) {
            events_out << serialize_event(e) << '\n';
        }
    }
}

std::vector<GoalEntry> goal_timeline(const EventStore& store, const std::string& match_id) {
    const MatchMeta& meta = store.match(match_id);
    std::vector<GoalEntry> out;
    for (const Event& e : store.events(match_id)) {
        if (e.tags.count("own_goal")) {
            const std::string& credited =
                e.team_id == meta.home_team_id ? meta.away_team_id : meta.home_team_id;
            out.push_back({e.period, e.t, credited});
        } else if (e.tags.count("goal")) {
            out.push_back({e.period, e.t, e.team_id});
        }
    }
    return out;
}

}  // namespace coachstyle::model
