#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coachstyle/errors.hpp"

namespace coachstyle::model {

enum class EventType {
    Pass,
    Shot,
    Duel,
    FreeKick,
    ThrowIn,
    Goalkeeper,
    Clearance,
    Touch,
    Interruption,
};

const char* to_string(EventType t);
EventType event_type_from_string(const std::string& s);

// One timestamped on-ball action. Coordinates are percent of pitch with the
// acting team attacking toward x=100.
struct Event {
    std::string match_id;
    int period = 1;  // 1 or 2
    double t = 0.0;  // seconds since period start
    std::string team_id;
    EventType type = EventType::Pass;
    double x = 0.0, y = 0.0;
    std::optional<double> end_x, end_y;  // required for pass and shot
    std::set<std::string> tags;          // recognized: accurate, goal, own_goal
    std::optional<double> xg;
    long seq = 0;

    bool operator==(const Event&) const = default;
};

struct MatchMeta {
    std::string match_id;
    std::string season;
    std::string home_team_id, away_team_id;
    std::string home_coach_id, away_coach_id;

    bool operator==(const MatchMeta&) const = default;
};

struct ParseReport {
    long events_parsed = 0;
    long matches_parsed = 0;
    long malformed = 0;
    long unknown_match = 0;
    long unknown_team = 0;

    long skipped() const { return malformed + unknown_match + unknown_team; }
};

// Immutable after construction; matches iterate in match_id order and events
// in (period, t, seq) order.
class EventStore {
public:
    EventStore() = default;
    EventStore(std::vector<MatchMeta> matches, std::map<std::string, std::vector<Event>> events);

    const std::vector<MatchMeta>& matches() const { return matches_; }
    const MatchMeta& match(const std::string& match_id) const;
    bool has_match(const std::string& match_id) const;
    const std::vector<Event>& events(const std::string& match_id) const;

    long total_events() const;

    // Full-scan check of every stored invariant; throws on violation.
    void validate() const;

private:
    std::vector<MatchMeta> matches_;  // sorted by match_id
    std::map<std::string, std::vector<Event>> events_;
};

// Parses the two newline-delimited record streams (matches, then events).
// strict: first bad record aborts with the specific error. Otherwise bad
// records are skipped and tallied in the report.
EventStore parse_store(std::istream& matches_in, std::istream& events_in, bool strict,
                       ParseReport* report = nullptr);

// Canonical form: matches sorted by match_id, events by (period, t, seq),
// fixed field order, absent optionals as null. parse(serialize(s)) == s.
void serialize_store(const EventStore& store, std::ostream& matches_out,
                     std::ostream& events_out);

std::string serialize_event(const Event& e);
std::string serialize_match(const MatchMeta& m);

struct GoalEntry {
    int period;
    double t;
    std::string team_id;  // credited scoring team

    bool operator==(const GoalEntry&) const = default;
};

// Goals in time order; "goal" credits the acting team, "own_goal" the opponent.
std::vector<GoalEntry> goal_timeline(const EventStore& store, const std::string& match_id);

}  // namespace coachstyle::model
