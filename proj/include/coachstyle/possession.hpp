#pragma once

#include <span>
#include <string>
#include <vector>

#include "coachstyle/model.hpp"

namespace coachstyle::possession {

// Maximal same-team run of events within one period; interruptions belong to
// no possession.
struct Possession {
    std::string match_id;
    std::string team_id;
    int period = 1;
    std::vector<model::Event> events;  // non-empty, time-ordered
    double start_t = 0.0, end_t = 0.0;
};

// Splits one match's (period, t, seq)-sorted events into possession phases.
// A run ends at an opponent event, an interruption, or the period boundary.
std::vector<Possession> segment(std::span<const model::Event> match_events);

// Keeps possessions with >= min_events events and duration strictly above
// min_duration; input order preserved.
std::vector<Possession> filter_valid(std::vector<Possession> possessions, int min_events,
                                     double min_duration);

}  // namespace coachstyle::possession
