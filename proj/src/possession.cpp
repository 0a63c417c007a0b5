#include "coachstyle/possession.hpp"

#include <tuple>

namespace coachstyle::possession {

std::vector<Possession> segment(std::span<const model::Event> match_events) {
    for (std::size_t i = 1; i < match_events.size(); ++i) {
        const auto& a = match_events[i - 1];
        const auto& b = match_events[i];
        if (std::tie(b.period, b.t, b.seq) < std::tie(a.period, a.t, a.seq)) {
            throw UnsortedInput("events not sorted by (period, t, seq)");
        }
    }

    std::vector<Possession> out;
    Possession current;
    auto flush = [&] {
        if (current.events.empty()) return;
        current.start_t = current.events.front().t;
        current.end_t = current.events.back().t;
        out.push_back(std::move(current));
        current = Possession{};
    };

    for (const model::Event& e : match_events) {
        if (e.type == model::EventType::Interruption) {
            flush();
            continue;
        }
        const bool continues = !current.events.empty() && current.team_id == e.team_id &&
                               current.period == e.period;
        if (!continues) flush();
        if (current.events.empty()) {
            current.match_id = e.match_id;
            current.team_id = e.team_id;
            current.period = e.period;
        }
        current.events.push_back(e);
    }
    flush();
    return out;
}

std::vector<Possession> filter_valid(std::vector<Possession> possessions, int min_events,
                                     double min_duration) {
    if (min_events < 1) throw Error("min_events must be >= 1");
    if (min_duration < 0.0) throw Error("min_duration must be >= 0");
    std::vector<Possession> out;
    out.reserve(possessions.size());
    for (auto& p : possessions) {
        if (static_cast<int>(p.events.size()) >= min_events &&
            p.end_t - p.start_t > min_duration) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace coachstyle::possession
