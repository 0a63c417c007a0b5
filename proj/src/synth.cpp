#include "coachstyle/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "coachstyle/features.hpp"
#include "coachstyle/util.hpp"

namespace coachstyle::synth {

namespace {

using model::Event;
using model::EventType;
using model::MatchMeta;

struct CoachRef {
    std::string coach_id, team_id;
    std::size_t archetype;
};

std::string padded_id(const char* prefix, std::size_t n, int width) {
    std::string digits = std::to_string(n);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return prefix + digits;
}

double sample(std::mt19937_64& rng, const ParamRange& r) {
    return util::uniform_range(rng, r.lo, r.hi);
}

void validate_range(const ParamRange& r, double lo, double hi, const std::string& what) {
    if (!(r.lo <= r.hi) || r.lo < lo || r.hi > hi) {
        throw InvalidConfig("range out of bounds for " + what);
    }
}

void validate(const GeneratorConfig& cfg) {
    if (cfg.archetypes.size() < 2) {
        throw InvalidConfig("need >= 2 archetypes so opponents can differ");
    }
    if (cfg.coaches_per_archetype < 1 || cfg.matches_per_coach < 1 ||
        cfg.possessions_per_match < 1) {
        throw InvalidConfig("all counts must be >= 1");
    }
    for (const auto& a : cfg.archetypes) {
        if (a.templates.empty() || a.templates.size() != a.mixture.size()) {
            throw InvalidConfig("archetype " + a.name + ": mixture/template size mismatch");
        }
        double total = 0.0;
        for (double w : a.mixture) {
            if (w < 0.0) throw InvalidConfig("negative mixture weight in " + a.name);
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw InvalidConfig("mixture of " + a.name + " does not sum to 1");
        }
        if (!a.winning_delta.empty() && a.winning_delta.size() != a.mixture.size()) {
            throw InvalidConfig("winning_delta size mismatch in " + a.name);
        }
        if (!a.losing_delta.empty() && a.losing_delta.size() != a.mixture.size()) {
            throw InvalidConfig("losing_delta size mismatch in " + a.name);
        }
        if (a.shot_rate < 0.0 || a.shot_rate > 1.0) {
            throw InvalidConfig("shot_rate out of [0,1] in " + a.name);
        }
        validate_range(a.shot_xg, 0.0, 1.0, a.name + " shot_xg");
        for (const auto& t : a.templates) {
            validate_range(t.duration_s, 0.5, 120.0, t.name + " duration");
            validate_range(t.start_x_pct, 1.0, 99.0, t.name + " start_x");
            validate_range(t.y_pct, 1.0, 99.0, t.name + " y");
            validate_range(t.pass_length_m, 0.5, 45.0, t.name + " pass_length");
            for (const ParamRange* s : {&t.speed1_ms, &t.speed2_ms, &t.speed3_ms}) {
                validate_range(*s, 0.0, 8.0, t.name + " speed");
                // One slot of travel must fit the pitch width with one bounce.
                if (s->hi * t.duration_s.hi / 3.0 / features::kMetersPerPctX > 49.0) {
                    throw InvalidConfig("slot displacement too large in " + t.name);
                }
            }
        }
    }
}

std::size_t sample_categorical(std::mt19937_64& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double r = util::uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (acc > r) return i;
    }
    return weights.size() - 1;
}

std::vector<double> shifted_mixture(const Archetype& a, int goal_diff) {
    std::vector<double> mix = a.mixture;
    const std::vector<double>* delta = nullptr;
    if (goal_diff > 0 && !a.winning_delta.empty()) delta = &a.winning_delta;
    if (goal_diff < 0 && !a.losing_delta.empty()) delta = &a.losing_delta;
    if (delta) {
        double total = 0.0;
        for (std::size_t i = 0; i < mix.size(); ++i) {
            mix[i] = std::max(0.0, mix[i] + (*delta)[i]);
            total += mix[i];
        }
        if (total <= 0.0) mix = a.mixture;
    }
    return mix;
}

// End position of a pass of the given length: aim at the farthest corner so
// the target always stays on the pitch.
std::pair<double, double> pass_end(double x_pct, double y_pct, double length_m) {
    const double xm = x_pct * features::kMetersPerPctX;
    const double ym = y_pct * features::kMetersPerPctY;
    double best_d = -1.0, ux = 1.0, uy = 0.0;
    for (double cx : {0.0, 100.0 * features::kMetersPerPctX}) {
        for (double cy : {0.0, 100.0 * features::kMetersPerPctY}) {
            const double dx = cx - xm, dy = cy - ym;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d > best_d) {
                best_d = d;
                ux = dx / d;
                uy = dy / d;
            }
        }
    }
    const double ex = (xm + length_m * ux) / features::kMetersPerPctX;
    const double ey = (ym + length_m * uy) / features::kMetersPerPctY;
    return {std::clamp(ex, 0.0, 100.0), std::clamp(ey, 0.0, 100.0)};
}

struct MatchOutcome {
    MatchMeta meta;
    std::vector<Event> events;
};

// Emits one possession's events starting at t0. Slot boundaries are event
// timestamps and the walk keeps a constant step per slot, so the extracted
// per-slot speeds equal the sampled ones.
void emit_possession(std::vector<Event>& events, std::mt19937_64& rng, const std::string& match_id,
                     const std::string& team_id, int period, double t0,
                     const PossessionTemplate& tpl, double shot_rate, const ParamRange& shot_xg,
                     long& seq, double& out_end_t, bool& out_goal) {
    const double duration = sample(rng, tpl.duration_s);
    const double start_x = sample(rng, tpl.start_x_pct);
    const double y = sample(rng, tpl.y_pct);
    const double speeds[3] = {sample(rng, tpl.speed1_ms), sample(rng, tpl.speed2_ms),
                              sample(rng, tpl.speed3_ms)};
    const int substeps = util::uniform01(rng) < 0.5 ? 1 : 2;
    const bool with_shot = util::uniform01(rng) < shot_rate;

    struct Node {
        double t, x;
    };
    std::vector<Node> nodes;
    double x = start_x;
    double dir = 1.0;
    nodes.push_back({t0, x});
    for (int slot = 0; slot < 3; ++slot) {
        const double step_m = speeds[slot] * (duration / 3.0) / substeps;
        const double step_pct = step_m / features::kMetersPerPctX;
        for (int sub = 0; sub < substeps; ++sub) {
            if (x + dir * step_pct > 99.0 || x + dir * step_pct < 1.0) dir = -dir;
            x = std::clamp(x + dir * step_pct, 0.0, 100.0);
            const bool last = slot == 2 && sub == substeps - 1;
            const double t =
                last ? t0 + duration
                     : t0 + (slot + static_cast<double>(sub + 1) / substeps) * duration / 3.0;
            nodes.push_back({t, x});
        }
    }

    out_goal = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Event e;
        e.match_id = match_id;
        e.period = period;
        e.t = nodes[i].t;
        e.team_id = team_id;
        e.x = nodes[i].x;
        e.y = y;
        e.seq = seq++;

        const bool is_last = i + 1 == nodes.size();
        if (is_last && with_shot) {
            e.type = EventType::Shot;
            e.end_x = 100.0;
            e.end_y = util::uniform_range(rng, 46.0, 54.0);
            e.xg = sample(rng, shot_xg);
            if (util::uniform01(rng) < *e.xg) {
                e.tags.insert("goal");
                out_goal = true;
            }
        } else {
            const double roll = util::uniform01(rng);
            if (i == 0 && roll > 0.8) {
                e.type = roll > 0.9 ? EventType::ThrowIn : EventType::FreeKick;
            } else if (i > 0 && roll > 0.85) {
                e.type = roll > 0.93 ? EventType::Duel : EventType::Touch;
            } else {
                e.type = EventType::Pass;
            }
            if (e.type == EventType::Pass || e.type == EventType::ThrowIn ||
                e.type == EventType::FreeKick) {
                const auto [ex, ey] = pass_end(e.x, e.y, sample(rng, tpl.pass_length_m));
                e.end_x = ex;
                e.end_y = ey;
                if (e.type == EventType::Pass && util::uniform01(rng) < 0.8) {
                    e.tags.insert("accurate");
                }
            }
        }
        events.push_back(std::move(e));
    }
    out_end_t = t0 + duration;
}

MatchOutcome generate_match(const GeneratorConfig& cfg, const std::vector<CoachRef>& coaches,
                            std::size_t home_coach, std::size_t match_index) {
    std::mt19937_64 rng(util::mix_seed(cfg.seed, match_index));

    // Opponent from a different archetype.
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < coaches.size(); ++i) {
        if (coaches[i].archetype != coaches[home_coach].archetype) candidates.push_back(i);
    }
    const std::size_t away_coach = candidates[util::uniform_index(rng, candidates.size())];

    MatchOutcome out;
    out.meta.match_id = padded_id("M", match_index, 5);
    out.meta.season = "S1";
    out.meta.home_team_id = coaches[home_coach].team_id;
    out.meta.away_team_id = coaches[away_coach].team_id;
    out.meta.home_coach_id = coaches[home_coach].coach_id;
    out.meta.away_coach_id = coaches[away_coach].coach_id;

    int home_goals = 0, away_goals = 0;
    long seq = 0;
    const int total = cfg.possessions_per_match;
    const int first_half = (total + 1) / 2;
    double cursor = util::uniform_range(rng, 0.0, 4.0);
    for (int p = 0; p < total; ++p) {
        const int period = p < first_half ? 1 : 2;
        if (p == first_half) cursor = util::uniform_range(rng, 0.0, 4.0);

        const bool home_turn = p % 2 == 0;
        const CoachRef& coach = coaches[home_turn ? home_coach : away_coach];
        const Archetype& arche = cfg.archetypes[coach.archetype];
        const int diff = home_turn ? home_goals - away_goals : away_goals - home_goals;
        const auto mix = shifted_mixture(arche, diff);
        const PossessionTemplate& tpl = arche.templates[sample_categorical(rng, mix)];

        double end_t = cursor;
        bool goal = false;
        emit_possession(out.events, rng, out.meta.match_id, coach.team_id, period, cursor, tpl,
                        arche.shot_rate, arche.shot_xg, seq, end_t, goal);
        if (goal) (home_turn ? home_goals : away_goals) += 1;

        const double gap = util::uniform_range(rng, 2.0, 8.0);
        const bool last_of_period = p + 1 == total || p + 1 == first_half;
        if (!last_of_period) {
            Event stop;
            stop.match_id = out.meta.match_id;
            stop.period = period;
            stop.t = end_t + gap / 2.0;
            stop.team_id = out.meta.home_team_id;
            stop.type = EventType::Interruption;
            stop.x = 50.0;
            stop.y = 50.0;
            stop.seq = seq++;
            out.events.push_back(std::move(stop));
        }
        cursor = end_t + gap;
    }
    return out;
}

}  // namespace

std::vector<Archetype> default_archetypes() {
    std::vector<Archetype> out;

    Archetype patient;
    patient.name = "patient-possession";
    patient.templates = {
        {"patient-central", {14, 22}, {30, 50}, {38, 62}, {5, 11}, {0.7, 1.5}, {0.7, 1.5}, {0.7, 1.5}},
        {"patient-left", {12, 20}, {28, 48}, {18, 34}, {5, 11}, {0.7, 1.5}, {0.7, 1.6}, {0.8, 1.7}},
    };
    patient.mixture = {0.7, 0.3};
    patient.winning_delta = {0.1, -0.1};
    patient.losing_delta = {-0.15, 0.15};
    patient.shot_rate = 0.25;
    patient.shot_xg = {0.05, 0.2};
    out.push_back(std::move(patient));

    Archetype direct;
    direct.name = "direct-long-ball";
    direct.templates = {
        {"launch", {4, 8}, {10, 30}, {35, 65}, {25, 40}, {3.0, 5.0}, {2.0, 3.5}, {1.5, 3.0}},
        {"counter", {5, 9}, {15, 35}, {30, 70}, {18, 30}, {2.5, 4.5}, {2.5, 4.0}, {2.5, 4.0}},
    };
    direct.mixture = {0.6, 0.4};
    direct.winning_delta = {-0.1, 0.1};
    direct.losing_delta = {0.15, -0.15};
    direct.shot_rate = 0.3;
    direct.shot_xg = {0.08, 0.3};
    out.push_back(std::move(direct));

    Archetype press;
    press.name = "high-press-flank";
    press.templates = {
        {"press-right", {6, 11}, {60, 85}, {68, 85}, {8, 16}, {1.0, 2.0}, {2.0, 3.5}, {3.0, 5.0}},
        {"press-left", {6, 11}, {60, 85}, {15, 32}, {8, 16}, {1.0, 2.0}, {2.0, 3.5}, {3.0, 5.0}},
        {"press-central", {6, 11}, {62, 85}, {40, 60}, {8, 16}, {0.8, 1.6}, {2.0, 3.5}, {3.0, 5.0}},
    };
    press.mixture = {0.35, 0.35, 0.3};
    press.winning_delta = {-0.05, -0.05, 0.1};
    press.losing_delta = {0.1, 0.1, -0.2};
    press.shot_rate = 0.35;
    press.shot_xg = {0.1, 0.35};
    out.push_back(std::move(press));

    return out;
}

std::pair<model::EventStore, GroundTruth> generate(const GeneratorConfig& cfg) {
    validate(cfg);

    std::vector<CoachRef> coaches;
    GroundTruth truth;
    for (std::size_t a = 0; a < cfg.archetypes.size(); ++a) {
        for (int i = 0; i < cfg.coaches_per_archetype; ++i) {
            const std::size_t n = coaches.size();
            CoachRef ref{padded_id("C", n, 3), padded_id("T", n, 3), a};
            truth[ref.coach_id] = cfg.archetypes[a].name;
            coaches.push_back(std::move(ref));
        }
    }

    const std::size_t total_matches =
        coaches.size() * static_cast<std::size_t>(cfg.matches_per_coach);
    std::vector<MatchOutcome> outcomes(total_matches);
    // Per-match RNG streams derive from (seed, match index), so parallel
    // generation stays byte-identical to serial.
#pragma omp parallel for schedule(static)
    for (long long m = 0; m < static_cast<long long>(total_matches); ++m) {
        const auto mi = static_cast<std::size_t>(m);
        const std::size_t home = mi / static_cast<std::size_t>(cfg.matches_per_coach);
        outcomes[mi] = generate_match(cfg, coaches, home, mi);
    }

    std::vector<MatchMeta> metas;
    std::map<std::string, std::vector<Event>> events;
    for (auto& o : outcomes) {
        metas.push_back(o.meta);
        events[o.meta.match_id] = std::move(o.events);
    }
    return {model::EventStore(std::move(metas), std::move(events)), std::move(truth)};
}

std::string ground_truth_csv(const GroundTruth& truth) {
    std::string out = "coach_id,archetype\n";
    for (const auto& [coach, archetype] : truth) {
        out += util::csv_row({coach, archetype});
    }
    return out;
}

}  // namespace coachstyle::synth
