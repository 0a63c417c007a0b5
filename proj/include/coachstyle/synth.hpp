#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coachstyle/model.hpp"

namespace coachstyle::synth {

struct ParamRange {
    double lo = 0.0, hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
};

// Style blueprint for one kind of possession. Target feature values are
// sampled from these ranges first, then an event sequence realizing them is
// emitted, so the extracted features carry the intended style exactly.
struct PossessionTemplate {
    std::string name;
    ParamRange duration_s;
    ParamRange start_x_pct;
    ParamRange y_pct;
    ParamRange pass_length_m;
    ParamRange speed1_ms, speed2_ms, speed3_ms;
};

struct Archetype {
    std::string name;
    std::vector<PossessionTemplate> templates;
    std::vector<double> mixture;        // over templates, sums to 1
    std::vector<double> winning_delta;  // mixture shift while winning
    std::vector<double> losing_delta;   // mixture shift while losing
    double shot_rate = 0.3;             // per possession
    ParamRange shot_xg{0.05, 0.3};
};

struct GeneratorConfig {
    std::vector<Archetype> archetypes;
    int coaches_per_archetype = 8;
    int matches_per_coach = 30;
    int possessions_per_match = 20;  // total per match, both teams alternating
    std::uint64_t seed = 1;
};

using GroundTruth = std::map<std::string, std::string>;  // coach_id -> archetype name

// Three style presets far apart in feature space.
std::vector<Archetype> default_archetypes();

// Every coach's possessions follow their archetype in home and away matches
// alike; opponents are drawn from other archetypes. Deterministic in the
// seed for any worker count.
std::pair<model::EventStore, GroundTruth> generate(const GeneratorConfig& config);

std::string ground_truth_csv(const GroundTruth& truth);

}  // namespace coachstyle::synth
