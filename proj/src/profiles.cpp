#include "coachstyle/profiles.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "coachstyle/features.hpp"
#include "coachstyle/util.hpp"

namespace coachstyle::profiles {

namespace {

constexpr double kGoalHalfWidthM = 3.66;  // 7.32 m goal mouth

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Per-match fraction of possessions per type; nullopt when the match has none.
std::vector<double> type_fractions(std::span<const TypedPossession> ps, int k) {
    std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
    for (const auto& tp : ps) counts[static_cast<std::size_t>(tp.cluster)] += 1.0;
    const double total = static_cast<double>(ps.size());
    for (auto& c : counts) c /= total;
    return counts;
}

double possession_shot_xg(const TypedPossession& tp, const XgModelParams& params) {
    double total = 0.0;
    for (const model::Event& e : tp.poss.events) {
        if (e.type == model::EventType::Shot) total += xg(e, params);
    }
    return total;
}

}  // namespace

const char* to_string(ScoreContext c) {
    switch (c) {
        case ScoreContext::Winning: return "winning";
        case ScoreContext::Drawing: return "drawing";
        case ScoreContext::Losing: return "losing";
    }
    return "drawing";
}

double xg(const model::Event& shot, const XgModelParams& params) {
    if (shot.type != model::EventType::Shot) throw NotAShot("xg requires a shot event");
    if (shot.xg) return *shot.xg;

    const double dx = (100.0 - shot.x) * features::kMetersPerPctX;  // to the goal line
    const double dy = (50.0 - shot.y) * features::kMetersPerPctY;   // lateral offset
    const double dist = std::sqrt(dx * dx + dy * dy);
    // Visibility angle of the goal mouth; equals 2*atan(3.66/d) for central
    // shots d meters off the goal line.
    const double angle =
        std::atan2(2.0 * kGoalHalfWidthM * dx, dx * dx + dy * dy - kGoalHalfWidthM * kGoalHalfWidthM);
    return sigmoid(params.beta0 + params.beta_dist * dist + params.beta_angle * angle);
}

ScoreContext context_at(std::span<const model::GoalEntry> timeline, const std::string& team,
                        int period, double t) {
    int diff = 0;
    for (const auto& g : timeline) {
        if (g.period > period || (g.period == period && g.t >= t)) break;
        diff += g.team_id == team ? 1 : -1;
    }
    if (diff > 0) return ScoreContext::Winning;
    if (diff < 0) return ScoreContext::Losing;
    return ScoreContext::Drawing;
}

CoachProfile build_profile(const std::string& coach_id, const std::string& team_id,
                           std::span<const MatchRecord> matches, int k,
                           const XgModelParams& xg_params) {
    if (matches.empty()) throw NoMatches("build_profile requires matches");
    for (const auto& m : matches) {
        for (const auto& tp : m.own) {
            if (tp.cluster < 0 || tp.cluster >= k) {
                throw ClusterCountMismatch("own possession cluster out of range");
            }
        }
        for (const auto& tp : m.opponent) {
            if (tp.cluster < 0 || tp.cluster >= k) {
                throw ClusterCountMismatch("opponent possession cluster out of range");
            }
        }
    }

    CoachProfile profile;
    profile.coach_id = coach_id;
    profile.team_id = team_id;
    profile.n_matches = static_cast<int>(matches.size());
    for (auto& row : profile.matrix) row.assign(static_cast<std::size_t>(k), 0.0);

    const double n_matches = static_cast<double>(matches.size());
    const auto ku = static_cast<std::size_t>(k);

    // avg_ratio / suffered_avg_ratio: mean of per-match type fractions.
    // Matches without possessions on a side contribute nothing to that side.
    long own_match_count = 0, opp_match_count = 0;
    for (const auto& m : matches) {
        if (!m.own.empty()) {
            const auto f = type_fractions(m.own, k);
            for (std::size_t c = 0; c < ku; ++c) profile.matrix[0][c] += f[c];
            ++own_match_count;
        }
        if (!m.opponent.empty()) {
            const auto f = type_fractions(m.opponent, k);
            for (std::size_t c = 0; c < ku; ++c) profile.matrix[1][c] += f[c];
            ++opp_match_count;
        }
    }
    if (own_match_count == 0) throw NoMatches("no own possessions in any match");
    for (std::size_t c = 0; c < ku; ++c) {
        profile.matrix[0][c] /= static_cast<double>(own_match_count);
    }
    if (opp_match_count > 0) {
        for (std::size_t c = 0; c < ku; ++c) {
            profile.matrix[1][c] /= static_cast<double>(opp_match_count);
        }
    } else {
        // No opponent evidence at all; mirror the own row so the ratio-row
        // sum invariant still holds.
        profile.matrix[1] = profile.matrix[0];
    }

    // avg_xg / suffered_avg_xg: per-match sums of shot xg by possession type,
    // averaged over all matches.
    for (const auto& m : matches) {
        for (const auto& tp : m.own) {
            profile.matrix[2][static_cast<std::size_t>(tp.cluster)] +=
                possession_shot_xg(tp, xg_params);
        }
        for (const auto& tp : m.opponent) {
            profile.matrix[3][static_cast<std::size_t>(tp.cluster)] +=
                possession_shot_xg(tp, xg_params);
        }
    }
    for (std::size_t c = 0; c < ku; ++c) {
        profile.matrix[2][c] /= n_matches;
        profile.matrix[3][c] /= n_matches;
    }

    // Context rows: own possessions pooled across matches by the score
    // context at possession start; an empty context copies avg_ratio.
    std::array<std::vector<double>, 3> ctx_counts;
    for (auto& v : ctx_counts) v.assign(ku, 0.0);
    std::array<double, 3> ctx_totals{};
    for (const auto& m : matches) {
        for (const auto& tp : m.own) {
            const ScoreContext ctx =
                context_at(m.timeline, team_id, tp.poss.period, tp.poss.start_t);
            const auto ci = static_cast<std::size_t>(ctx);
            ctx_counts[ci][static_cast<std::size_t>(tp.cluster)] += 1.0;
            ctx_totals[ci] += 1.0;
        }
    }
    for (std::size_t ci = 0; ci < 3; ++ci) {
        auto& row = profile.matrix[4 + ci];
        if (ctx_totals[ci] > 0.0) {
            for (std::size_t c = 0; c < ku; ++c) row[c] = ctx_counts[ci][c] / ctx_totals[ci];
        } else {
            row = profile.matrix[0];
        }
    }
    return profile;
}

FlattenResult flatten_and_scale(std::span<const CoachProfile> profiles) {
    if (profiles.empty()) throw EmptyCorpus("flatten_and_scale requires profiles");
    const int k = profiles.front().k();
    for (const auto& p : profiles) {
        if (p.k() != k) throw ClusterCountMismatch("profiles disagree on k");
    }

    FlattenResult out;
    auto row_bounds = [&](int row) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& p : profiles) {
            for (double v : p.matrix[static_cast<std::size_t>(row)]) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        return std::pair{lo, hi};
    };
    std::tie(out.scaling.avg_xg_min, out.scaling.avg_xg_max) = row_bounds(2);
    std::tie(out.scaling.suffered_xg_min, out.scaling.suffered_xg_max) = row_bounds(3);

    out.vectors.reserve(profiles.size());
    for (const auto& p : profiles) out.vectors.push_back(flatten_one(p, out.scaling));
    return out;
}

std::vector<double> flatten_one(const CoachProfile& profile, const ProfileScaling& scaling) {
    auto scale = [](double v, double lo, double hi) {
        return hi > lo ? (v - lo) / (hi - lo) : 0.0;
    };
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(kProfileRows * profile.k()));
    for (int row = 0; row < kProfileRows; ++row) {
        for (double v : profile.matrix[static_cast<std::size_t>(row)]) {
            if (row == 2) v = scale(v, scaling.avg_xg_min, scaling.avg_xg_max);
            else if (row == 3) v = scale(v, scaling.suffered_xg_min, scaling.suffered_xg_max);
            flat.push_back(v);
        }
    }
    return flat;
}

void save_scaling(const ProfileScaling& s, const std::filesystem::path& path) {
    nlohmann::ordered_json rec;
    rec["format"] = "coachstyle.profile_scaling";
    rec["version"] = 1;
    rec["avg_xg_min"] = s.avg_xg_min;
    rec["avg_xg_max"] = s.avg_xg_max;
    rec["suffered_xg_min"] = s.suffered_xg_min;
    rec["suffered_xg_max"] = s.suffered_xg_max;
    util::write_file(path, rec.dump(2) + "\n");
}

ProfileScaling load_scaling(const std::filesystem::path& path) {
    const auto rec = nlohmann::json::parse(util::read_file(path));
    if (rec.value("format", "") != "coachstyle.profile_scaling") {
        throw IoError("not a profile scaling file: " + path.string());
    }
    ProfileScaling s;
    s.avg_xg_min = rec.at("avg_xg_min").get<double>();
    s.avg_xg_max = rec.at("avg_xg_max").get<double>();
    s.suffered_xg_min = rec.at("suffered_xg_min").get<double>();
    s.suffered_xg_max = rec.at("suffered_xg_max").get<double>();
    return s;
}

}  // namespace coachstyle::profiles
