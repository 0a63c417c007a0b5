#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "coachstyle/model.hpp"
#include "coachstyle/possession.hpp"

namespace coachstyle::profiles {

inline constexpr int kProfileRows = 7;
inline constexpr const char* kRowNames[kProfileRows] = {
    "avg_ratio",     "suffered_avg_ratio", "avg_xg",       "suffered_avg_xg",
    "ratio_winning", "ratio_drawing",      "ratio_losing",
};
// Rows holding per-type possession fractions; each sums to 1.
inline constexpr bool kRowIsRatio[kProfileRows] = {true, true, false, false, true, true, true};

struct XgModelParams {
    double beta0 = -0.3;
    double beta_dist = -0.09;   // per meter to goal center
    double beta_angle = 1.8;    // per radian of goal-mouth visibility angle
};

// Shot conversion probability. An explicit xg field passes through untouched;
// otherwise a logistic model on goal distance and visibility angle applies.
double xg(const model::Event& shot, const XgModelParams& params = {});

enum class ScoreContext { Winning, Drawing, Losing };
const char* to_string(ScoreContext c);

// Goal difference for `team` counting goals strictly before (period, t).
ScoreContext context_at(std::span<const model::GoalEntry> timeline, const std::string& team,
                        int period, double t);

struct CoachProfile {
    std::string coach_id, team_id;
    int n_matches = 0;
    // matrix[row][type], rows in kRowNames order, k columns.
    std::array<std::vector<double>, kProfileRows> matrix;

    int k() const { return static_cast<int>(matrix[0].size()); }
};

struct TypedPossession {
    possession::Possession poss;
    int cluster = 0;
};

// Everything build_profile needs from one match.
struct MatchRecord {
    model::MatchMeta meta;
    std::vector<TypedPossession> own;
    std::vector<TypedPossession> opponent;
    std::vector<model::GoalEntry> timeline;
};

CoachProfile build_profile(const std::string& coach_id, const std::string& team_id,
                           std::span<const MatchRecord> matches, int k,
                           const XgModelParams& xg_params = {});

// Min-max bounds for the two xG rows, shared across the corpus.
struct ProfileScaling {
    double avg_xg_min = 0.0, avg_xg_max = 0.0;
    double suffered_xg_min = 0.0, suffered_xg_max = 0.0;
};

struct FlattenResult {
    std::vector<std::vector<double>> vectors;  // one row-major 7k-vector per profile
    ProfileScaling scaling;
};

// Ratio rows pass through; xG rows are min-max scaled with the corpus-wide
// bounds of their row type. Every output entry lies in [0,1].
FlattenResult flatten_and_scale(std::span<const CoachProfile> profiles);
std::vector<double> flatten_one(const CoachProfile& profile, const ProfileScaling& scaling);

void save_scaling(const ProfileScaling& s, const std::filesystem::path& path);
ProfileScaling load_scaling(const std::filesystem::path& path);

}  // namespace coachstyle::profiles
