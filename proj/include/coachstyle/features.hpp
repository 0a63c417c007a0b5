#pragma once

#include <cmath>
#include <filesystem>
#include <span>
#include <vector>

#include "coachstyle/parallel.hpp"
#include "coachstyle/possession.hpp"

namespace coachstyle::features {

using par::Vec7;

// Meters per coordinate percent on a 105 m x 68 m pitch.
inline constexpr double kMetersPerPctX = 1.05;
inline constexpr double kMetersPerPctY = 0.68;

inline double meters(double dx_pct, double dy_pct) {
    const double mx = dx_pct * kMetersPerPctX;
    const double my = dy_pct * kMetersPerPctY;
    return std::sqrt(mx * mx + my * my);
}

// The seven per-possession features, in their fixed order.
struct FeatureVector {
    double duration = 0.0;         // s
    double avg_pass_length = 0.0;  // m, 0 when the possession has no passes
    double avg_y = 0.0;            // percent, mean of event start y
    double start_x = 0.0;          // percent, first event x
    double speed_step_1 = 0.0;     // m/s over the first third of the possession
    double speed_step_2 = 0.0;
    double speed_step_3 = 0.0;

    Vec7 as_array() const {
        return {duration, avg_pass_length, avg_y, start_x, speed_step_1, speed_step_2,
                speed_step_3};
    }
    static const char* name(std::size_t i);
};

struct ScalerParams {
    Vec7 mean{};
    Vec7 stddev{};  // population standard deviation
    long corpus_size = 0;
};

// Requires >= 2 events and end_t > start_t. The ball trajectory is the
// piecewise-linear path through event start positions; each speed step is the
// path length covered in that third of the possession divided by duration/3.
FeatureVector compute_features(const possession::Possession& p);

// Parallel over possessions; output order matches input order.
std::vector<FeatureVector> compute_features_batch(std::span<const possession::Possession> ps);

// Per-feature mean and population std. Chunked left-to-right summation, so
// the result is bit-identical for any worker count.
ScalerParams fit_scaler(std::span<const FeatureVector> corpus);

// z_i = (v_i - mean_i) / std_i, with z_i = 0 where std_i = 0.
Vec7 apply_scaler(const FeatureVector& v, const ScalerParams& s);

void save_scaler(const ScalerParams& s, const std::filesystem::path& path);
ScalerParams load_scaler(const std::filesystem::path& path);

}  // namespace coachstyle::features
