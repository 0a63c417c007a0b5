#pragma once

// Independent reference implementations used by tests only. They stay naive
// on purpose: exhaustive enumeration and finite differences, not the
// algorithms under test.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "coachstyle/nn.hpp"
#include "coachstyle/parallel.hpp"

namespace oracle {

using coachstyle::par::Vec7;

inline double partition_sse(std::span<const Vec7> points, std::span<const int> assign, int k) {
    std::vector<Vec7> sums(static_cast<std::size_t>(k), Vec7{});
    std::vector<long> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto j = static_cast<std::size_t>(assign[i]);
        for (std::size_t d = 0; d < 7; ++d) sums[j][d] += points[i][d];
        ++counts[j];
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto j = static_cast<std::size_t>(assign[i]);
        for (std::size_t d = 0; d < 7; ++d) {
            const double mean = sums[j][d] / static_cast<double>(counts[j]);
            const double diff = points[i][d] - mean;
            sse += diff * diff;
        }
    }
    return sse;
}

// Exhaustive minimum SSE over every assignment of points to at most k groups.
// Feasible for n <= 12, k <= 3.
inline double best_partition_sse(std::span<const Vec7> points, int k) {
    const std::size_t n = points.size();
    std::vector<int> assign(n, 0);
    double best = std::numeric_limits<double>::infinity();
    const auto total = static_cast<unsigned long long>(std::pow(k, static_cast<double>(n)) + 0.5);
    for (unsigned long long code = 0; code < total; ++code) {
        unsigned long long c = code;
        bool used[8] = {};
        for (std::size_t i = 0; i < n; ++i) {
            assign[i] = static_cast<int>(c % static_cast<unsigned long long>(k));
            used[assign[i]] = true;
            c /= static_cast<unsigned long long>(k);
        }
        // skip assignments leaving a group empty unless k covers them anyway;
        // empty groups never lower the SSE, so requiring full use is safe
        // only when n >= k. With n >= k the optimum uses all k groups or ties.
        bool all_used = true;
        for (int j = 0; j < k; ++j) all_used = all_used && used[j];
        if (!all_used && n >= static_cast<std::size_t>(k)) continue;
        best = std::min(best, partition_sse(points, assign, k));
    }
    return best;
}

struct GradCheckResult {
    double max_rel_err = 0.0;
    long params_checked = 0;
};

// Central finite differences of the autoencoding MSE against the analytic
// gradients, across every weight and bias.
inline GradCheckResult gradient_check(coachstyle::nn::AutoencoderModel model,
                                      const std::vector<double>& x, double h = 1e-5) {
    namespace nn = coachstyle::nn;
    const auto loss_of = [&](const nn::AutoencoderModel& m) {
        return nn::mse(nn::forward(m, x).reconstruction, x);
    };
    const nn::ForwardResult fw = nn::forward(model, x);
    const nn::Gradients grads = nn::backward(model, x, fw.cache);

    GradCheckResult result;
    auto check_param = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double lp = loss_of(model);
        param = saved - h;
        const double lm = loss_of(model);
        param = saved;
        const double numeric = (lp - lm) / (2.0 * h);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        result.max_rel_err = std::max(result.max_rel_err, std::abs(analytic - numeric) / denom);
        ++result.params_checked;
    };
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        for (std::size_t i = 0; i < model.weights[l].size(); ++i) {
            check_param(model.weights[l][i], grads.weights[l][i]);
        }
        for (std::size_t i = 0; i < model.biases[l].size(); ++i) {
            check_param(model.biases[l][i], grads.biases[l][i]);
        }
    }
    return result;
}

}  // namespace oracle
