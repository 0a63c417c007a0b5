#include "coachstyle/parallel.hpp"

namespace coachstyle::par {

int nearest_centroid(const Vec7& p, std::span<const Vec7> centroids) {
    int best = 0;
    double best_d = dist_sq(p, centroids[0]);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
        const double d = dist_sq(p, centroids[j]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(j);
        }
    }
    return best;
}

void assign_nearest(std::span<const Vec7> points, std::span<const Vec7> centroids,
                    std::span<int> out_assign) {
    const long long n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        out_assign[static_cast<std::size_t>(i)] =
            nearest_centroid(points[static_cast<std::size_t>(i)], centroids);
    }
}

void accumulate_clusters(std::span<const Vec7> points, std::span<const int> assign, int k,
                         std::vector<Vec7>& out_sums, std::vector<long>& out_counts) {
    const std::size_t n = points.size();
    const std::size_t nchunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<std::vector<Vec7>> chunk_sums(nchunks);
    std::vector<std::vector<long>> chunk_counts(nchunks);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t ci = static_cast<std::size_t>(c);
        auto& sums = chunk_sums[ci];
        auto& counts = chunk_counts[ci];
        sums.assign(static_cast<std::size_t>(k), Vec7{});
        counts.assign(static_cast<std::size_t>(k), 0);
        const std::size_t begin = ci * kChunkSize;
        const std::size_t end = begin + kChunkSize < n ? begin + kChunkSize : n;
        for (std::size_t i = begin; i < end; ++i) {
            const auto j = static_cast<std::size_t>(assign[i]);
            for (std::size_t d = 0; d < 7; ++d) sums[j][d] += points[i][d];
            ++counts[j];
        }
    }
    out_sums.assign(static_cast<std::size_t>(k), Vec7{});
    out_counts.assign(static_cast<std::size_t>(k), 0);
    for (std::size_t ci = 0; ci < nchunks; ++ci) {
        for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
            for (std::size_t d = 0; d < 7; ++d) out_sums[j][d] += chunk_sums[ci][j][d];
            out_counts[j] += chunk_counts[ci][j];
        }
    }
}

double total_sse(std::span<const Vec7> points, std::span<const Vec7> centroids,
                 std::span<const int> assign) {
    return chunked_sum(points.size(), [&](std::size_t i) {
        return dist_sq(points[i], centroids[static_cast<std::size_t>(assign[i])]);
    });
}

void update_min_dist_sq(std::span<const Vec7> points, const Vec7& new_centroid,
                        std::span<double> dist_sq_table) {
    const long long n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double d = dist_sq(points[idx], new_centroid);
        if (d < dist_sq_table[idx]) dist_sq_table[idx] = d;
    }
}

void assign_nearest_serial(std::span<const Vec7> points, std::span<const Vec7> centroids,
                           std::span<int> out_assign) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        out_assign[i] = nearest_centroid(points[i], centroids);
    }
}

void accumulate_clusters_serial(std::span<const Vec7> points, std::span<const int> assign, int k,
                                std::vector<Vec7>& out_sums, std::vector<long>& out_counts) {
    out_sums.assign(static_cast<std::size_t>(k), Vec7{});
    out_counts.assign(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto j = static_cast<std::size_t>(assign[i]);
        for (std::size_t d = 0; d < 7; ++d) out_sums[j][d] += points[i][d];
        ++out_counts[j];
    }
}

double total_sse_serial(std::span<const Vec7> points, std::span<const Vec7> centroids,
                        std::span<const int> assign) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total += dist_sq(points[i], centroids[static_cast<std::size_t>(assign[i])]);
    }
    return total;
}

}  // namespace coachstyle::par
