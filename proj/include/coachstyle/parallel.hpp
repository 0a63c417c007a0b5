#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace coachstyle::par {

using Vec7 = std::array<double, 7>;

// Reductions below accumulate per fixed-size chunk and combine the chunk
// partials in index order, so the result is bit-identical for any thread
// count. Chunk size is a constant, not a function of omp_get_num_threads().
inline constexpr std::size_t kChunkSize = 2048;

inline double dist_sq(const Vec7& a, const Vec7& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < 7; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

// Index of the nearest centroid; ties broken by lowest index.
int nearest_centroid(const Vec7& p, std::span<const Vec7> centroids);

// OpenMP kernels (deterministic for any thread count).
void assign_nearest(std::span<const Vec7> points, std::span<const Vec7> centroids,
                    std::span<int> out_assign);
void accumulate_clusters(std::span<const Vec7> points, std::span<const int> assign, int k,
                         std::vector<Vec7>& out_sums, std::vector<long>& out_counts);
double total_sse(std::span<const Vec7> points, std::span<const Vec7> centroids,
                 std::span<const int> assign);
// min-distance-squared table update used by seeding; elementwise, parallel.
void update_min_dist_sq(std::span<const Vec7> points, const Vec7& new_centroid,
                        std::span<double> dist_sq_table);

// Serial reference implementations. Straightforward left-to-right loops,
// kept for testing the kernels above and for the benchmark target.
void assign_nearest_serial(std::span<const Vec7> points, std::span<const Vec7> centroids,
                           std::span<int> out_assign);
void accumulate_clusters_serial(std::span<const Vec7> points, std::span<const int> assign, int k,
                                std::vector<Vec7>& out_sums, std::vector<long>& out_counts);
double total_sse_serial(std::span<const Vec7> points, std::span<const Vec7> centroids,
                        std::span<const int> assign);

// Deterministic chunked sum over f(0..n-1) for corpus statistics.
template <class F>
double chunked_sum(std::size_t n, F&& f) {
    const std::size_t nchunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunkSize;
        const std::size_t end = begin + kChunkSize < n ? begin + kChunkSize : n;
        double local = 0.0;
        for (std::size_t i = begin; i < end; ++i) local += f(i);
        partial[static_cast<std::size_t>(c)] = local;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

}  // namespace coachstyle::par
