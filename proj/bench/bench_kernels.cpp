// Serial reference vs OpenMP kernels on k-means-sized workloads.
// Run: ./bench/bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "coachstyle/features.hpp"
#include "coachstyle/parallel.hpp"
#include "coachstyle/possession.hpp"
#include "coachstyle/util.hpp"

using namespace coachstyle;
using par::Vec7;

namespace {

std::vector<Vec7> random_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec7> pts(n);
    for (auto& p : pts) {
        for (auto& v : p) v = util::uniform_range(rng, -3, 3);
    }
    return pts;
}

std::vector<possession::Possession> random_possessions(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<possession::Possession> ps(n);
    for (auto& p : ps) {
        p.match_id = "M";
        p.team_id = "T";
        p.period = 1;
        double t = 0.0;
        const int events = 4 + static_cast<int>(util::uniform_index(rng, 5));
        for (int i = 0; i < events; ++i) {
            model::Event e;
            e.match_id = "M";
            e.team_id = "T";
            e.period = 1;
            e.t = t;
            e.type = model::EventType::Pass;
            e.x = util::uniform_range(rng, 5, 95);
            e.y = util::uniform_range(rng, 5, 95);
            e.end_x = util::uniform_range(rng, 5, 95);
            e.end_y = util::uniform_range(rng, 5, 95);
            e.seq = i;
            p.events.push_back(std::move(e));
            t += util::uniform_range(rng, 0.5, 4.0);
        }
        p.start_t = p.events.front().t;
        p.end_t = p.events.back().t;
    }
    return ps;
}

void bm_assign_serial(benchmark::State& state) {
    const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 1);
    const auto cents = random_points(10, 2);
    std::vector<int> assign(pts.size());
    for (auto _ : state) {
        par::assign_nearest_serial(pts, cents, assign);
        benchmark::DoNotOptimize(assign.data());
    }
}

void bm_assign_omp(benchmark::State& state) {
    const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 1);
    const auto cents = random_points(10, 2);
    std::vector<int> assign(pts.size());
    for (auto _ : state) {
        par::assign_nearest(pts, cents, assign);
        benchmark::DoNotOptimize(assign.data());
    }
}

void bm_accumulate_serial(benchmark::State& state) {
    const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 1);
    const auto cents = random_points(10, 2);
    std::vector<int> assign(pts.size());
    par::assign_nearest_serial(pts, cents, assign);
    std::vector<Vec7> sums;
    std::vector<long> counts;
    for (auto _ : state) {
        par::accumulate_clusters_serial(pts, assign, 10, sums, counts);
        benchmark::DoNotOptimize(sums.data());
    }
}

void bm_accumulate_omp(benchmark::State& state) {
    const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 1);
    const auto cents = random_points(10, 2);
    std::vector<int> assign(pts.size());
    par::assign_nearest(pts, cents, assign);
    std::vector<Vec7> sums;
    std::vector<long> counts;
    for (auto _ : state) {
        par::accumulate_clusters(pts, assign, 10, sums, counts);
        benchmark::DoNotOptimize(sums.data());
    }
}

void bm_sse_serial(benchmark::State& state) {
    const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 1);
    const auto cents = random_points(10, 2);
    std::vector<int> assign(pts.size());
    par::assign_nearest_serial(pts, cents, assign);
    for (auto _ : state) {
        benchmark::DoNotOptimize(par::total_sse_serial(pts, cents, assign));
    }
}

void bm_sse_omp(benchmark::State& state) {
    const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 1);
    const auto cents = random_points(10, 2);
    std::vector<int> assign(pts.size());
    par::assign_nearest(pts, cents, assign);
    for (auto _ : state) {
        benchmark::DoNotOptimize(par::total_sse(pts, cents, assign));
    }
}

void bm_features_serial(benchmark::State& state) {
    const auto ps = random_possessions(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        std::vector<features::FeatureVector> out(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) out[i] = features::compute_features(ps[i]);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_features_omp(benchmark::State& state) {
    const auto ps = random_possessions(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        auto out = features::compute_features_batch(ps);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(bm_assign_serial)->Arg(10000)->Arg(100000);
BENCHMARK(bm_assign_omp)->Arg(10000)->Arg(100000);
BENCHMARK(bm_accumulate_serial)->Arg(10000)->Arg(100000);
BENCHMARK(bm_accumulate_omp)->Arg(10000)->Arg(100000);
BENCHMARK(bm_sse_serial)->Arg(10000)->Arg(100000);
BENCHMARK(bm_sse_omp)->Arg(10000)->Arg(100000);
BENCHMARK(bm_features_serial)->Arg(2000)->Arg(20000);
BENCHMARK(bm_features_omp)->Arg(2000)->Arg(20000);
