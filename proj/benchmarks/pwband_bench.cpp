#include <benchmark/benchmark.h>

#include "pwband/band.hpp"
#include "pwband/kernel.hpp"
#include "pwband/quadopt.hpp"
#include "pwband/rng.hpp"
#include "pwband/voting.hpp"

using namespace pwband;

namespace {

Points spread(Eigen::Index n, double eta, Rng &rng) {
    Points p(1, n);
    double x = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        p(0, i) = x;
        x += (0.5 + rng.uniform()) * 3.141592653589793 / eta;
    }
    return p;
}

Eigen::VectorXd normals(Eigen::Index n, Rng &rng) {
    Eigen::VectorXd v(n);
    for (auto &x : v) { x = rng.normal(); }
    return v;
}

}  // namespace

static void BM_Gram(benchmark::State &state) {
    Rng rng(1);
    const KernelConfig cfg{20.0, 1};
    const Points p = spread(state.range(0), cfg.eta, rng);
    for (auto _ : state) { benchmark::DoNotOptimize(gram(p, cfg)); }
}
BENCHMARK(BM_Gram)->Arg(20)->Arg(100)->Arg(500);

static void BM_Interpolant(benchmark::State &state) {
    Rng rng(2);
    const KernelConfig cfg{20.0, 1};
    const Points p = spread(state.range(0), cfg.eta, rng);
    const Eigen::VectorXd z = normals(state.range(0), rng);
    for (auto _ : state) { benchmark::DoNotOptimize(min_norm_interpolant(p, z, cfg)); }
}
BENCHMARK(BM_Interpolant)->Arg(20)->Arg(100);

static void BM_TrustRegion(benchmark::State &state) {
    Rng rng(3);
    const Eigen::Index n = state.range(0);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n * n; ++i) { m.data()[i] = rng.normal(); }
    const QuadraticObjective obj{0.5 * (m + m.transpose()), normals(n, rng), 0.0};
    const Ellipsoid e = Ellipsoid::from_shape(normals(n, rng), m * m.transpose() + Eigen::MatrixXd::Identity(n, n));
    for (auto _ : state) { benchmark::DoNotOptimize(max_quadratic_over_ellipsoid(obj, e)); }
}
BENCHMARK(BM_TrustRegion)->Arg(5)->Arg(30)->Arg(100);

static void BM_IntervalAt(benchmark::State &state) {
    Rng rng(4);
    const Eigen::Index n0 = state.range(0);
    BandConfig cfg;
    cfg.n0 = n0;
    cfg.kernel = KernelConfig{20.0, 1};
    SampleSet s;
    s.inputs = spread(n0, cfg.kernel.eta, rng);
    const Ellipsoid e = Ellipsoid::ball(0.3 * normals(n0, rng), 0.2);
    NormBound b;
    b.tau = 5.0;
    Eigen::VectorXd x0(1);
    x0 << 0.5 * s.inputs(0, n0 - 1) + 0.01;
    for (auto _ : state) { benchmark::DoNotOptimize(interval_at(x0, s, e, b, cfg)); }
}
BENCHMARK(BM_IntervalAt)->Arg(5)->Arg(30)->Arg(100);

static void BM_VoteSet(benchmark::State &state) {
    Rng rng(5);
    IntervalCollection c;
    for (std::int64_t k = 0; k < state.range(0); ++k) {
        const double mid = rng.normal(), half = 0.1 + rng.uniform();
        c.push_back(Interval{mid - half, mid + half});
    }
    const WeightVector w = WeightVector::uniform(c.size());
    for (auto _ : state) { benchmark::DoNotOptimize(vote_set(c, w, 0.5)); }
}
BENCHMARK(BM_VoteSet)->Arg(11)->Arg(101)->Arg(1001);
BENCHMARK_MAIN();
