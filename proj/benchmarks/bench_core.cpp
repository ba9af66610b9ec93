#include <benchmark/benchmark.h>

#include <random>

#include "spherecode/bounds.hpp"
#include "spherecode/combinatorics.hpp"
#include "spherecode/decomposition.hpp"
#include "spherecode/geometry.hpp"
#include "spherecode/search.hpp"

using namespace spherecode;

namespace {

Code common_angle_code(double c, int k, double a) {
    const int n = k + 2;
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, c);
    for (int i = 0; i < n; ++i) g(i, i) = 1.0;
    g(k, k + 1) = a;
    g(k + 1, k) = a;
    return factor_gram(GramMatrix(g), n);
}

void BM_projection_chain(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const Code code = common_angle_code(0.3, k, 0.1);
    std::vector<Eigen::VectorXd> basis;
    for (int i = 0; i < k; ++i) basis.push_back(code.vector(i));
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_complement(code.vector(k), basis));
    }
}
BENCHMARK(BM_projection_chain)->Arg(2)->Arg(4)->Arg(6);

void BM_g_closed_form(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(g_closed_form(0.1, 0.3, state.range(0)));
    }
}
BENCHMARK(BM_g_closed_form)->Arg(6);

void BM_factor_gram_simplex(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(d + 1, d + 1, -1.0 / d);
    for (int i = 0; i <= d; ++i) g(i, i) = 1.0;
    const GramMatrix gram(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(factor_gram(gram, d));
    }
}
BENCHMARK(BM_factor_gram_simplex)->Arg(8)->Arg(32);

void BM_search_icosahedral(benchmark::State& state) {
    SearchConfig cfg;
    const double alpha = icosahedron_angle();
    cfg.candidate_values = {-alpha, alpha};
    cfg.d = 3;
    cfg.n_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_code_search(cfg));
    }
}
BENCHMARK(BM_search_icosahedral)->Arg(6)->Arg(7);

void BM_greedy_independent(benchmark::State& state) {
    std::mt19937_64 rng(99);
    const int n = static_cast<int>(state.range(0));
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 4 == 0) g.add_edge(i, j);
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_independent(g));
    }
}
BENCHMARK(BM_greedy_independent)->Arg(100)->Arg(400);

void BM_ramsey_pair(benchmark::State& state) {
    const int k = 3, t = 2;
    const long n = 6561 + 100;
    ColoringView view{static_cast<int>(n), k, [](int i, int j) {
                          return static_cast<int>((static_cast<long>(i + 1) * (j + 1)) % 3);
                      }};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ramsey_pair(view, k, t, 4));
    }
}
BENCHMARK(BM_ramsey_pair);

void BM_decompose_gap(benchmark::State& state) {
    // the five-vector gap fixture: e1 plus four vectors at 1/2 with it
    const Code simplex = simplex_code(3);
    const double lambda = std::sqrt(19.0 / 20.0);
    const double mu = std::sqrt(1.0 / 20.0);
    const double s = std::sqrt(0.75);
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(5, 5);
    rows(0, 0) = 1.0;
    for (int j = 0; j < 4; ++j) {
        rows(j + 1, 0) = 0.5;
        for (int c = 0; c < 3; ++c) rows(j + 1, c + 1) = s * lambda * simplex.rows()(j, c);
        rows(j + 1, 4) = s * mu;
    }
    const Code code(5, rows);
    const AngleSystem L(0.5, {0.05, 0.5});
    for (auto _ : state) {
        benchmark::DoNotOptimize(decompose(code, L));
    }
}
BENCHMARK(BM_decompose_gap);

}  // namespace

BENCHMARK_MAIN();
