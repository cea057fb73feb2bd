// Copyright 2026 The condor Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file benchmark_main.cpp
 * @brief Microbenchmarks for the hot paths: fiber geometry, the knapsack
 *        thresholds, program construction and the conic solves.
 */

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <benchmark/benchmark.h>

#include "condor/conic.hpp"
#include "condor/feasibility.hpp"
#include "condor/geometry.hpp"
#include "condor/oracle.hpp"
#include "condor/reformulations.hpp"
#include "condor/types.hpp"

namespace
{

condor::SampleSet random_samples(std::uint64_t seed, int N, int n, int m)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd X(N, n);
    Eigen::MatrixXd Y(N, m);
    for (int i = 0; i < N; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            X(i, j) = gauss(rng);
        }
        for (int j = 0; j < m; ++j)
        {
            Y(i, j) = 0.02 * gauss(rng);
        }
    }
    return {X, Y};
}

condor::ProblemSpec singleton_spec(std::uint64_t seed, int N, int n, int m)
{
    const condor::SampleSet data = random_samples(seed, N, n, m);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    const condor::GeometryStats geo =
        condor::compute_geometry(data, condor::FiberSpec(x0, 0.0));
    const double rho = 1.0 + geo.kappa.mean();
    return {data,
            condor::FiberSpec(x0, 0.0),
            condor::AmbiguitySpec(rho, 0.5),
            condor::LossSpec::mean_variance(1.0),
            condor::SupportSpec::whole_space(),
            condor::FeasibleSet::simplex(m)};
}

condor::ProblemSpec fiber_spec(std::uint64_t seed, int N, int n, int m)
{
    const condor::SampleSet data = random_samples(seed, N, n, m);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    const condor::FiberSpec fiber(x0, 1.0);
    const condor::GeometryStats geo = condor::compute_geometry(data, fiber);
    const double rho = condor::rho_min(geo.kappa, 0.3, N) + 0.5;
    return {data,
            fiber,
            condor::AmbiguitySpec(rho, 0.3),
            condor::LossSpec::mean_variance(1.0),
            condor::SupportSpec::whole_space(),
            condor::FeasibleSet::simplex(m)};
}

void BM_ComputeGeometry(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    const condor::SampleSet data = random_samples(2, N, 8, 4);
    const condor::FiberSpec fiber(Eigen::VectorXd::Zero(8), 4.0);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::compute_geometry(data, fiber));
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_ComputeGeometry)->Arg(64)->Arg(1024)->Arg(16384);

void BM_FeasibilityThresholds(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd kappa(N);
    Eigen::VectorXd d(N);
    std::vector<int> I1;
    for (int i = 0; i < N; ++i)
    {
        kappa(i) = (i % 3 == 0) ? 0.0 : gauss(rng) * gauss(rng);
        d(i) = 0.1 + std::abs(gauss(rng));
        if (i % 3 == 0)
        {
            I1.push_back(i);
        }
    }
    const double cap = condor::rho_max(d, I1, N);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::rho_min(kappa, 0.25, N));
        benchmark::DoNotOptimize(condor::eps_lower(d, I1, 0.5 * cap, N));
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_FeasibilityThresholds)->Arg(256)->Arg(4096)->Arg(65536);

void BM_BuildMvSingleton(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    const condor::ProblemSpec spec = singleton_spec(5, N, 4, 6);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::build_mv_singleton(spec));
    }
}
BENCHMARK(BM_BuildMvSingleton)->Arg(16)->Arg(64)->Arg(256);

void BM_BuildCvarFiber(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    const condor::ProblemSpec spec = fiber_spec(7, N, 3, 4);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::build_cvar_fiber(spec));
    }
}
BENCHMARK(BM_BuildCvarFiber)->Arg(8)->Arg(32)->Arg(128);

void BM_SolveMvSingleton(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    const condor::ProblemSpec spec = singleton_spec(11, N, 4, 6);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::solve_allocation(spec));
    }
}
BENCHMARK(BM_SolveMvSingleton)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SolveMvFiber(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    const condor::ProblemSpec spec = fiber_spec(13, N, 3, 4);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::solve_allocation(spec));
    }
}
BENCHMARK(BM_SolveMvFiber)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_WorstCaseFrozen(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    const condor::ProblemSpec spec = singleton_spec(17, N, 4, 6);
    const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(6, 1.0 / 6.0);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::worst_case_value(alpha, 0.01, spec));
    }
}
BENCHMARK(BM_WorstCaseFrozen)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BruteforceOracle(benchmark::State& state)
{
    const int points = static_cast<int>(state.range(0));
    const condor::ProblemSpec spec = singleton_spec(19, 6, 2, 2);
    const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(2, 0.5);
    const condor::GridSpec grid = condor::GridSpec::cube(2, 1.0, points);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(condor::worst_case_bruteforce(alpha, 0.0, spec, grid));
    }
}
BENCHMARK(BM_BruteforceOracle)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
