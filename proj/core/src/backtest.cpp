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

#include "condor/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "condor/errors.hpp"
#include "condor/feasibility.hpp"
#include "condor/geometry.hpp"
#include "program_builder.hpp"

namespace condor
{

const char* to_string(ModelKind kind) noexcept
{
    switch (kind)
    {
    case ModelKind::EW: return "EW";
    case ModelKind::MV: return "MV";
    case ModelKind::DRMV: return "DRMV";
    case ModelKind::CMV: return "CMV";
    case ModelKind::DRCMV: return "DRCMV";
    case ModelKind::OTCMV: return "OTCMV";
    case ModelKind::MC: return "MC";
    case ModelKind::DRMC: return "DRMC";
    case ModelKind::CMC: return "CMC";
    case ModelKind::DRCMC: return "DRCMC";
    case ModelKind::OTCMC: return "OTCMC";
    }
    return "?";
}

std::vector<ModelKind> family_models(ModelFamily family)
{
    if (family == ModelFamily::MeanVariance)
    {
        return {ModelKind::EW,  ModelKind::MV,    ModelKind::DRMV,
                ModelKind::CMV, ModelKind::DRCMV, ModelKind::OTCMV};
    }
    return {ModelKind::EW,  ModelKind::MC,    ModelKind::DRMC,
            ModelKind::CMC, ModelKind::DRCMC, ModelKind::OTCMC};
}

std::vector<double> eta_grid()
{
    std::vector<double> grid(7);
    for (int i = 0; i < 7; ++i)
    {
        grid[static_cast<std::size_t>(i)] =
            std::pow(10.0, std::log10(0.1) + (std::log10(20.0) - std::log10(0.1)) *
                                                 static_cast<double>(i) / 6.0);
    }
    return grid;
}

std::vector<ModelParams> hyperparameter_grid(ModelKind kind, double eta, double tau)
{
    ModelParams base;
    base.eta = eta;
    base.tau = tau;
    std::vector<ModelParams> grid;
    const double rhos[] = {0.1, 0.2, 0.5};
    const double quant_a[] = {0.10, 0.20, 0.50};
    const double quant_b[] = {0.05, 0.10, 0.25};
    const double eps_grid[] = {0.1, 0.2, 0.5};
    const double scales[] = {1.1, 1.2, 1.5};
    switch (kind)
    {
    case ModelKind::EW:
    case ModelKind::MV:
    case ModelKind::MC:
        grid.push_back(base);
        break;
    case ModelKind::DRMV:
    case ModelKind::DRMC:
        for (double rho : rhos)
        {
            ModelParams p = base;
            p.rho = rho;
            grid.push_back(p);
        }
        break;
    case ModelKind::CMV:
    case ModelKind::CMC:
        for (double a : quant_a)
        {
            ModelParams p = base;
            p.quantile_a = a;
            grid.push_back(p);
        }
        break;
    case ModelKind::DRCMV:
    case ModelKind::DRCMC:
        for (double a : quant_a)
        {
            for (double b : quant_b)
            {
                ModelParams p = base;
                p.quantile_a = a;
                p.quantile_b = b;
                grid.push_back(p);
            }
        }
        break;
    case ModelKind::OTCMV:
    case ModelKind::OTCMC:
        for (double eps : eps_grid)
        {
            for (double s : scales)
            {
                ModelParams p = base;
                p.eps = eps;
                p.rho_scale = s;
                grid.push_back(p);
            }
        }
        break;
    }
    return grid;
}

namespace
{

using build_detail::Builder;
using build_detail::Decisions;
using build_detail::decision_variables;
using build_detail::dot;
using build_detail::extract_allocation;
using build_detail::solve_or_throw;

int var_index(const AffineExpr& e) { return e.terms.front().first; }

Eigen::VectorXd covariate_costs(const SampleSet& window, const Eigen::VectorXd& x0)
{
    Eigen::VectorXd c(window.N());
    for (int i = 0; i < window.N(); ++i)
    {
        c[i] = (window.x(i) - x0).squaredNorm();
    }
    return c;
}

/// Smallest value v such that at least ceil(a * K) entries are <= v.
double lower_quantile(Eigen::VectorXd values, double a)
{
    std::sort(values.data(), values.data() + values.size());
    const int K = static_cast<int>(values.size());
    int idx = static_cast<int>(std::ceil(a * K)) - 1;
    idx = std::min(std::max(idx, 0), K - 1);
    return values[idx];
}

Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& S)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
           eig.eigenvectors().transpose();
}

/// SAA mean-variance: min_alpha alpha' Cov alpha - eta * mean' alpha, with
/// beta pinned to the mean portfolio return.
Allocation mv_saa(const SampleSet& window, double eta, const FeasibleSet& feasible,
                  const SolveOptions& opts)
{
    const Eigen::VectorXd mu = window.Y().colwise().mean().transpose();
    Eigen::MatrixXd centered = window.Y().rowwise() - mu.transpose();
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(window.N());
    const Eigen::MatrixXd root = matrix_sqrt(cov);

    Builder b;
    Decisions dec = decision_variables(b, feasible);
    const int s = b.add_var("s");
    b.add_cost(s, 1.0);
    for (int j = 0; j < feasible.m(); ++j)
    {
        b.add_cost(var_index(dec.alpha[static_cast<std::size_t>(j)]), -eta * mu[j]);
    }
    b.p.equalities.push_back(dec.beta - dot(mu, dec.alpha));

    // s >= ||root * alpha||^2 as || [2 root alpha; 1 - s] || <= 1 + s.
    std::vector<AffineExpr> soc;
    soc.push_back(AffineExpr::var(s) + 1.0);
    for (int r = 0; r < feasible.m(); ++r)
    {
        soc.push_back(2.0 * dot(root.row(r).transpose(), dec.alpha));
    }
    soc.push_back(1.0 - AffineExpr::var(s));
    b.p.cones.push_back(ConeBlock::second_order(std::move(soc)));

    const ConicProgram p = b.finalize();
    return extract_allocation(p, solve_or_throw(p, opts), feasible);
}

/// Norm-penalized robust mean-variance:
/// min sqrt(alpha' Cov alpha) - eta * mean' alpha + sqrt((1+eta^2) rho) ||alpha||.
Allocation drmv(const SampleSet& window, double eta, double rho,
                const FeasibleSet& feasible, const SolveOptions& opts)
{
    detail::require(rho > 0.0, ErrorCode::InvalidArgument,
                    "DRMV: ambiguity radius must be positive");
    const Eigen::VectorXd mu = window.Y().colwise().mean().transpose();
    Eigen::MatrixXd centered = window.Y().rowwise() - mu.transpose();
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(window.N());
    const Eigen::MatrixXd root = matrix_sqrt(cov);

    Builder b;
    Decisions dec = decision_variables(b, feasible);
    const int t = b.add_var("t");
    const int g = b.add_var("g");
    b.add_cost(t, 1.0);
    b.add_cost(g, std::sqrt((1.0 + eta * eta) * rho));
    for (int j = 0; j < feasible.m(); ++j)
    {
        b.add_cost(var_index(dec.alpha[static_cast<std::size_t>(j)]), -eta * mu[j]);
    }
    b.p.equalities.push_back(dec.beta - dot(mu, dec.alpha));

    std::vector<AffineExpr> soc_t;
    soc_t.push_back(AffineExpr::var(t));
    for (int r = 0; r < feasible.m(); ++r)
    {
        soc_t.push_back(dot(root.row(r).transpose(), dec.alpha));
    }
    b.p.cones.push_back(ConeBlock::second_order(std::move(soc_t)));

    std::vector<AffineExpr> soc_g;
    soc_g.push_back(AffineExpr::var(g));
    for (int j = 0; j < feasible.m(); ++j)
    {
        soc_g.push_back(dec.alpha[static_cast<std::size_t>(j)]);
    }
    b.p.cones.push_back(ConeBlock::second_order(std::move(soc_g)));

    const ConicProgram p = b.finalize();
    return extract_allocation(p, solve_or_throw(p, opts), feasible);
}

/// SAA mean-CVaR: min -eta mean' alpha + beta + (1/(tau N)) sum_i s_i,
/// s_i >= -y_i' alpha - beta, s_i >= 0.
Allocation mc_saa(const SampleSet& window, double eta, double tau,
                  const FeasibleSet& feasible, const SolveOptions& opts)
{
    const int N = window.N();
    const Eigen::VectorXd mu = window.Y().colwise().mean().transpose();

    Builder b;
    Decisions dec = decision_variables(b, feasible);
    const std::vector<int> s = b.add_vec("s", N);
    b.add_cost(var_index(dec.beta), 1.0);
    for (int j = 0; j < feasible.m(); ++j)
    {
        b.add_cost(var_index(dec.alpha[static_cast<std::size_t>(j)]), -eta * mu[j]);
    }
    std::vector<AffineExpr> rows;
    for (int i = 0; i < N; ++i)
    {
        const int si = s[static_cast<std::size_t>(i)];
        b.add_cost(si, 1.0 / (tau * static_cast<double>(N)));
        rows.push_back(AffineExpr::var(si));
        rows.push_back(AffineExpr::var(si) + dot(window.y(i), dec.alpha) + dec.beta);
    }
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(rows)));

    const ConicProgram p = b.finalize();
    return extract_allocation(p, solve_or_throw(p, opts), feasible);
}

/// Rows of `pool` whose covariate ground cost to x0 is at most gamma.
SampleSet fiber_rows(const SampleSet& window, const Eigen::VectorXd& x0, double gamma)
{
    std::vector<int> idx;
    for (int i = 0; i < window.N(); ++i)
    {
        if ((window.x(i) - x0).squaredNorm() <= gamma) idx.push_back(i);
    }
    if (idx.empty())
    {
        throw Error(ErrorCode::EmptyFiber,
                    "conditional model: no training sample falls in the fiber");
    }
    return window.rows(idx);
}

LossSpec family_loss(ModelKind kind, const ModelParams& p)
{
    switch (kind)
    {
    case ModelKind::OTCMV:
    case ModelKind::DRCMV:
        return LossSpec::mean_variance(p.eta);
    default:
        return LossSpec::mean_cvar(p.eta, p.tau);
    }
}

} // namespace

Allocation allocate(const ModelId& model, const SampleSet& window,
                    const Eigen::VectorXd& x0, const SolveOptions& opts)
{
    detail::require(window.N() >= 1, ErrorCode::InvalidArgument,
                    "allocate: empty training window");
    detail::require(window.n() == x0.size(), ErrorCode::DimensionMismatch,
                    "allocate: covariate dimension mismatch");
    const FeasibleSet feasible = FeasibleSet::simplex(window.m());
    const ModelParams& P = model.params;

    switch (model.kind)
    {
    case ModelKind::EW:
    {
        Allocation out;
        out.alpha = feasible.project(Eigen::VectorXd::Zero(window.m()));
        out.beta = (window.Y().colwise().mean() * out.alpha).value();
        out.objective = out.alpha.squaredNorm();
        return out;
    }
    case ModelKind::MV:
        return mv_saa(window, P.eta, feasible, opts);
    case ModelKind::DRMV:
        return drmv(window, P.eta, P.rho, feasible, opts);
    case ModelKind::CMV:
    {
        const double gamma = lower_quantile(covariate_costs(window, x0), P.quantile_a);
        return mv_saa(fiber_rows(window, x0, gamma), P.eta, feasible, opts);
    }
    case ModelKind::MC:
        return mc_saa(window, P.eta, P.tau, feasible, opts);
    case ModelKind::DRMC:
    {
        // Unconditional transport ball: collapse every covariate onto x0 so
        // the conditional program with eps = 1 is the plain return-space
        // Wasserstein model.
        Eigen::MatrixXd X = x0.transpose().replicate(window.N(), 1);
        ProblemSpec spec(SampleSet(std::move(X), window.Y()), FiberSpec(x0, 0.0),
                         AmbiguitySpec(P.rho, 1.0), LossSpec::mean_cvar(P.eta, P.tau),
                         SupportSpec::whole_space(), feasible);
        return solve_allocation(spec, opts);
    }
    case ModelKind::CMC:
    {
        const double gamma = lower_quantile(covariate_costs(window, x0), P.quantile_a);
        return mc_saa(fiber_rows(window, x0, gamma), P.eta, P.tau, feasible, opts);
    }
    case ModelKind::DRCMV:
    case ModelKind::DRCMC:
    {
        const Eigen::VectorXd c = covariate_costs(window, x0);
        const double gamma = lower_quantile(c, P.quantile_a);
        const double rho = lower_quantile(c, P.quantile_b);
        ProblemSpec spec(window, FiberSpec(x0, gamma),
                         AmbiguitySpec(rho, 1.0, TransportOrder::TypeInfty),
                         family_loss(model.kind, P), SupportSpec::whole_space(),
                         feasible);
        return solve_allocation(spec, opts);
    }
    case ModelKind::OTCMV:
    case ModelKind::OTCMC:
    {
        const Eigen::VectorXd c = covariate_costs(window, x0);
        const double rho = P.rho_scale * c.minCoeff();
        ProblemSpec spec(window, FiberSpec(x0, 0.0), AmbiguitySpec(rho, P.eps),
                         family_loss(model.kind, P), SupportSpec::whole_space(),
                         feasible);
        return solve_allocation(spec, opts);
    }
    }
    throw Error(ErrorCode::InvalidArgument, "allocate: unknown model kind");
}

Metrics compute_metrics(const ReturnSeries& series)
{
    const std::vector<double>& r = series.returns;
    const int T = static_cast<int>(r.size());
    detail::require(T >= 2, ErrorCode::InvalidArgument,
                    "compute_metrics: need at least two observations");
    detail::require(series.alphas.size() == r.size() and
                        series.dates.size() == r.size(),
                    ErrorCode::DimensionMismatch,
                    "compute_metrics: misaligned return series");

    Metrics out;
    out.mean = std::accumulate(r.begin(), r.end(), 0.0) / T;
    double sq = 0.0;
    for (double v : r) sq += (v - out.mean) * (v - out.mean);
    out.stdDev = std::sqrt(sq / (T - 1));
    detail::require(out.stdDev > 0.0, ErrorCode::InvalidArgument,
                    "compute_metrics: Sharpe undefined for a constant return series");
    out.sharpe = std::sqrt(252.0) * out.mean / out.stdDev;

    double wealth = 1.0;
    double peak = 1.0;
    for (double v : r)
    {
        wealth *= 1.0 + v;
        peak = std::max(peak, wealth);
        out.maxDraw = std::max(out.maxDraw, (peak - wealth) / peak);
    }

    double turnover = 0.0;
    for (int t = 1; t < T; ++t)
    {
        turnover += (series.alphas[static_cast<std::size_t>(t)] -
                     series.alphas[static_cast<std::size_t>(t - 1)])
                        .lpNorm<1>();
    }
    out.tradeVol = 252.0 * turnover / (T - 1);
    return out;
}

namespace
{

double wilcoxon_impl(const std::vector<double>& a, const std::vector<double>& b,
                     bool force_normal)
{
    detail::require(a.size() == b.size(), ErrorCode::DimensionMismatch,
                    "wilcoxon: paired samples differ in length");
    detail::require(a.size() >= 5, ErrorCode::InvalidArgument,
                    "wilcoxon: need at least 5 paired observations");

    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double d = a[i] - b[i];
        if (d != 0.0) diff.push_back(d);
    }
    if (diff.empty())
    {
        throw Error(ErrorCode::InvalidArgument,
                    "wilcoxon: all paired differences are zero");
    }

    const int R = static_cast<int>(diff.size());
    std::vector<int> order(diff.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return std::abs(diff[static_cast<std::size_t>(i)]) <
               std::abs(diff[static_cast<std::size_t>(j)]);
    });

    // Mid-ranks for ties among absolute differences.
    std::vector<double> rank(diff.size(), 0.0);
    double tie_correction = 0.0;
    for (int i = 0; i < R;)
    {
        int j = i;
        while (j < R and
               std::abs(diff[static_cast<std::size_t>(order[static_cast<std::size_t>(
                   j)])]) ==
                   std::abs(diff[static_cast<std::size_t>(
                       order[static_cast<std::size_t>(i)])]))
        {
            ++j;
        }
        const double mid = 0.5 * (i + 1 + j);
        const double t = j - i;
        tie_correction += (t * t * t - t) / 48.0;
        for (int k = i; k < j; ++k)
        {
            rank[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = mid;
        }
        i = j;
    }

    double w_plus = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i)
    {
        if (diff[i] > 0.0) w_plus += rank[i];
    }

    if (not force_normal and R <= 20)
    {
        const std::uint64_t total = std::uint64_t{1} << R;
        std::uint64_t count = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask)
        {
            double w = 0.0;
            for (int i = 0; i < R; ++i)
            {
                if (mask & (std::uint64_t{1} << i))
                {
                    w += rank[static_cast<std::size_t>(i)];
                }
            }
            if (w >= w_plus - 1e-12) ++count;
        }
        return static_cast<double>(count) / static_cast<double>(total);
    }

    const double mean = R * (R + 1) / 4.0;
    const double var = R * (R + 1) * (2.0 * R + 1) / 24.0 - tie_correction;
    const double z = (w_plus - 0.5 - mean) / std::sqrt(var);
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

} // namespace

double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b)
{
    return wilcoxon_impl(a, b, false);
}

double wilcoxon_signed_rank_normal(const std::vector<double>& a,
                                   const std::vector<double>& b)
{
    return wilcoxon_impl(a, b, true);
}

namespace
{

ReturnSeries evaluate_model(ModelKind kind, const ModelParams& params,
                            const SampleSet& pool, int begin, int end, int window,
                            const SolveOptions& opts, std::vector<std::string>* log)
{
    ReturnSeries series;
    std::vector<int> idx(static_cast<std::size_t>(window));
    for (int t = begin; t < end; ++t)
    {
        std::iota(idx.begin(), idx.end(), t - window);
        const SampleSet win = pool.rows(idx);
        try
        {
            const Allocation a = allocate({kind, params}, win, pool.x(t), opts);
            series.dates.push_back(t);
            series.returns.push_back(a.alpha.dot(pool.y(t)));
            series.alphas.push_back(a.alpha);
        }
        catch (const Error& e)
        {
            if (log)
            {
                log->push_back(std::string(to_string(kind)) + " skipped date " +
                               std::to_string(t) + ": " + e.what());
            }
        }
    }
    return series;
}

double validation_score(const ReturnSeries& series)
{
    try
    {
        return compute_metrics(series).sharpe;
    }
    catch (const Error&)
    {
        return -std::numeric_limits<double>::infinity();
    }
}

} // namespace

ModelParams tune_hyperparams(ModelKind kind, const SampleSet& pool, int val_begin,
                             int val_end, int window,
                             const std::vector<ModelParams>& grid,
                             const SolveOptions& opts, std::vector<std::string>* log)
{
    detail::require(not grid.empty(), ErrorCode::InvalidArgument,
                    "tune_hyperparams: empty grid");
    detail::require(val_begin >= window and val_end > val_begin and
                        val_end <= pool.N(),
                    ErrorCode::InvalidArgument,
                    "tune_hyperparams: invalid validation range");

    double best_score = -std::numeric_limits<double>::infinity();
    const ModelParams* best = nullptr;
    for (const ModelParams& candidate : grid)
    {
        const ReturnSeries series =
            evaluate_model(kind, candidate, pool, val_begin, val_end, window, opts, log);
        const double score = validation_score(series);
        if (best == nullptr or score > best_score + 1e-12)
        {
            best_score = score;
            best = &candidate;
        }
    }
    if (not std::isfinite(best_score))
    {
        throw Error(ErrorCode::SolverFailure,
                    std::string("tune_hyperparams: every candidate for ") +
                        to_string(kind) + " failed on the validation period");
    }
    if (log)
    {
        log->push_back(std::string(to_string(kind)) +
                       " tuned validation sharpe = " + std::to_string(best_score));
    }
    return *best;
}

namespace
{

struct RepOutcome
{
    std::map<std::string, Metrics> validation;
    std::map<std::string, Metrics> test;
    std::map<std::string, double> validation_sharpe;
    std::map<std::string, double> test_sharpe;
    std::vector<std::string> log;
    std::string failure; ///< nonempty if the replication aborted
};

SampleSet select_assets(const SampleSet& universe, const std::vector<int>& assets)
{
    Eigen::MatrixXd Y(universe.N(), static_cast<int>(assets.size()));
    for (std::size_t j = 0; j < assets.size(); ++j)
    {
        Y.col(static_cast<int>(j)) = universe.Y().col(assets[j]);
    }
    return SampleSet(universe.X(), std::move(Y));
}

void run_replication(const BacktestConfig& cfg, const SampleSet& universe,
                     const std::vector<int>& assets, RepOutcome& out)
{
    try
    {
        const SampleSet pool = select_assets(universe, assets);
        const int val_begin = cfg.window;
        const int val_end = val_begin + cfg.validation;
        const int test_end = val_end + cfg.test;

        const ModelKind base = cfg.family == ModelFamily::MeanVariance ? ModelKind::MV
                                                                       : ModelKind::MC;
        std::vector<ModelParams> eta_candidates;
        for (double eta : eta_grid())
        {
            ModelParams p;
            p.eta = eta;
            eta_candidates.push_back(p);
        }
        const double eta = tune_hyperparams(base, pool, val_begin, val_end, cfg.window,
                                            eta_candidates, cfg.solve, &out.log)
                               .eta;
        out.log.push_back("eta tuned to " + std::to_string(eta));

        for (ModelKind kind : family_models(cfg.family))
        {
            const std::vector<ModelParams> grid =
                hyperparameter_grid(kind, eta, ModelParams{}.tau);
            const ModelParams chosen =
                tune_hyperparams(kind, pool, val_begin, val_end, cfg.window, grid,
                                 cfg.solve, &out.log);
            const ReturnSeries val_series = evaluate_model(
                kind, chosen, pool, val_begin, val_end, cfg.window, cfg.solve, &out.log);
            const ReturnSeries test_series = evaluate_model(
                kind, chosen, pool, val_end, test_end, cfg.window, cfg.solve, &out.log);
            const Metrics val = compute_metrics(val_series);
            const Metrics test = compute_metrics(test_series);
            const std::string name = to_string(kind);
            out.validation[name] = val;
            out.test[name] = test;
            out.validation_sharpe[name] = val.sharpe;
            out.test_sharpe[name] = test.sharpe;
        }
    }
    catch (const std::exception& e)
    {
        out.failure = e.what();
    }
}

} // namespace

BacktestReport run_backtest(const BacktestConfig& config)
{
    BacktestConfig cfg = config;
    detail::require(cfg.replications >= 1, ErrorCode::InvalidArgument,
                    "run_backtest: replications must be >= 1");
    detail::require(cfg.window >= 2 and cfg.validation >= 2 and cfg.test >= 2,
                    ErrorCode::InvalidArgument,
                    "run_backtest: window, validation and test must all be >= 2");
    detail::require(cfg.assets_per_replication >= 1 and
                        cfg.assets_per_replication <= cfg.market.m,
                    ErrorCode::InvalidArgument,
                    "run_backtest: assets_per_replication exceeds the universe");
    const int need = cfg.window + cfg.validation + cfg.test;
    if (cfg.market.T < need) cfg.market.T = need;

    const SyntheticMarket market = generate_synthetic(cfg.market);

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<int>> pools(static_cast<std::size_t>(cfg.replications));
    std::vector<int> all_assets(static_cast<std::size_t>(cfg.market.m));
    std::iota(all_assets.begin(), all_assets.end(), 0);
    for (auto& pool : pools)
    {
        std::sample(all_assets.begin(), all_assets.end(), std::back_inserter(pool),
                    cfg.assets_per_replication, rng);
    }

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(cfg.replications));
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1)
    {
        for (int r = 0; r < cfg.replications; ++r)
        {
            run_replication(cfg, market.samples, pools[static_cast<std::size_t>(r)],
                            outcomes[static_cast<std::size_t>(r)]);
        }
    }
    else
    {
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w)
        {
            workers.emplace_back([&, w]() {
                for (int r = w; r < cfg.replications; r += jobs)
                {
                    run_replication(cfg, market.samples,
                                    pools[static_cast<std::size_t>(r)],
                                    outcomes[static_cast<std::size_t>(r)]);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    BacktestReport report;
    for (ModelKind kind : family_models(cfg.family))
    {
        report.models.emplace_back(to_string(kind));
    }
    for (int r = 0; r < cfg.replications; ++r)
    {
        const RepOutcome& out = outcomes[static_cast<std::size_t>(r)];
        const std::string tag = "replication " + std::to_string(r) + ": ";
        if (not out.failure.empty())
        {
            throw Error(ErrorCode::SolverFailure, tag + out.failure);
        }
        for (const std::string& line : out.log) report.log.push_back(tag + line);
        for (const std::string& name : report.models)
        {
            report.validation_sharpe_by_rep[name].push_back(
                out.validation_sharpe.at(name));
            report.test_sharpe_by_rep[name].push_back(out.test_sharpe.at(name));
        }
    }

    // Average metric columns across replications; the aggregated sharpe is
    // recomputed from the aggregated mean and stdDev so the reported columns
    // stay internally consistent.
    const auto aggregate = [&](auto member) {
        std::map<std::string, Metrics> agg;
        for (const std::string& name : report.models)
        {
            Metrics acc;
            for (const RepOutcome& out : outcomes)
            {
                const Metrics& m = (out.*member).at(name);
                acc.mean += m.mean;
                acc.stdDev += m.stdDev;
                acc.maxDraw += m.maxDraw;
                acc.tradeVol += m.tradeVol;
            }
            const double R = static_cast<double>(cfg.replications);
            acc.mean /= R;
            acc.stdDev /= R;
            acc.maxDraw /= R;
            acc.tradeVol /= R;
            acc.sharpe = std::sqrt(252.0) * acc.mean / acc.stdDev;
            agg[name] = acc;
        }
        return agg;
    };
    report.validation_metrics = aggregate(&RepOutcome::validation);
    report.test_metrics = aggregate(&RepOutcome::test);

    // The signed-rank test needs at least five pairs; smaller smoke runs
    // simply omit the p-value table.
    if (cfg.replications >= 5)
    {
        const std::string challenger = report.models.back();
        for (const std::string& name : report.models)
        {
            if (name == challenger) continue;
            report.p_values[name] =
                wilcoxon_signed_rank(report.test_sharpe_by_rep.at(challenger),
                                     report.test_sharpe_by_rep.at(name));
        }
    }
    return report;
}

namespace
{

std::string format_cell(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_metric_table(const std::string& path,
                        const std::vector<std::string>& models,
                        const std::map<std::string, Metrics>& table)
{
    std::ofstream out(path);
    if (not out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << "model,mean,stdDev,sharpe,maxDraw,tradeVol\n";
    for (const std::string& name : models)
    {
        const Metrics& m = table.at(name);
        out << name << ',' << format_cell(m.mean) << ',' << format_cell(m.stdDev) << ','
            << format_cell(m.sharpe) << ',' << format_cell(m.maxDraw) << ','
            << format_cell(m.tradeVol) << "\n";
    }
}

} // namespace

std::vector<std::string> write_report_csv(const BacktestReport& report,
                                          const std::string& out_dir)
{
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    const std::string t1 = out_dir + "/table1_validation.csv";
    write_metric_table(t1, report.models, report.validation_metrics);
    written.push_back(t1);

    const std::string t2 = out_dir + "/table2_test.csv";
    write_metric_table(t2, report.models, report.test_metrics);
    written.push_back(t2);

    const std::string t3 = out_dir + "/table3_pvalues.csv";
    {
        std::ofstream out(t3);
        if (not out) throw Error(ErrorCode::IoError, "cannot write '" + t3 + "'");
        out << "baseline,p_value\n";
        for (const std::string& name : report.models)
        {
            const auto it = report.p_values.find(name);
            if (it == report.p_values.end()) continue;
            out << name << ',' << format_cell(it->second) << "\n";
        }
    }
    written.push_back(t3);

    const std::string t4 = out_dir + "/sharpe_by_replication.csv";
    {
        std::ofstream out(t4);
        if (not out) throw Error(ErrorCode::IoError, "cannot write '" + t4 + "'");
        out << "model,replication,validation_sharpe,test_sharpe\n";
        for (const std::string& name : report.models)
        {
            const auto& val = report.validation_sharpe_by_rep.at(name);
            const auto& test = report.test_sharpe_by_rep.at(name);
            for (std::size_t r = 0; r < test.size(); ++r)
            {
                out << name << ',' << r << ',' << format_cell(val[r]) << ','
                    << format_cell(test[r]) << "\n";
            }
        }
    }
    written.push_back(t4);
    return written;
}

} // namespace condor
