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
 * @file backtest.hpp
 * @brief Rolling-window backtesting harness: model zoo, validation-Sharpe
 *        hyperparameter tuning, performance metrics and significance tests.
 *
 * Protocol per replication: sample an asset pool from the universe, tune
 * the risk-return weight eta once on the family's SAA base model over the
 * validation period, tune each model's own hyperparameters with eta fixed,
 * then evaluate the test period. Reported tables average metrics across
 * replications; significance of the transport-based conditional model is
 * assessed by one-sided Wilcoxon signed-rank tests on paired
 * per-replication Sharpe ratios.
 */

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "condor/data_io.hpp"
#include "condor/reformulations.hpp"
#include "condor/types.hpp"

namespace condor
{

enum class ModelKind
{
    EW,    ///< minimum-norm point of the feasible set
    MV,    ///< SAA mean-variance
    DRMV,  ///< distributionally robust mean-variance (closed-form norm penalty)
    CMV,   ///< conditional SAA mean-variance
    DRCMV, ///< type-infinity robust conditional mean-variance
    OTCMV, ///< transport-based robust conditional mean-variance (singular fiber)
    MC,    ///< SAA mean-CVaR
    DRMC,  ///< distributionally robust mean-CVaR (unconditional ball)
    CMC,   ///< conditional SAA mean-CVaR
    DRCMC, ///< type-infinity robust conditional mean-CVaR
    OTCMC  ///< transport-based robust conditional mean-CVaR (singular fiber)
};

const char* to_string(ModelKind kind) noexcept;

enum class ModelFamily
{
    MeanVariance,
    MeanCVaR
};

/// The two model lineups (EW first, transport-based conditional model last).
std::vector<ModelKind> family_models(ModelFamily family);

/**
 * @brief Hyperparameters for one model instance. Field semantics by model:
 *
 * eta, tau:       loss parameters (all models; tau only for the CVaR family).
 * rho:            ambiguity radius (DRMV / DRMC fixed grid).
 * quantile_a:     fiber size gamma = a-quantile of covariate distances
 *                 (CMV / CMC / DRCMV / DRCMC).
 * quantile_b:     type-infinity radius rho = b-quantile of covariate
 *                 distances (DRCMV / DRCMC).
 * eps:            fiber-mass floor (OTCMV / OTCMC).
 * rho_scale:      rho = rho_scale * min covariate distance (OTCMV / OTCMC).
 */
struct ModelParams
{
    double eta = 0.0;
    double tau = 0.05;
    double rho = 0.0;
    double quantile_a = 0.0;
    double quantile_b = 0.0;
    double eps = 0.0;
    double rho_scale = 0.0;
};

/// A model plus its (possibly untuned) hyperparameters.
struct ModelId
{
    ModelKind kind = ModelKind::EW;
    ModelParams params;
};

/**
 * @brief Candidate hyperparameter grid for a model, in lexicographic order
 *        (ties during tuning resolve to the earliest candidate).
 *
 * eta and tau are treated as already fixed and copied into every
 * candidate. The eta grid itself (for the base SAA model) is exposed via
 * eta_grid().
 */
std::vector<ModelParams> hyperparameter_grid(ModelKind kind, double eta, double tau);

/// The 7-point log-equidistant eta grid on [0.1, 20].
std::vector<double> eta_grid();

/**
 * @brief Solves one model's allocation on a training window for covariate
 *        x0.
 *
 * Deterministic given (model, window, x0, options). Throws condor::Error
 * on regime violations or solver failures; the harness records and skips.
 */
Allocation allocate(const ModelId& model, const SampleSet& window,
                    const Eigen::VectorXd& x0, const SolveOptions& opts = {});

/// Realized returns with the allocation trail that produced them.
struct ReturnSeries
{
    std::vector<int> dates;
    std::vector<double> returns;
    std::vector<Eigen::VectorXd> alphas;
};

/// Performance summary of a return series.
struct Metrics
{
    double mean = 0.0;    ///< per-period mean return
    double stdDev = 0.0;  ///< per-period sample standard deviation
    double sharpe = 0.0;  ///< sqrt(252) * mean / stdDev
    double maxDraw = 0.0; ///< max peak-to-trough loss of cumulative wealth
    double tradeVol = 0.0;///< annualized mean L1 turnover of target weights
};

/**
 * @brief Computes all metrics. Requires length >= 2 and nonzero standard
 *        deviation (else the Sharpe-undefined error is thrown).
 */
Metrics compute_metrics(const ReturnSeries& series);

/**
 * @brief One-sided Wilcoxon signed-rank p-value for H1: a tends to exceed b.
 *
 * Zero differences are dropped; ties among absolute differences receive
 * mid-ranks. Exact tail enumeration over sign patterns for R <= 20
 * effective pairs, normal approximation with continuity correction above.
 * All-zero differences throw.
 */
double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

/// Forces the normal-approximation path (exposed for accuracy checks).
double wilcoxon_signed_rank_normal(const std::vector<double>& a,
                                   const std::vector<double>& b);

/**
 * @brief Tunes one model's hyperparameters by maximizing the validation
 *        Sharpe ratio over its grid.
 *
 * Dates in [val_begin, val_end) are validation dates; each date t uses the
 * window of the preceding `window` observations of `pool` and covariate
 * x_t. Candidates whose solves fail on every validation date score -inf.
 * Returns the earliest maximizer in grid order.
 */
ModelParams tune_hyperparams(ModelKind kind, const SampleSet& pool, int val_begin,
                             int val_end, int window,
                             const std::vector<ModelParams>& grid,
                             const SolveOptions& opts,
                             std::vector<std::string>* log = nullptr);

/// Backtest configuration (defaults are the desk-scale smoke setup).
struct BacktestConfig
{
    SyntheticConfig market;         ///< universe generator (T adjusted if short)
    ModelFamily family = ModelFamily::MeanVariance;
    int window = 504;               ///< rolling training window length
    int validation = 63;            ///< validation dates per replication
    int test = 63;                  ///< test dates per replication
    int replications = 8;
    int assets_per_replication = 10;
    std::uint64_t seed = 0;         ///< pool-sampling seed
    int jobs = 1;                   ///< parallel replications
    SolveOptions solve;
};

/// Aggregated backtest output (Tables 1-3 shaped).
struct BacktestReport
{
    std::vector<std::string> models;
    std::map<std::string, Metrics> validation_metrics; ///< averaged over replications
    std::map<std::string, Metrics> test_metrics;       ///< averaged over replications
    std::map<std::string, std::vector<double>> test_sharpe_by_rep;
    std::map<std::string, std::vector<double>> validation_sharpe_by_rep;
    std::map<std::string, double> p_values; ///< transport model vs each baseline
    std::vector<std::string> log;           ///< skipped dates / tuning notes
};

/**
 * @brief Runs the full protocol for one model family.
 *
 * Deterministic for a fixed config (including jobs). Per-date model
 * failures are logged and skipped, never imputed.
 */
BacktestReport run_backtest(const BacktestConfig& config);

/**
 * @brief Writes table1_validation.csv, table2_test.csv, table3_pvalues.csv
 *        and sharpe_by_replication.csv under `out_dir`; returns the file
 *        paths written.
 */
std::vector<std::string> write_report_csv(const BacktestReport& report,
                                          const std::string& out_dir);

} // namespace condor
