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
 * @file condor_cli.cpp
 * @brief Command-line front end for the condor library.
 *
 * Subcommands: `feasibility` (fiber geometry and budget thresholds),
 * `solve` (allocation), `worst-case` (adversarial value for a frozen
 * decision), `synth` (synthetic market generator), `backtest` (rolling
 * window model comparison) and `validate` (conic-program JSON check).
 *
 * All results go to stdout as JSON. Failures raised by the library are
 * serialized to stderr as {"error": {"code", "message", "payload"}} with
 * exit code 1; command-line usage errors exit with code 2.
 */

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "condor/backtest.hpp"
#include "condor/conic.hpp"
#include "condor/data_io.hpp"
#include "condor/errors.hpp"
#include "condor/feasibility.hpp"
#include "condor/geometry.hpp"
#include "condor/reformulations.hpp"
#include "condor/types.hpp"

namespace
{

using nlohmann::json;

/// Raised for malformed invocations (missing arguments, bad enum values).
struct UsageError
{
    std::string message;
};

void require_usage(bool condition, const std::string& message)
{
    if (not condition)
    {
        throw UsageError{message};
    }
}

/// Parses a comma-separated list of reals ("0.1,-2,3e-1") into a vector.
Eigen::VectorXd parse_vector(const std::string& text, const std::string& flag)
{
    std::vector<double> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ','))
    {
        try
        {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            while (used < token.size() and std::isspace(static_cast<unsigned char>(token[used])))
            {
                ++used;
            }
            require_usage(used == token.size(),
                          flag + ": trailing characters in '" + token + "'");
            values.push_back(v);
        }
        catch (const std::invalid_argument&)
        {
            throw UsageError{flag + ": '" + token + "' is not a number"};
        }
        catch (const std::out_of_range&)
        {
            throw UsageError{flag + ": '" + token + "' is out of range"};
        }
    }
    require_usage(not values.empty(), flag + ": empty vector literal");
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

json vector_to_json(const Eigen::VectorXd& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        arr.push_back(v(i));
    }
    return arr;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (not in)
    {
        throw condor::Error(condor::ErrorCode::IoError, "cannot open '" + path + "'");
    }
    try
    {
        return json::parse(in);
    }
    catch (const json::exception& e)
    {
        throw condor::Error(condor::ErrorCode::SchemaError,
                            "'" + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Shared problem options (feasibility / solve / worst-case).
// ---------------------------------------------------------------------------

/**
 * @brief Option bundle describing one conditional allocation problem.
 *
 * A JSON file passed via --spec supplies defaults for any field; flags
 * given explicitly on the command line take precedence over the file.
 */
struct ProblemCli
{
    std::string data_path;
    std::string x0_text;
    double gamma = 0.0;
    double rho = 0.0;
    double eps = 0.0;
    std::string order = "1";
    std::string loss = "mv";
    double eta = 1.0;
    double tau = 0.05;
    double ball_radius = 0.0;
    std::string ball_center_text;
    double cost_p = 2.0;
    double tol = 1e-8;
    std::string spec_path;

    bool rho_set = false;

    CLI::Option* opt_data = nullptr;
    CLI::Option* opt_x0 = nullptr;
    CLI::Option* opt_gamma = nullptr;
    CLI::Option* opt_rho = nullptr;
    CLI::Option* opt_eps = nullptr;
    CLI::Option* opt_order = nullptr;
    CLI::Option* opt_loss = nullptr;
    CLI::Option* opt_eta = nullptr;
    CLI::Option* opt_tau = nullptr;
    CLI::Option* opt_ball_radius = nullptr;
    CLI::Option* opt_ball_center = nullptr;
    CLI::Option* opt_cost_p = nullptr;
    CLI::Option* opt_tol = nullptr;
};

void add_problem_options(CLI::App* cmd, ProblemCli& c)
{
    c.opt_data = cmd->add_option("--data", c.data_path,
                                 "sample CSV with header x_1..x_n,y_1..y_m");
    c.opt_x0 = cmd->add_option("--x0", c.x0_text,
                               "conditioning covariate, comma-separated reals");
    c.opt_gamma = cmd->add_option("--gamma", c.gamma,
                                  "squared fiber radius (0 = exact conditioning)");
    c.opt_rho = cmd->add_option("--rho", c.rho, "transport budget");
    c.opt_eps = cmd->add_option("--eps", c.eps,
                                "fiber-mass floor (0 with --gamma > 0 reduces to "
                                "the implied floor)");
    c.opt_order = cmd->add_option("--order", c.order, "transport order: 1 or inf")
                      ->default_str("1");
    c.opt_loss = cmd->add_option("--loss", c.loss, "loss family: mv or cvar")
                     ->default_str("mv");
    c.opt_eta = cmd->add_option("--eta", c.eta, "risk/return trade-off weight");
    c.opt_tau = cmd->add_option("--tau", c.tau, "CVaR tail level in (0,1)");
    c.opt_ball_radius = cmd->add_option("--ball-radius", c.ball_radius,
                                        "return-support ball radius (0 = whole space)");
    c.opt_ball_center = cmd->add_option("--ball-center", c.ball_center_text,
                                        "return-support ball center (default: origin)");
    c.opt_cost_p = cmd->add_option("--cost-p", c.cost_p,
                                   "covariate ground-cost norm exponent (2 = Euclidean)");
    c.opt_tol = cmd->add_option("--tol", c.tol, "solver tolerance");
    cmd->add_option("--spec", c.spec_path,
                    "JSON file supplying defaults for any option above");
}

/// Fills options the command line left untouched from the --spec file.
void apply_spec_file(ProblemCli& c)
{
    c.rho_set = c.opt_rho->count() > 0;
    if (c.spec_path.empty())
    {
        return;
    }
    const json j = read_json_file(c.spec_path);

    const auto number = [&](const CLI::Option* opt, const char* key, double& target) {
        if (opt->count() == 0 and j.contains(key))
        {
            target = j.at(key).get<double>();
        }
    };
    const auto text = [&](const CLI::Option* opt, const char* key, std::string& target) {
        if (opt->count() > 0 or not j.contains(key))
        {
            return;
        }
        const json& v = j.at(key);
        if (v.is_array())
        {
            std::string joined;
            for (const auto& e : v)
            {
                if (not joined.empty())
                {
                    joined += ",";
                }
                joined += json(e).dump();
            }
            target = joined;
        }
        else
        {
            target = v.get<std::string>();
        }
    };

    text(c.opt_data, "data", c.data_path);
    text(c.opt_x0, "x0", c.x0_text);
    number(c.opt_gamma, "gamma", c.gamma);
    number(c.opt_rho, "rho", c.rho);
    number(c.opt_eps, "eps", c.eps);
    text(c.opt_order, "order", c.order);
    text(c.opt_loss, "loss", c.loss);
    number(c.opt_eta, "eta", c.eta);
    number(c.opt_tau, "tau", c.tau);
    number(c.opt_ball_radius, "ball_radius", c.ball_radius);
    text(c.opt_ball_center, "ball_center", c.ball_center_text);
    number(c.opt_cost_p, "cost_p", c.cost_p);
    number(c.opt_tol, "tol", c.tol);
    if (not c.rho_set and j.contains("rho"))
    {
        c.rho_set = true;
    }
}

condor::TransportOrder parse_order(const std::string& text)
{
    if (text == "1")
    {
        return condor::TransportOrder::Type1;
    }
    if (text == "inf" or text == "infty")
    {
        return condor::TransportOrder::TypeInfty;
    }
    throw UsageError{"--order must be 1 or inf, got '" + text + "'"};
}

condor::LossSpec parse_loss(const ProblemCli& c)
{
    if (c.loss == "mv" or c.loss == "mean-variance")
    {
        return condor::LossSpec::mean_variance(c.eta);
    }
    if (c.loss == "cvar" or c.loss == "mean-cvar")
    {
        return condor::LossSpec::mean_cvar(c.eta, c.tau);
    }
    throw UsageError{"--loss must be mv or cvar, got '" + c.loss + "'"};
}

condor::GroundCostConfig parse_cost(const ProblemCli& c)
{
    if (c.cost_p == 2.0)
    {
        return condor::GroundCostConfig::squared_euclidean();
    }
    return condor::GroundCostConfig::squared_p_norm(c.cost_p);
}

condor::SolveOptions solve_options(const ProblemCli& c)
{
    condor::SolveOptions opts;
    opts.tol = c.tol;
    return opts;
}

condor::SupportSpec parse_support(const ProblemCli& c, int m)
{
    if (c.ball_radius <= 0.0)
    {
        return condor::SupportSpec::whole_space();
    }
    const Eigen::VectorXd center =
        c.ball_center_text.empty()
            ? Eigen::VectorXd::Zero(m).eval()
            : parse_vector(c.ball_center_text, "--ball-center");
    return condor::SupportSpec::ball(center, c.ball_radius);
}

/// Loads the data set and assembles the full problem statement.
condor::ProblemSpec build_problem(const ProblemCli& c)
{
    require_usage(not c.data_path.empty(), "--data is required");
    require_usage(not c.x0_text.empty(), "--x0 is required");
    require_usage(c.rho_set, "--rho is required");
    const condor::SampleSet data = condor::load_samples_csv(c.data_path);
    const Eigen::VectorXd x0 = parse_vector(c.x0_text, "--x0");
    const int m = data.m();
    return condor::ProblemSpec(
        data, condor::FiberSpec(x0, c.gamma),
        condor::AmbiguitySpec(c.rho, c.eps, parse_order(c.order)), parse_loss(c),
        parse_support(c, m), condor::FeasibleSet::simplex(m), parse_cost(c));
}

// ---------------------------------------------------------------------------
// Subcommand bodies.
// ---------------------------------------------------------------------------

int run_feasibility(const ProblemCli& c)
{
    require_usage(not c.data_path.empty(), "--data is required");
    require_usage(not c.x0_text.empty(), "--x0 is required");
    const condor::SampleSet data = condor::load_samples_csv(c.data_path);
    const Eigen::VectorXd x0 = parse_vector(c.x0_text, "--x0");
    const condor::GeometryStats geo =
        condor::compute_geometry(data, condor::FiberSpec(x0, c.gamma), parse_cost(c));

    json out;
    out["N"] = data.N();
    out["n"] = data.n();
    out["m"] = data.m();
    out["gamma"] = c.gamma;
    out["eps"] = c.eps;
    out["inside"] = geo.I1.size();
    out["outside"] = geo.I2.size();
    out["kappa_min"] = geo.kappa.minCoeff();
    out["kappa_max"] = geo.kappa.maxCoeff();
    out["rho_min"] = condor::rho_min(geo.kappa, c.eps, data.N());
    out["rho_max"] = condor::rho_max(geo.d, geo.I1, data.N());
    if (c.rho_set)
    {
        out["rho"] = c.rho;
        out["eps_lower"] = condor::eps_lower(geo.d, geo.I1, c.rho, data.N());
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_solve(const ProblemCli& c)
{
    const condor::ProblemSpec spec = build_problem(c);
    const condor::Allocation al = condor::solve_allocation(spec, solve_options(c));
    json out;
    out["objective"] = al.objective;
    out["beta"] = al.beta;
    out["alpha"] = vector_to_json(al.alpha);
    std::cout << out.dump(2) << "\n";
    return 0;
}

json certificate_to_json(const condor::DualCertificate& cert)
{
    json out;
    if (cert.has_singleton)
    {
        out["lambda1"] = cert.lambda1;
        out["lambda2"] = cert.lambda2;
        out["theta"] = vector_to_json(cert.theta);
    }
    if (cert.has_fiber)
    {
        out["lambda"] = vector_to_json(cert.lambda);
        out["s"] = vector_to_json(cert.s);
        out["psi"] = vector_to_json(cert.psi);
        out["nu_plus"] = cert.nu_plus;
        out["nu_minus"] = cert.nu_minus;
        out["phi"] = cert.phi;
        out["varphi"] = cert.varphi;
    }
    return out;
}

int run_worst_case(const ProblemCli& c, const std::string& alpha_text, double beta)
{
    require_usage(not alpha_text.empty(), "--alpha is required");
    const condor::ProblemSpec spec = build_problem(c);
    const Eigen::VectorXd alpha = parse_vector(alpha_text, "--alpha");
    const condor::WorstCaseResult wc =
        condor::worst_case_value(alpha, beta, spec, solve_options(c));
    json out;
    out["value"] = wc.value;
    out["alpha"] = vector_to_json(alpha);
    out["beta"] = beta;
    out["certificate"] = certificate_to_json(wc.certificate);
    std::cout << out.dump(2) << "\n";
    return 0;
}

/// Market-shape options shared by `synth` and `backtest`.
struct MarketCli
{
    std::uint64_t seed = 0;
    int T = 1000;
    int assets = 10;
    int factors = 3;
    double predictor_corr = 0.1;
    double idio_vol = 0.01;
};

void add_market_options(CLI::App* cmd, MarketCli& mc)
{
    cmd->add_option("--seed", mc.seed, "generator seed");
    cmd->add_option("--T", mc.T, "number of periods");
    cmd->add_option("--assets", mc.assets, "number of assets");
    cmd->add_option("--factors", mc.factors, "number of predictive factors");
    cmd->add_option("--predictor-corr", mc.predictor_corr,
                    "target predictor/factor correlation in (0,1)");
    cmd->add_option("--idio-vol", mc.idio_vol, "idiosyncratic return volatility");
}

condor::SyntheticConfig market_config(const MarketCli& mc)
{
    condor::SyntheticConfig cfg;
    cfg.seed = mc.seed;
    cfg.T = mc.T;
    cfg.m = mc.assets;
    cfg.n = mc.factors;
    cfg.predictor_corr = mc.predictor_corr;
    cfg.idio_vol = mc.idio_vol;
    return cfg;
}

int run_synth(const MarketCli& mc, const std::string& out_path)
{
    require_usage(not out_path.empty(), "--out is required");
    const condor::SyntheticMarket market = condor::generate_synthetic(market_config(mc));
    condor::write_samples_csv(out_path, market.samples);
    json out;
    out["path"] = out_path;
    out["T"] = market.samples.N();
    out["assets"] = market.samples.m();
    out["factors"] = market.samples.n();
    out["seed"] = mc.seed;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_backtest(const MarketCli& mc, const std::string& family,
                 const std::string& out_dir, int window, int validation, int test,
                 int replications, int assets_per_rep, int jobs, double tol)
{
    require_usage(not out_dir.empty(), "--out is required");
    condor::BacktestConfig cfg;
    cfg.market = market_config(mc);
    if (family == "mv" or family == "mean-variance")
    {
        cfg.family = condor::ModelFamily::MeanVariance;
    }
    else if (family == "cvar" or family == "mean-cvar")
    {
        cfg.family = condor::ModelFamily::MeanCVaR;
    }
    else
    {
        throw UsageError{"--family must be mv or cvar, got '" + family + "'"};
    }
    cfg.window = window;
    cfg.validation = validation;
    cfg.test = test;
    cfg.replications = replications;
    cfg.assets_per_replication = assets_per_rep;
    cfg.seed = mc.seed;
    cfg.jobs = jobs;
    cfg.solve.tol = tol;

    const condor::BacktestReport report = condor::run_backtest(cfg);
    const std::vector<std::string> files = condor::write_report_csv(report, out_dir);

    json out;
    out["out_dir"] = out_dir;
    out["files"] = files;
    out["models"] = report.models;
    out["p_values"] = report.p_values;
    json test_sharpe;
    for (const std::string& model : report.models)
    {
        const auto it = report.test_metrics.find(model);
        if (it != report.test_metrics.end())
        {
            test_sharpe[model] = it->second.sharpe;
        }
    }
    out["test_sharpe"] = test_sharpe;
    out["log"] = report.log;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_validate(const std::string& program_path)
{
    require_usage(not program_path.empty(), "--program is required");
    std::ifstream in(program_path);
    if (not in)
    {
        throw condor::Error(condor::ErrorCode::IoError,
                            "cannot open '" + program_path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const condor::ConicProgram program = condor::program_from_json(buffer.str());
    const std::vector<std::string> issues = condor::validate_program(program);

    json out;
    out["valid"] = issues.empty();
    out["issues"] = issues;
    out["variables"] = program.num_vars;
    out["equalities"] = program.equalities.size();
    out["cones"] = program.cones.size();
    std::cout << out.dump(2) << "\n";
    return issues.empty() ? 0 : 1;
}

int emit_error(const condor::Error& e)
{
    json out;
    out["error"]["code"] = condor::to_string(e.code());
    out["error"]["message"] = e.what();
    if (not e.payload().empty())
    {
        const json payload = json::parse(e.payload(), nullptr, false);
        out["error"]["payload"] = payload.is_discarded() ? json(e.payload()) : payload;
    }
    std::cerr << out.dump(2) << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"conditional distributionally robust portfolio allocation"};
    app.set_version_flag("--version", "condor 0.1.0");
    app.require_subcommand(1);

    ProblemCli feas;
    CLI::App* cmd_feas = app.add_subcommand(
        "feasibility", "fiber geometry, budget thresholds and the implied mass floor");
    add_problem_options(cmd_feas, feas);

    ProblemCli solve;
    CLI::App* cmd_solve =
        app.add_subcommand("solve", "solve the allocation problem on the simplex");
    add_problem_options(cmd_solve, solve);

    ProblemCli worst;
    std::string worst_alpha_text;
    double worst_beta = 0.0;
    CLI::App* cmd_worst = app.add_subcommand(
        "worst-case", "worst-case conditional loss for a frozen decision");
    add_problem_options(cmd_worst, worst);
    cmd_worst->add_option("--alpha", worst_alpha_text,
                          "portfolio weights, comma-separated reals");
    cmd_worst->add_option("--beta", worst_beta, "loss-family level parameter");

    MarketCli synth_market;
    std::string synth_out;
    CLI::App* cmd_synth =
        app.add_subcommand("synth", "generate a synthetic market and write it as CSV");
    add_market_options(cmd_synth, synth_market);
    cmd_synth->add_option("--out", synth_out, "output CSV path");

    MarketCli bt_market;
    std::string bt_family = "mv";
    std::string bt_out;
    int bt_window = 504;
    int bt_validation = 63;
    int bt_test = 63;
    int bt_replications = 8;
    int bt_assets_per_rep = 10;
    int bt_jobs = 1;
    double bt_tol = 1e-8;
    CLI::App* cmd_bt = app.add_subcommand(
        "backtest", "rolling-window model comparison on a synthetic market");
    add_market_options(cmd_bt, bt_market);
    cmd_bt->add_option("--family", bt_family, "model family: mv or cvar")
        ->default_str("mv");
    cmd_bt->add_option("--out", bt_out, "report directory (CSV tables)");
    cmd_bt->add_option("--window", bt_window, "training window length");
    cmd_bt->add_option("--validation", bt_validation, "validation dates per replication");
    cmd_bt->add_option("--test", bt_test, "test dates per replication");
    cmd_bt->add_option("--replications", bt_replications, "number of replications");
    cmd_bt->add_option("--assets-per-rep", bt_assets_per_rep,
                       "assets sampled per replication");
    cmd_bt->add_option("--jobs", bt_jobs, "parallel replications");
    cmd_bt->add_option("--tol", bt_tol, "solver tolerance");

    std::string validate_path;
    CLI::App* cmd_validate =
        app.add_subcommand("validate", "structural check of a conic-program JSON file");
    cmd_validate->add_option("--program", validate_path, "program JSON path");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        if (app.got_subcommand(cmd_feas))
        {
            apply_spec_file(feas);
            return run_feasibility(feas);
        }
        if (app.got_subcommand(cmd_solve))
        {
            apply_spec_file(solve);
            return run_solve(solve);
        }
        if (app.got_subcommand(cmd_worst))
        {
            apply_spec_file(worst);
            return run_worst_case(worst, worst_alpha_text, worst_beta);
        }
        if (app.got_subcommand(cmd_synth))
        {
            return run_synth(synth_market, synth_out);
        }
        if (app.got_subcommand(cmd_bt))
        {
            return run_backtest(bt_market, bt_family, bt_out, bt_window, bt_validation,
                                bt_test, bt_replications, bt_assets_per_rep, bt_jobs,
                                bt_tol);
        }
        if (app.got_subcommand(cmd_validate))
        {
            return run_validate(validate_path);
        }
    }
    catch (const UsageError& u)
    {
        std::cerr << "condor: " << u.message << "\n";
        return 2;
    }
    catch (const condor::Error& e)
    {
        return emit_error(e);
    }
    catch (const std::exception& e)
    {
        json out;
        out["error"]["code"] = "UNKNOWN";
        out["error"]["message"] = e.what();
        std::cerr << out.dump(2) << "\n";
        return 1;
    }
    return 2;
}
