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
 * @file test_reformulations.cpp
 * @brief Unit tests for the cone-program builders, regime routing and
 *        allocation solves.
 */

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include "condor/errors.hpp"
#include "condor/oracle.hpp"
#include "condor/reformulations.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace condor;
using condor_test::ScalarDual;
using condor_test::covariate_costs;
using condor_test::random_samples;

namespace
{

/// Fixed five-sample instance shared by most cases below.
struct Instance
{
    SampleSet data;
    Eigen::VectorXd x0;
    double rho = 0.0;

    explicit Instance(std::uint64_t seed, int N = 5, int n = 2, int m = 2)
        : data(make(seed, N, n, m)), x0(Eigen::VectorXd::Zero(n))
    {
        rho = 1.5 + covariate_costs(data, x0).mean();
    }

    static SampleSet make(std::uint64_t seed, int N, int n, int m)
    {
        std::mt19937_64 rng(seed);
        return random_samples(rng, N, n, m, 1.0, 0.05);
    }

    ProblemSpec spec(double gamma, double eps, const LossSpec& loss,
                     double rho_override = -1.0) const
    {
        return ProblemSpec(data, FiberSpec(x0, gamma),
                           AmbiguitySpec(rho_override > 0.0 ? rho_override : rho, eps),
                           loss, SupportSpec::whole_space(),
                           FeasibleSet::simplex(data.m()));
    }
};

int count_socs_of_dim(const ConicProgram& p, std::size_t dim)
{
    int count = 0;
    for (const ConeBlock& c : p.cones)
    {
        if (c.kind == ConeKind::SecondOrder and c.exprs.size() == dim)
        {
            ++count;
        }
    }
    return count;
}

int count_psd_of_order(const ConicProgram& p, int order)
{
    int count = 0;
    for (const ConeBlock& c : p.cones)
    {
        if (c.kind == ConeKind::PositiveSemidefinite and c.order == order)
        {
            ++count;
        }
    }
    return count;
}

bool has_nonneg_block_of_size(const ConicProgram& p, std::size_t rows)
{
    for (const ConeBlock& c : p.cones)
    {
        if (c.kind == ConeKind::Nonnegative and c.exprs.size() == rows)
        {
            return true;
        }
    }
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// Singular-fiber SOCPs.
// ---------------------------------------------------------------------------

TEST_CASE("mean-variance singleton program has the expected cone census")
{
    const Instance ins(101, 3, 2, 2);
    const ConicProgram p = build_mv_singleton(ins.spec(0.0, 0.5, LossSpec::mean_variance(0.3)));
    CHECK(validate_program(p).empty());
    const int N = 3;
    const int m = 2;
    // One norm constraint on the weights plus one small cone per sample.
    CHECK(count_socs_of_dim(p, static_cast<std::size_t>(m + 2)) == 1);
    CHECK(count_socs_of_dim(p, 3) == N);
    // Per-sample linking equalities plus the budget row.
    CHECK(p.equalities.size() == static_cast<std::size_t>(N + 1));
}

TEST_CASE("mean-CVaR singleton program has the expected cone census")
{
    const Instance ins(102, 3, 2, 2);
    const ConicProgram p =
        build_cvar_singleton(ins.spec(0.0, 0.5, LossSpec::mean_cvar(0.3, 0.2)));
    CHECK(validate_program(p).empty());
    const int N = 3;
    const int m = 2;
    CHECK(count_socs_of_dim(p, static_cast<std::size_t>(m + 2)) == 2 * N);
    CHECK(p.equalities.size() == static_cast<std::size_t>(2 * N + 1));
}

TEST_CASE("worst case dominates the nominal loss when the sample is kept")
{
    // One sample at the fiber center with the full mass requirement: the
    // empirical distribution is adversary-feasible, so the solved objective
    // can never undercut the nominal loss at the chosen decisions.
    Eigen::MatrixXd X(1, 1);
    X << 0.0;
    Eigen::MatrixXd Y(1, 2);
    Y << 0.03, -0.01;
    const SampleSet data(X, Y);
    const ProblemSpec spec(data, FiberSpec(Eigen::VectorXd::Zero(1), 0.0),
                           AmbiguitySpec(0.5, 1.0), LossSpec::mean_variance(0.0),
                           SupportSpec::whole_space(), FeasibleSet::simplex(2));
    const Allocation al = solve_allocation(spec);
    const double nominal = eval_loss(Y.row(0).transpose(), al.alpha, al.beta, spec.loss);
    CHECK(al.objective >= nominal - 1e-7);
}

TEST_CASE("singleton objective is nondecreasing in the transport budget")
{
    const Instance ins(7);
    for (const LossSpec& loss :
         {LossSpec::mean_variance(0.3), LossSpec::mean_cvar(0.3, 0.2)})
    {
        const Allocation a1 = solve_allocation(ins.spec(0.0, 0.5, loss));
        const Allocation a2 = solve_allocation(ins.spec(0.0, 0.5, loss, 2.0 * ins.rho));
        CHECK(a2.objective >= a1.objective - 1e-6);
    }
}

TEST_CASE("singleton objective is nonincreasing in the fiber-mass floor")
{
    const Instance ins(8);
    const LossSpec loss = LossSpec::mean_cvar(0.3, 0.2);
    const Allocation a1 = solve_allocation(ins.spec(0.0, 0.3, loss));
    const Allocation a2 = solve_allocation(ins.spec(0.0, 0.6, loss));
    CHECK(a2.objective <= a1.objective + 1e-6);
}

TEST_CASE("near-degenerate CVaR pieces still solve and match the scalar dual")
{
    const Instance ins(9, 4, 2, 2);
    const LossSpec loss(LossKind::MeanCVaR, 0.0, 1.0 - 1e-9);
    const ProblemSpec spec = ins.spec(0.0, 0.5, loss);
    SolveOptions opts;
    opts.tol = 1e-9;
    const Allocation al = solve_allocation(spec, opts);
    const WorstCaseResult wc = worst_case_value(al.alpha, al.beta, spec, opts);
    CHECK(wc.value == doctest::Approx(al.objective).epsilon(1e-5));

    const ScalarDual sd{ins.data.Y(), covariate_costs(ins.data, ins.x0),
                        spec.ambiguity.rho,  spec.ambiguity.eps,
                        loss,                al.alpha,
                        al.beta};
    const double reference = sd.solve();
    CHECK(std::abs(wc.value - reference) <=
          1e-4 * std::max(1.0, std::abs(reference)));
}

TEST_CASE("frozen-decision value agrees with the scalar dual for both losses")
{
    const Instance ins(11, 5, 2, 2);
    SolveOptions opts;
    opts.tol = 1e-9;
    Eigen::VectorXd alpha(2);
    alpha << 0.3, 0.7;
    for (const LossSpec& loss :
         {LossSpec::mean_variance(0.3), LossSpec::mean_cvar(0.3, 0.2)})
    {
        const ProblemSpec spec = ins.spec(0.0, 0.5, loss);
        const WorstCaseResult wc = worst_case_value(alpha, 0.05, spec, opts);
        CHECK(wc.certificate.has_singleton);
        const ScalarDual sd{ins.data.Y(), covariate_costs(ins.data, ins.x0),
                            spec.ambiguity.rho,  spec.ambiguity.eps,
                            loss,                alpha,
                            0.05};
        const double reference = sd.solve();
        CHECK(std::abs(wc.value - reference) <=
              1e-4 * std::max(1.0, std::abs(reference)));
    }
}

TEST_CASE("tiny budgets with all samples on the fiber reproduce the sample average")
{
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 0.05);
    const int N = 4;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N, 1);
    Eigen::MatrixXd Y(N, 2);
    for (int i = 0; i < N; ++i)
    {
        Y(i, 0) = gauss(rng);
        Y(i, 1) = gauss(rng);
    }
    const SampleSet data(X, Y);
    Eigen::VectorXd alpha(2);
    alpha << 0.4, 0.6;
    const double beta = 0.01;
    for (const LossSpec& loss :
         {LossSpec::mean_variance(0.2), LossSpec::mean_cvar(0.2, 0.1)})
    {
        // Entry costs vanish, so the feasibility floor is zero and a budget
        // of 1e-10 moves returns by at most ~1e-5, a sub-tolerance shift.
        const ProblemSpec spec(data, FiberSpec(Eigen::VectorXd::Zero(1), 0.0),
                               AmbiguitySpec(1e-10, 1.0), loss,
                               SupportSpec::whole_space(), FeasibleSet::simplex(2));
        const double value = worst_case_value(alpha, beta, spec).value;
        const double saa =
            saa_conditional_loss(alpha, beta, data, spec.fiber, loss);
        CHECK(std::abs(value - saa) < 1e-3);
        CHECK(value >= saa - 1e-8);
    }
}

// ---------------------------------------------------------------------------
// Proper-fiber SDPs.
// ---------------------------------------------------------------------------

TEST_CASE("fiber programs have the expected block census")
{
    const Instance ins(103, 3, 2, 2);
    const int N = 3;
    const int m = 2;
    const ConicProgram mv = build_mv_fiber(ins.spec(0.8, 0.4, LossSpec::mean_variance(0.3)));
    CHECK(validate_program(mv).empty());
    CHECK(count_psd_of_order(mv, m + 2) == N);
    CHECK(count_psd_of_order(mv, m + 1) == 0);
    CHECK(has_nonneg_block_of_size(mv, static_cast<std::size_t>(4 * N + 4)));

    const ConicProgram cv =
        build_cvar_fiber(ins.spec(0.8, 0.4, LossSpec::mean_cvar(0.3, 0.2)));
    CHECK(validate_program(cv).empty());
    CHECK(count_psd_of_order(cv, m + 1) == 2 * N);
    CHECK(has_nonneg_block_of_size(cv, static_cast<std::size_t>(4 * N + 4)));
}

TEST_CASE("fiber worst case dominates the conditional sample average")
{
    const Instance ins(41, 4, 2, 2);
    const double gamma = 1.0 + covariate_costs(ins.data, ins.x0).minCoeff();
    const GeometryStats geo = compute_geometry(ins.data, FiberSpec(ins.x0, gamma));
    REQUIRE(!geo.I1.empty());
    const double eps = 0.5 * static_cast<double>(geo.I1.size()) / ins.data.N();
    Eigen::VectorXd alpha(2);
    alpha << 0.5, 0.5;
    const double beta = 0.02;
    for (const LossSpec& loss :
         {LossSpec::mean_variance(0.3), LossSpec::mean_cvar(0.3, 0.2)})
    {
        const ProblemSpec spec = ins.spec(gamma, eps, loss);
        const double value = worst_case_value(alpha, beta, spec).value;
        const double saa =
            saa_conditional_loss(alpha, beta, ins.data, spec.fiber, loss);
        CHECK(value >= saa - 1e-6);
    }
}

TEST_CASE("fiber dual certificates satisfy the dual polyhedron")
{
    const Instance ins(42, 4, 2, 2);
    const double gamma = 0.5;
    const ProblemSpec spec = ins.spec(gamma, 0.4, LossSpec::mean_variance(0.3));
    SolveOptions opts;
    opts.tol = 1e-9;
    const Allocation al = solve_allocation(spec, opts);
    const WorstCaseResult wc = worst_case_value(al.alpha, al.beta, spec, opts);
    CHECK(wc.value == doctest::Approx(al.objective).epsilon(1e-4));
    CHECK(wc.certificate.has_fiber);
    const GeometryStats geo = compute_geometry(ins.data, spec.fiber);
    CHECK(check_fiber_dual(wc.certificate, geo.d, geo.I1, geo.I2, ins.data.N(),
                           spec.ambiguity.rho, 1e-6)
              .empty());
}

TEST_CASE("frozen-decision quadratic-certificate program matches the fiber value")
{
    // Independent reference for the mean-variance fiber program: with the
    // decisions frozen, each per-sample supremum constraint
    //   s_i >= sup_y { (y'alpha - beta)^2 - eta y'alpha - lambda_i ||y - y_i||^2 }
    // is one order-(m+1) matrix inequality with the constant rank-one matrix
    // alpha alpha', assembled here directly from the public IR over the same
    // dual polyhedron that check_fiber_dual documents.
    const Instance ins(43, 3, 2, 2);
    const double gamma = 0.7;
    const double eps = 0.4;
    const double eta = 0.3;
    const ProblemSpec spec = ins.spec(gamma, eps, LossSpec::mean_variance(eta));
    Eigen::VectorXd alpha(2);
    alpha << 0.45, 0.55;
    const double beta = 0.03;
    SolveOptions opts;
    opts.tol = 1e-9;
    const double value = worst_case_value(alpha, beta, spec, opts).value;

    const int N = ins.data.N();
    const int m = ins.data.m();
    const GeometryStats geo = compute_geometry(ins.data, spec.fiber);
    ConicProgram p;
    const auto add_var = [&p](const std::string& name) {
        p.var_names.push_back(name);
        return p.num_vars++;
    };
    std::vector<int> lam(static_cast<std::size_t>(N));
    std::vector<int> s(static_cast<std::size_t>(N));
    std::vector<int> psi(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
    {
        lam[static_cast<std::size_t>(i)] = add_var("lambda" + std::to_string(i));
        s[static_cast<std::size_t>(i)] = add_var("s" + std::to_string(i));
        psi[static_cast<std::size_t>(i)] = add_var("psi" + std::to_string(i));
    }
    const int nu_p = add_var("nu_plus");
    const int nu_m = add_var("nu_minus");
    const int phi = add_var("phi");
    const int varphi = add_var("varphi");
    p.objective.assign(static_cast<std::size_t>(p.num_vars), 0.0);
    p.objective[static_cast<std::size_t>(phi)] = 1.0;
    p.objective[static_cast<std::size_t>(nu_p)] = 1.0 / (N * eps);
    p.objective[static_cast<std::size_t>(nu_m)] = -1.0 / N;

    std::vector<AffineExpr> rows;
    rows.push_back(AffineExpr::var(nu_p));
    rows.push_back(AffineExpr::var(nu_m));
    rows.push_back(AffineExpr::var(varphi));
    double d1_sum = 0.0;
    for (int i : geo.I1)
    {
        d1_sum += geo.d[i];
        rows.push_back(AffineExpr::var(phi) - AffineExpr::var(varphi, geo.d[i]) +
                       AffineExpr::var(psi[static_cast<std::size_t>(i)]) -
                       AffineExpr::var(s[static_cast<std::size_t>(i)]));
    }
    for (int i : geo.I2)
    {
        rows.push_back(AffineExpr::var(phi) + AffineExpr::var(varphi, geo.d[i]) +
                       AffineExpr::var(psi[static_cast<std::size_t>(i)]) -
                       AffineExpr::var(s[static_cast<std::size_t>(i)]));
    }
    AffineExpr coupling = AffineExpr::var(nu_p) - AffineExpr::var(nu_m) +
                          AffineExpr::var(varphi, d1_sum - N * spec.ambiguity.rho);
    for (int i = 0; i < N; ++i)
    {
        coupling -= AffineExpr::var(psi[static_cast<std::size_t>(i)]);
        rows.push_back(AffineExpr::var(psi[static_cast<std::size_t>(i)]));
        rows.push_back(AffineExpr::var(varphi) -
                       AffineExpr::var(lam[static_cast<std::size_t>(i)]));
        rows.push_back(AffineExpr::var(lam[static_cast<std::size_t>(i)]));
    }
    rows.push_back(coupling);
    p.cones.push_back(ConeBlock::nonnegative(std::move(rows)));

    const Eigen::MatrixXd aa = alpha * alpha.transpose();
    for (int i = 0; i < N; ++i)
    {
        const Eigen::VectorXd yi = ins.data.y(i);
        const int k = m + 1;
        std::vector<AffineExpr> M(static_cast<std::size_t>(k * k));
        for (int r = 0; r < m; ++r)
        {
            for (int c = 0; c < m; ++c)
            {
                AffineExpr e(-aa(r, c));
                if (r == c)
                {
                    e += AffineExpr::var(lam[static_cast<std::size_t>(i)]);
                }
                M[static_cast<std::size_t>(r * k + c)] = e;
            }
            const AffineExpr off =
                AffineExpr((beta + eta / 2.0) * alpha[r]) -
                AffineExpr::var(lam[static_cast<std::size_t>(i)], yi[r]);
            M[static_cast<std::size_t>(r * k + m)] = off;
            M[static_cast<std::size_t>(m * k + r)] = off;
        }
        M[static_cast<std::size_t>(m * k + m)] =
            AffineExpr::var(s[static_cast<std::size_t>(i)]) +
            AffineExpr::var(lam[static_cast<std::size_t>(i)], yi.squaredNorm()) -
            AffineExpr(beta * beta);
        p.cones.push_back(ConeBlock::psd(k, std::move(M)));
    }
    REQUIRE(validate_program(p).empty());
    const Solution sol = solve_conic(p, opts);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::abs(sol.objective - value) <= 1e-5 * std::max(1.0, std::abs(value)));
}

TEST_CASE("a huge ellipsoidal support reproduces the whole-space value")
{
    const Instance ins(44, 3, 2, 2);
    const double gamma = 0.6;
    const ProblemSpec whole = ins.spec(gamma, 0.4, LossSpec::mean_variance(0.3));
    ProblemSpec ball = whole;
    ball.support = SupportSpec::ball(Eigen::VectorXd::Zero(2), 100.0);
    SolveOptions opts;
    opts.tol = 1e-9;
    const Allocation aw = solve_allocation(whole, opts);
    const Allocation ab = solve_allocation(ball, opts);
    CHECK(std::abs(aw.objective - ab.objective) < 1e-4);
    // Restricting the support can only shrink the inner supremum.
    CHECK(aw.objective >= ab.objective - 1e-6);
}

// ---------------------------------------------------------------------------
// Type-infinity ball SOCPs.
// ---------------------------------------------------------------------------

TEST_CASE("type-infinity worst case pins the single-sample ball supremum")
{
    // One sample at the fiber center, unit budget: the value is the squared
    // reach of the ball, (|v - beta - eta/2| + sqrt(rho)||alpha||)^2 with
    // v = beta = eta = 0 and rho = 1.
    Eigen::MatrixXd X(1, 1);
    X << 0.0;
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(1, 2);
    const SampleSet data(X, Y);
    const ProblemSpec spec(data, FiberSpec(Eigen::VectorXd::Zero(1), 0.0),
                           AmbiguitySpec(1.0, 0.0, TransportOrder::TypeInfty),
                           LossSpec::mean_variance(0.0), SupportSpec::whole_space(),
                           FeasibleSet::simplex(2));
    Eigen::VectorXd e1(2);
    e1 << 1.0, 0.0;
    CHECK(worst_case_value(e1, 0.0, spec).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("type-infinity frozen value equals the per-sample maximum in closed form")
{
    const Instance ins(45, 5, 2, 2);
    const double gamma = 0.01;
    const Eigen::VectorXd c = covariate_costs(ins.data, ins.x0);
    const double rho = c.minCoeff() + 0.5;
    const GeometryStats geo = compute_geometry(ins.data, FiberSpec(ins.x0, gamma));
    const TypeInftyIndex idx = type_infty_index(ins.data, FiberSpec(ins.x0, gamma), rho);
    REQUIRE(!idx.J.empty());
    REQUIRE(idx.J1.empty());
    Eigen::VectorXd alpha(2);
    alpha << 0.4, 0.6;
    const double beta = 0.03;
    const double eta = 0.3;

    ProblemSpec mv(ins.data, FiberSpec(ins.x0, gamma),
                   AmbiguitySpec(rho, 0.0, TransportOrder::TypeInfty),
                   LossSpec::mean_variance(eta), SupportSpec::whole_space(),
                   FeasibleSet::simplex(2));
    double expect = -1e100;
    for (int i : idx.J)
    {
        const double vhat = ins.data.y(i).dot(alpha);
        const double rad = std::sqrt(std::max(0.0, rho - geo.kappa[i]));
        const double t = std::abs(vhat - beta - eta / 2.0) + rad * alpha.norm();
        expect = std::max(expect, t * t - eta * beta - eta * eta / 4.0);
    }
    CHECK(worst_case_value(alpha, beta, mv).value ==
          doctest::Approx(expect).epsilon(1e-6));

    ProblemSpec cv = mv;
    cv.loss = LossSpec::mean_cvar(eta, 0.2);
    double expect2 = -1e100;
    for (int i : idx.J)
    {
        const double vhat = ins.data.y(i).dot(alpha);
        const double rad = std::sqrt(std::max(0.0, rho - geo.kappa[i]));
        const double p1 = -eta * vhat + eta * rad * alpha.norm() + beta;
        const double p2 = -(eta + 5.0) * vhat + (eta + 5.0) * rad * alpha.norm() +
                          (1.0 - 5.0) * beta;
        expect2 = std::max(expect2, std::max(p1, p2));
    }
    CHECK(worst_case_value(alpha, beta, cv).value ==
          doctest::Approx(expect2).epsilon(1e-6));
}

TEST_CASE("type-infinity program census counts the reachable samples")
{
    // m = 3 keeps the per-sample cones (dimension 3) distinct from the
    // shared weight-norm epigraph cone (dimension m + 1).
    const Instance ins(46, 5, 2, 3);
    const double gamma = 0.3;
    const Eigen::VectorXd c = covariate_costs(ins.data, ins.x0);
    const double rho = c.minCoeff() + 0.7;
    const ProblemSpec spec(ins.data, FiberSpec(ins.x0, gamma),
                           AmbiguitySpec(rho, 0.0, TransportOrder::TypeInfty),
                           LossSpec::mean_variance(0.3), SupportSpec::whole_space(),
                           FeasibleSet::simplex(3));
    const TypeInftyIndex idx = type_infty_index(ins.data, spec.fiber, rho);
    REQUIRE(!idx.J.empty());
    const ConicProgram p = build_mv_infty(spec);
    CHECK(validate_program(p).empty());
    const int J = static_cast<int>(idx.J.size());
    CHECK(count_socs_of_dim(p, 3) == J);
    // One shared epigraph cone bounds the weight norm used by every radius.
    CHECK(count_socs_of_dim(p, static_cast<std::size_t>(ins.data.m() + 1)) == 1);
    CHECK(has_nonneg_block_of_size(p, static_cast<std::size_t>(3 * J)));
}

TEST_CASE("type-infinity regime guards fire")
{
    const SampleSet data = Instance::make(47, 3, 1, 2);
    Eigen::VectorXd far(1);
    far << 100.0;
    const Eigen::VectorXd c = covariate_costs(data, far);
    const GeometryStats geo = compute_geometry(data, FiberSpec(far, 0.01));
    // Budget below every entry cost: infeasible adversary.
    try
    {
        const ProblemSpec spec(data, FiberSpec(far, 0.01),
                               AmbiguitySpec(0.5 * geo.kappa.minCoeff(), 0.0,
                                             TransportOrder::TypeInfty),
                               LossSpec::mean_variance(0.3), SupportSpec::whole_space(),
                               FeasibleSet::simplex(2));
        build_mv_infty(spec);
        CHECK(false);
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::RegimeRhoBelowMin);
    }
    // Budget above the cheapest entry yet below the reach threshold: the
    // index set is empty and the program cannot be formed.
    try
    {
        const double rho = geo.kappa.minCoeff() +
                           0.25 * (c.minCoeff() - geo.kappa.minCoeff());
        const ProblemSpec spec(data, FiberSpec(far, 0.01),
                               AmbiguitySpec(rho, 0.0, TransportOrder::TypeInfty),
                               LossSpec::mean_variance(0.3), SupportSpec::whole_space(),
                               FeasibleSet::simplex(2));
        build_mv_infty(spec);
        CHECK(false);
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::EmptyIndexSet);
    }
}

// ---------------------------------------------------------------------------
// Two-stage linear-decision-rule SOCP.
// ---------------------------------------------------------------------------

TEST_CASE("box support function pinned value")
{
    Eigen::VectorXd z(2);
    z << 1.0, -2.0;
    CHECK(box_support(z, Eigen::VectorXd::Constant(2, -1.0),
                      Eigen::VectorXd::Constant(2, 1.0)) ==
          doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("identity recourse reduces to the singular-fiber CVaR program")
{
    const Instance ins(48, 4, 2, 2);
    const int m = 2;
    Eigen::VectorXd profit(m);
    profit << -0.5, -1.2;
    const RecourseSpec rec(Eigen::MatrixXd::Zero(m, m),
                           -Eigen::MatrixXd::Identity(m, m),
                           -Eigen::MatrixXd::Identity(m, m), profit,
                           Eigen::VectorXd::Constant(m, -5.0),
                           Eigen::VectorXd::Constant(m, 5.0));
    const LossSpec loss = LossSpec::mean_cvar(0.3, 0.2);
    const ProblemSpec spec = ins.spec(0.0, 0.5, loss);
    SolveOptions opts;
    opts.tol = 1e-9;
    const Allocation tslp = solve_allocation_tslp(spec, rec, opts);

    ProblemSpec fixed = spec;
    fixed.feasible = FeasibleSet::fixed(profit);
    const Allocation ref = solve_allocation(fixed, opts);
    CHECK(std::abs(tslp.objective - ref.objective) < 1e-6);
}

TEST_CASE("two-stage program census covers cones, links and robust rows")
{
    const Instance ins(49, 3, 2, 2);
    const int N = 3;
    const int m = 2;
    const int K = 2;
    Eigen::MatrixXd A(K, m);
    A << 1, 0, 0, 1;
    Eigen::MatrixXd B(K, m);
    B << -1, 0, 0, -1;
    Eigen::MatrixXd C(K, m);
    C << -1, 0, 0, -1;
    Eigen::VectorXd profit(m);
    profit << -1.0, -1.0;
    const RecourseSpec rec(A, B, C, profit, Eigen::VectorXd::Constant(m, -2.0),
                           Eigen::VectorXd::Constant(m, 2.0));
    const ProblemSpec spec = ins.spec(0.0, 0.5, LossSpec::mean_cvar(0.3, 0.2));
    const ConicProgram p = build_cvar_tslp(spec, rec);
    CHECK(validate_program(p).empty());
    CHECK(count_socs_of_dim(p, static_cast<std::size_t>(m + 2)) == 2 * N);
    // Per-sample links, per-robust-row box-dual links, and the budget.
    CHECK(p.equalities.size() == static_cast<std::size_t>(2 * N + K * m + 1));
    CHECK(has_nonneg_block_of_size(
        p, static_cast<std::size_t>(1 + 3 * N + K * (2 * m + 1))));
}

// ---------------------------------------------------------------------------
// Regime routing.
// ---------------------------------------------------------------------------

TEST_CASE("null mass floor reduction pinned example")
{
    // Two samples at the center of a unit fiber: exit costs (1, 1), exit
    // threshold 1. With budget 0.25 at least 0.75 of the mass must remain.
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 1);
    Eigen::MatrixXd Y(2, 2);
    Y << 0.02, -0.01, -0.03, 0.04;
    const SampleSet data(X, Y);
    const ProblemSpec spec(data, FiberSpec(Eigen::VectorXd::Zero(1), 1.0),
                           AmbiguitySpec(0.25, 0.0), LossSpec::mean_variance(0.3),
                           SupportSpec::whole_space(), FeasibleSet::simplex(2));
    const auto routed = reduce_null_eps(spec);
    REQUIRE(std::holds_alternative<ProblemSpec>(routed));
    CHECK(std::get<ProblemSpec>(routed).ambiguity.eps ==
          doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("null mass floor reduction routes large budgets to the marker")
{
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 1);
    Eigen::MatrixXd Y(2, 2);
    Y << 0.02, -0.01, -0.03, 0.04;
    const SampleSet data(X, Y);
    const ProblemSpec spec(data, FiberSpec(Eigen::VectorXd::Zero(1), 1.0),
                           AmbiguitySpec(2.0, 0.0), LossSpec::mean_variance(0.3),
                           SupportSpec::whole_space(), FeasibleSet::simplex(2));
    CHECK(std::holds_alternative<UninformativeRegime>(reduce_null_eps(spec)));
}

TEST_CASE("null mass floor reduction rejects the boundary budget")
{
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 1);
    Eigen::MatrixXd Y(2, 2);
    Y << 0.02, -0.01, -0.03, 0.04;
    const SampleSet data(X, Y);
    // Exit threshold is exactly 1 here.
    const ProblemSpec spec(data, FiberSpec(Eigen::VectorXd::Zero(1), 1.0),
                           AmbiguitySpec(1.0, 0.0), LossSpec::mean_variance(0.3),
                           SupportSpec::whole_space(), FeasibleSet::simplex(2));
    try
    {
        reduce_null_eps(spec);
        CHECK(false);
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::RegimeBoundary);
    }
}

TEST_CASE("reduced and direct solves coincide")
{
    const Instance ins(51, 5, 2, 2);
    const double gamma = 3.0;
    const GeometryStats geo = compute_geometry(ins.data, FiberSpec(ins.x0, gamma));
    const double cap = rho_max(geo.d, geo.I1, ins.data.N());
    REQUIRE(cap > 0.0);
    const ProblemSpec spec(ins.data, FiberSpec(ins.x0, gamma),
                           AmbiguitySpec(cap / 2.0, 0.0), LossSpec::mean_variance(0.3),
                           SupportSpec::whole_space(), FeasibleSet::simplex(2));
    const auto routed = reduce_null_eps(spec);
    REQUIRE(std::holds_alternative<ProblemSpec>(routed));
    SolveOptions opts;
    opts.tol = 1e-9;
    const Allocation direct = solve_allocation(spec, opts);
    const Allocation manual = solve_allocation(std::get<ProblemSpec>(routed), opts);
    CHECK(std::abs(direct.objective - manual.objective) < 1e-6);
}

TEST_CASE("support supremum is infinite on the whole space, finite on ellipsoids")
{
    Eigen::VectorXd alpha(2);
    alpha << 0.5, 0.5;
    CHECK(std::isinf(sup_loss_over_support(SupportSpec::whole_space(),
                                           LossSpec::mean_variance(0.3), alpha, 0.0)));
    // Weights summing to zero make the quadratic constant in y.
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    CHECK(sup_loss_over_support(SupportSpec::whole_space(), LossSpec::mean_variance(0.0),
                                zero, 0.25) == doctest::Approx(0.0625).epsilon(1e-12));

    const SupportSpec ball = SupportSpec::ball(Eigen::VectorXd::Zero(2), 1.5);
    for (const LossSpec& loss :
         {LossSpec::mean_variance(0.4), LossSpec::mean_cvar(0.4, 0.2)})
    {
        const double sup = sup_loss_over_support(ball, loss, alpha, 0.1);
        double grid = -1e100;
        const int steps = 2000;
        for (int k = 0; k <= steps; ++k)
        {
            const double angle = 2.0 * M_PI * k / steps;
            Eigen::VectorXd y(2);
            y << 1.5 * std::cos(angle), 1.5 * std::sin(angle);
            grid = std::max(grid, eval_loss(y, alpha, 0.1, loss));
            grid = std::max(grid, eval_loss(0.3 * y, alpha, 0.1, loss));
        }
        CHECK(sup >= grid - 1e-9);
        CHECK(sup - grid < 1e-3);
    }
}

TEST_CASE("degenerate fiber with no mass floor is uninformative")
{
    const Instance ins(52, 3, 2, 2);
    try
    {
        build_mv_singleton(ins.spec(0.0, 0.0, LossSpec::mean_variance(0.3)));
        CHECK(false);
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::RegimeUninformative);
    }
}

// ---------------------------------------------------------------------------
// Allocation solves.
// ---------------------------------------------------------------------------

TEST_CASE("symmetric instances keep a permutation-invariant objective")
{
    std::mt19937_64 rng(61);
    std::normal_distribution<double> gauss(0.0, 0.05);
    const int N = 4;
    Eigen::MatrixXd X(N, 1);
    Eigen::MatrixXd Y(N, 2);
    for (int i = 0; i < N; ++i)
    {
        X(i, 0) = 0.5 * i;
        const double r = gauss(rng);
        Y(i, 0) = r;
        Y(i, 1) = r; // identical across assets
    }
    const SampleSet data(X, Y);
    const ProblemSpec spec(data, FiberSpec(Eigen::VectorXd::Zero(1), 0.0),
                           AmbiguitySpec(2.0, 0.5), LossSpec::mean_variance(0.3),
                           SupportSpec::whole_space(), FeasibleSet::simplex(2));
    SolveOptions opts;
    opts.tol = 1e-9;
    const Allocation al = solve_allocation(spec, opts);
    Eigen::VectorXd swapped(2);
    swapped << al.alpha[1], al.alpha[0];
    const double direct = worst_case_value(al.alpha, al.beta, spec, opts).value;
    const double mirrored = worst_case_value(swapped, al.beta, spec, opts).value;
    CHECK(std::abs(direct - mirrored) < 1e-6);
    CHECK(std::abs(direct - al.objective) < 1e-6);
}

TEST_CASE("allocation matches a dense decision grid on a dominated instance")
{
    std::mt19937_64 rng(62);
    std::normal_distribution<double> gauss(0.0, 0.04);
    const int N = 4;
    Eigen::MatrixXd X(N, 1);
    Eigen::MatrixXd Y(N, 2);
    for (int i = 0; i < N; ++i)
    {
        X(i, 0) = 0.3 * gauss(rng);
        const double noise = gauss(rng);
        Y(i, 0) = 0.02 + noise; // same risk, strictly higher return
        Y(i, 1) = -0.01 + noise;
    }
    const SampleSet data(X, Y);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd costs = covariate_costs(data, x0);
    const double eps = 0.5;
    // A near-floor budget: with little room to move returns, the adversary
    // cannot neutralize the 0.03 mean spread between the two assets, so the
    // dominant asset must collect almost all the weight.
    const double rho = rho_min(costs, eps, N) + 2e-4;
    const LossSpec loss = LossSpec::mean_variance(0.5);
    const ProblemSpec spec(data, FiberSpec(x0, 0.0), AmbiguitySpec(rho, eps), loss,
                           SupportSpec::whole_space(), FeasibleSet::simplex(2));
    SolveOptions opts;
    opts.tol = 1e-9;
    const Allocation al = solve_allocation(spec, opts);

    // Exhaustive reference over the weight simplex (step 0.01), with the
    // level set by ternary search on the independent scalar dual.
    double grid_best = 1e100;
    for (int k = 0; k <= 100; ++k)
    {
        Eigen::VectorXd w(2);
        w << k / 100.0, 1.0 - k / 100.0;
        ScalarDual sd{data.Y(), costs, rho, eps, loss, w, 0.0};
        double lo = -1.0;
        double hi = 1.0;
        for (int it = 0; it < 60; ++it)
        {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            sd.beta = m1;
            const double v1 = sd.solve();
            sd.beta = m2;
            const double v2 = sd.solve();
            if (v1 < v2)
            {
                hi = m2;
            }
            else
            {
                lo = m1;
            }
        }
        sd.beta = 0.5 * (lo + hi);
        grid_best = std::min(grid_best, sd.solve());
    }
    CHECK(al.objective <= grid_best + 1e-5);
    CHECK(grid_best - al.objective <= 1e-3);
    CHECK(al.alpha[0] > 0.9); // the dominated asset gets almost nothing
}

TEST_CASE("allocation solves refuse budgets at or below the feasibility floor")
{
    const Instance ins(63, 4, 2, 2);
    const Eigen::VectorXd costs = covariate_costs(ins.data, ins.x0);
    const double floor = rho_min(costs, 0.5, ins.data.N());
    REQUIRE(floor > 0.0);
    try
    {
        solve_allocation(ins.spec(0.0, 0.5, LossSpec::mean_variance(0.3), 0.5 * floor));
        CHECK(false);
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::RegimeRhoBelowMin);
    }
}
