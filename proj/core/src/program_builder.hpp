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
 * @file program_builder.hpp
 * @brief Internal program-assembly helpers shared by the reformulation and
 *        backtest translation units. Not installed.
 */

#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "condor/conic.hpp"
#include "condor/errors.hpp"
#include "condor/types.hpp"

namespace condor::build_detail
{

/// Incremental program assembly with named variables and a sparse
/// objective.
struct Builder
{
    ConicProgram p;
    std::vector<std::pair<int, double>> cost;

    int add_var(const std::string& name)
    {
        p.var_names.push_back(name);
        return p.num_vars++;
    }
    std::vector<int> add_vec(const std::string& stem, int k)
    {
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
        {
            idx[static_cast<std::size_t>(i)] = add_var(stem + "[" + std::to_string(i) +
                                                       "]");
        }
        return idx;
    }
    void add_cost(int var, double coeff) { cost.emplace_back(var, coeff); }

    ConicProgram finalize()
    {
        p.objective.assign(static_cast<std::size_t>(p.num_vars), 0.0);
        for (const auto& [var, coeff] : cost)
        {
            p.objective[static_cast<std::size_t>(var)] += coeff;
        }
        return std::move(p);
    }
};

/// The decisions as expressions: variables for allocation solves,
/// constants when evaluating a fixed (alpha, beta).
struct Decisions
{
    std::vector<AffineExpr> alpha;
    AffineExpr beta;
};

/// Allocates (alpha, beta) as variables and appends the feasible-set rows.
inline Decisions decision_variables(Builder& b, const FeasibleSet& feasible)
{
    Decisions d;
    const std::vector<int> a = b.add_vec("alpha", feasible.m());
    const int beta = b.add_var("beta");
    for (int j = 0; j < feasible.m(); ++j)
    {
        d.alpha.push_back(AffineExpr::var(a[static_cast<std::size_t>(j)]));
    }
    d.beta = AffineExpr::var(beta);

    std::vector<AffineExpr> rows;
    AffineExpr budget;
    for (int j = 0; j < feasible.m(); ++j)
    {
        const AffineExpr& aj = d.alpha[static_cast<std::size_t>(j)];
        rows.push_back(aj - feasible.lower()[j]);
        rows.push_back(AffineExpr(feasible.upper()[j]) - aj);
        budget += aj;
    }
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(rows)));
    if (feasible.budget())
    {
        b.p.equalities.push_back(budget - 1.0);
    }
    return d;
}

inline Decisions decision_constants(const Eigen::VectorXd& alpha, double beta)
{
    Decisions d;
    for (int j = 0; j < alpha.size(); ++j)
    {
        d.alpha.emplace_back(alpha[j]);
    }
    d.beta = AffineExpr(beta);
    return d;
}

inline AffineExpr dot(const Eigen::VectorXd& w, const std::vector<AffineExpr>& v)
{
    AffineExpr e;
    for (std::size_t j = 0; j < v.size(); ++j)
    {
        e += w[static_cast<int>(j)] * v[j];
    }
    return e;
}

inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline Solution solve_or_throw(const ConicProgram& p, const SolveOptions& opts)
{
    const Solution sol = solve_conic(p, opts);
    if (sol.status != SolveStatus::Optimal)
    {
        throw Error(ErrorCode::SolverFailure,
                    std::string("conic solve ended with status ") +
                        to_string(sol.status),
                    to_json(p));
    }
    return sol;
}

inline Allocation extract_allocation(const ConicProgram& p, const Solution& sol,
                                     const FeasibleSet& feasible)
{
    Allocation out;
    out.alpha.resize(feasible.m());
    for (int j = 0; j < feasible.m(); ++j)
    {
        out.alpha[j] = sol.value(p, "alpha[" + std::to_string(j) + "]");
    }
    out.beta = sol.value(p, "beta");
    out.objective = sol.objective;
    if (feasible.violation(out.alpha) > 1e-7)
    {
        out.alpha = feasible.project(out.alpha);
    }
    return out;
}

} // namespace condor::build_detail
