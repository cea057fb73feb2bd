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

// Exhaustive basic-solution enumeration for tiny LPs. Every vertex of a
// polytope is the intersection of num_vars linearly independent constraint
// hyperplanes, so enumerating all size-num_vars row subsets and keeping the
// feasible intersections visits every vertex. Deliberately independent of
// the interior-point backend: it is the cross-check oracle.

#include <limits>
#include <vector>

#include "condor/conic.hpp"
#include "solver_backends.hpp"

namespace condor
{
namespace
{

constexpr double kFeasTol = 1e-9;

bool feasible_point(const Eigen::VectorXd& x, const Eigen::MatrixXd& A_ub,
                    const Eigen::VectorXd& b_ub, const Eigen::MatrixXd& A_eq,
                    const Eigen::VectorXd& b_eq)
{
    if (A_ub.rows() > 0 and ((A_ub * x - b_ub).array() > kFeasTol).any())
    {
        return false;
    }
    if (A_eq.rows() > 0 and ((A_eq * x - b_eq).array().abs() > kFeasTol).any())
    {
        return false;
    }
    return true;
}

} // namespace

LpResult solve_lp_vertex_enum(const Eigen::VectorXd& c, const Eigen::MatrixXd& A_ub,
                              const Eigen::VectorXd& b_ub, const Eigen::MatrixXd& A_eq,
                              const Eigen::VectorXd& b_eq)
{
    const int n = static_cast<int>(c.size());
    detail::require(n >= 1, ErrorCode::InvalidArgument,
                    "solve_lp_vertex_enum: empty objective");
    detail::require(A_ub.rows() == b_ub.size() and A_eq.rows() == b_eq.size(),
                    ErrorCode::DimensionMismatch,
                    "solve_lp_vertex_enum: rows of A and length of b differ");
    detail::require((A_ub.rows() == 0 or A_ub.cols() == n) and
                        (A_eq.rows() == 0 or A_eq.cols() == n),
                    ErrorCode::DimensionMismatch,
                    "solve_lp_vertex_enum: constraint column count != num vars");

    const int rows_ub = static_cast<int>(A_ub.rows());
    const int rows_total = rows_ub + static_cast<int>(A_eq.rows());
    detail::require(rows_total >= n, ErrorCode::InvalidArgument,
                    "solve_lp_vertex_enum: fewer constraints than variables (the "
                    "region cannot be a polytope)");

    const auto row_of = [&](int r) -> Eigen::RowVectorXd {
        return r < rows_ub ? A_ub.row(r) : A_eq.row(r - rows_ub);
    };
    const auto rhs_of = [&](int r) -> double {
        return r < rows_ub ? b_ub[r] : b_eq[r - rows_ub];
    };

    LpResult best;
    best.objective = std::numeric_limits<double>::infinity();

    std::vector<int> pick(static_cast<std::size_t>(n));
    Eigen::MatrixXd B(n, n);
    Eigen::VectorXd rhs(n);
    const auto visit = [&]() {
        for (int k = 0; k < n; ++k)
        {
            B.row(k) = row_of(pick[static_cast<std::size_t>(k)]);
            rhs[k] = rhs_of(pick[static_cast<std::size_t>(k)]);
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        if (!lu.isInvertible())
        {
            return;
        }
        const Eigen::VectorXd x = lu.solve(rhs);
        if (!x.allFinite() or !feasible_point(x, A_ub, b_ub, A_eq, b_eq))
        {
            return;
        }
        const double obj = c.dot(x);
        if (!best.feasible or obj < best.objective - 1e-15)
        {
            best.feasible = true;
            best.objective = obj;
            best.x = x;
        }
    };

    // Lexicographic enumeration of all size-n subsets of the rows.
    for (int k = 0; k < n; ++k)
    {
        pick[static_cast<std::size_t>(k)] = k;
    }
    while (true)
    {
        visit();
        int k = n - 1;
        while (k >= 0 and pick[static_cast<std::size_t>(k)] == rows_total - n + k)
        {
            --k;
        }
        if (k < 0)
        {
            break;
        }
        ++pick[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < n; ++j)
        {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    if (!best.feasible)
    {
        best.objective = 0.0;
    }
    return best;
}

namespace detail
{

Solution solve_vertex(const ConicProgram& p, const SolveOptions& /*opts*/)
{
    int rows_ub = 0;
    for (const ConeBlock& blk : p.cones)
    {
        detail::require(blk.kind == ConeKind::Nonnegative, ErrorCode::UnsupportedProgram,
                        "solve_vertex: only nonnegative blocks are supported");
        rows_ub += static_cast<int>(blk.exprs.size());
    }
    Eigen::MatrixXd A_ub = Eigen::MatrixXd::Zero(rows_ub, p.num_vars);
    Eigen::VectorXd b_ub(rows_ub);
    int r = 0;
    for (const ConeBlock& blk : p.cones)
    {
        for (AffineExpr e : blk.exprs)
        {
            e.canonicalize();
            // e(x) >= 0  <=>  -coeffs . x <= constant.
            for (const auto& [idx, coeff] : e.terms)
            {
                A_ub(r, idx) = -coeff;
            }
            b_ub[r] = e.constant;
            ++r;
        }
    }
    Eigen::MatrixXd A_eq = Eigen::MatrixXd::Zero(static_cast<int>(p.equalities.size()),
                                                 p.num_vars);
    Eigen::VectorXd b_eq(static_cast<int>(p.equalities.size()));
    for (std::size_t q = 0; q < p.equalities.size(); ++q)
    {
        AffineExpr e = p.equalities[q];
        e.canonicalize();
        for (const auto& [idx, coeff] : e.terms)
        {
            A_eq(static_cast<int>(q), idx) = coeff;
        }
        b_eq[static_cast<int>(q)] = -e.constant;
    }
    const Eigen::VectorXd c =
        Eigen::Map<const Eigen::VectorXd>(p.objective.data(), p.num_vars);

    const LpResult lp = solve_lp_vertex_enum(c, A_ub, b_ub, A_eq, b_eq);
    Solution sol;
    if (!lp.feasible)
    {
        sol.status = SolveStatus::Infeasible;
        sol.primal = Eigen::VectorXd::Zero(p.num_vars);
        return sol;
    }
    sol.status = SolveStatus::Optimal;
    sol.primal = lp.x;
    sol.objective = lp.objective;
    sol.dual_eq = Eigen::VectorXd::Zero(static_cast<int>(p.equalities.size()));
    for (const ConeBlock& blk : p.cones)
    {
        sol.dual_cones.push_back(
            Eigen::VectorXd::Zero(static_cast<int>(blk.exprs.size())));
    }
    return sol;
}

} // namespace detail
} // namespace condor
