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

// Bridge from the conic IR to the bundled Clarabel interior-point solver.
//
// Clarabel solves  min q'x  s.t.  A x + s = b,  s in K  with K a product
// of zero / nonnegative / second-order / PSD-triangle cones. Equalities
// map to the zero cone; every cone block maps to slack rows s = b - A x,
// i.e. A carries the negated expression coefficients and b the constants.
// PSD blocks are passed in scaled-triangle form: the upper triangle stacked
// column by column with off-diagonal entries scaled by sqrt(2).

#include <cmath>
#include <cstdint>
#include <vector>

#include "condor/conic.hpp"
#include "solver_backends.hpp"

extern "C"
{
    struct CondorFfiCone
    {
        std::int32_t kind; // 0 zero, 1 nonneg, 2 soc, 3 psd-triangle
        std::int64_t dim;  // rows for 0-2; matrix order for 3
    };

    std::int32_t clarabel_ffi_solve(std::int64_t nvars, std::int64_t nrows,
                                    const double* q, const std::int64_t* colptr,
                                    const std::int64_t* rowval, const double* nzval,
                                    std::int64_t nnz, const double* b,
                                    const CondorFfiCone* cones, std::int64_t ncones,
                                    double tol, std::int32_t max_iter,
                                    std::int32_t verbose, double* x_out, double* z_out,
                                    double* s_out, double* obj_out,
                                    std::int32_t* iters_out);
}

namespace condor
{
namespace detail
{
namespace
{

struct Triplet
{
    int row;
    int col;
    double value;
};

/// Appends one slack row  s_row = b_row - sum coeff * x  for expression e.
void append_slack_row(const AffineExpr& e, double scale, int row,
                      std::vector<Triplet>& triplets, std::vector<double>& b)
{
    AffineExpr canon = e;
    canon.canonicalize();
    for (const auto& [idx, coeff] : canon.terms)
    {
        triplets.push_back({row, idx, -coeff * scale});
    }
    b.push_back(canon.constant * scale);
}

/// Appends one equality row  sum coeff * x = -constant  (zero-cone slack).
void append_equality_row(const AffineExpr& e, int row, std::vector<Triplet>& triplets,
                         std::vector<double>& b)
{
    AffineExpr canon = e;
    canon.canonicalize();
    for (const auto& [idx, coeff] : canon.terms)
    {
        triplets.push_back({row, idx, coeff});
    }
    b.push_back(-canon.constant);
}

} // namespace

Solution solve_interior_point(const ConicProgram& p, const SolveOptions& opts)
{
    const double sqrt2 = std::sqrt(2.0);
    std::vector<Triplet> triplets;
    std::vector<double> b;
    std::vector<CondorFfiCone> cones;

    int row = 0;
    const int n_eq = static_cast<int>(p.equalities.size());
    if (n_eq > 0)
    {
        for (const AffineExpr& e : p.equalities)
        {
            append_equality_row(e, row++, triplets, b);
        }
        cones.push_back({0, n_eq});
    }
    // Per-block slack row ranges, for dual extraction afterwards.
    std::vector<std::pair<int, int>> block_rows;
    for (const ConeBlock& blk : p.cones)
    {
        const int first = row;
        switch (blk.kind)
        {
        case ConeKind::Nonnegative:
            for (const AffineExpr& e : blk.exprs)
            {
                append_slack_row(e, 1.0, row++, triplets, b);
            }
            cones.push_back({1, static_cast<std::int64_t>(blk.exprs.size())});
            break;
        case ConeKind::SecondOrder:
            for (const AffineExpr& e : blk.exprs)
            {
                append_slack_row(e, 1.0, row++, triplets, b);
            }
            cones.push_back({2, static_cast<std::int64_t>(blk.exprs.size())});
            break;
        case ConeKind::PositiveSemidefinite:
            // Upper triangle stacked column by column, off-diagonals
            // scaled by sqrt(2).
            for (int c = 0; c < blk.order; ++c)
            {
                for (int r = 0; r <= c; ++r)
                {
                    const double scale = r == c ? 1.0 : sqrt2;
                    append_slack_row(blk.exprs[static_cast<std::size_t>(
                                         r * blk.order + c)],
                                     scale, row++, triplets, b);
                }
            }
            cones.push_back({3, blk.order});
            break;
        }
        block_rows.emplace_back(first, row);
    }
    const int nrows = row;

    // Triplets -> CSC.
    std::vector<std::int64_t> colptr(static_cast<std::size_t>(p.num_vars) + 1, 0);
    for (const Triplet& t : triplets)
    {
        ++colptr[static_cast<std::size_t>(t.col) + 1];
    }
    for (int c = 0; c < p.num_vars; ++c)
    {
        colptr[static_cast<std::size_t>(c) + 1] += colptr[static_cast<std::size_t>(c)];
    }
    std::vector<std::int64_t> rowval(triplets.size());
    std::vector<double> nzval(triplets.size());
    {
        std::vector<std::int64_t> next(colptr.begin(), colptr.end() - 1);
        // Triplets were appended row by row, so within each column the
        // row indices come out sorted, as CSC requires.
        for (const Triplet& t : triplets)
        {
            const std::int64_t slot = next[static_cast<std::size_t>(t.col)]++;
            rowval[static_cast<std::size_t>(slot)] = t.row;
            nzval[static_cast<std::size_t>(slot)] = t.value;
        }
    }

    std::vector<double> x(static_cast<std::size_t>(p.num_vars), 0.0);
    std::vector<double> z(static_cast<std::size_t>(std::max(nrows, 1)), 0.0);
    std::vector<double> s(static_cast<std::size_t>(std::max(nrows, 1)), 0.0);
    double obj = 0.0;
    std::int32_t iters = 0;

    const std::int32_t status = clarabel_ffi_solve(
        p.num_vars, nrows, p.objective.data(), colptr.data(), rowval.data(),
        nzval.data(), static_cast<std::int64_t>(nzval.size()), b.data(), cones.data(),
        static_cast<std::int64_t>(cones.size()), opts.tol, opts.max_iter,
        opts.verbose ? 1 : 0, x.data(), z.data(), s.data(), &obj, &iters);

    Solution sol;
    sol.iterations = iters;
    switch (status)
    {
    case 0: // solved
    case 1: // solved to reduced accuracy
        sol.status = SolveStatus::Optimal;
        break;
    case 2:
        sol.status = SolveStatus::Infeasible;
        break;
    case 3:
        sol.status = SolveStatus::Unbounded;
        break;
    case 4:
    case 5:
        sol.status = SolveStatus::NumericalLimit;
        break;
    default:
        throw Error(ErrorCode::SolverFailure,
                    "interior-point backend failed to set up the problem", to_json(p));
    }

    sol.primal = Eigen::Map<Eigen::VectorXd>(x.data(), p.num_vars);
    sol.objective = obj;
    sol.dual_eq = Eigen::VectorXd::Zero(n_eq);
    for (int r = 0; r < n_eq; ++r)
    {
        sol.dual_eq[r] = z[static_cast<std::size_t>(r)];
    }
    for (std::size_t bidx = 0; bidx < p.cones.size(); ++bidx)
    {
        const auto [first, last] = block_rows[bidx];
        const ConeBlock& blk = p.cones[bidx];
        if (blk.kind == ConeKind::PositiveSemidefinite)
        {
            // Expand the scaled triangle back to the full row-major matrix
            // so the dual lines up with the block's expression layout.
            Eigen::VectorXd full(blk.order * blk.order);
            int k = first;
            for (int c = 0; c < blk.order; ++c)
            {
                for (int r = 0; r <= c; ++r)
                {
                    const double scale = r == c ? 1.0 : 1.0 / sqrt2;
                    const double v = z[static_cast<std::size_t>(k++)] * scale;
                    full[r * blk.order + c] = v;
                    full[c * blk.order + r] = v;
                }
            }
            sol.dual_cones.push_back(std::move(full));
        }
        else
        {
            Eigen::VectorXd slice(last - first);
            for (int r = first; r < last; ++r)
            {
                slice[r - first] = z[static_cast<std::size_t>(r)];
            }
            sol.dual_cones.push_back(std::move(slice));
        }
    }
    return sol;
}

} // namespace detail
} // namespace condor
