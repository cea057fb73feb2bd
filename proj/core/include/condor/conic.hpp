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
 * @file conic.hpp
 * @brief Solver-agnostic conic program IR and the pluggable solve contract.
 *
 * Programs are linear minimizations over affine equalities plus cone
 * constraints (nonnegative orthant, second-order cones, PSD cones), each
 * stated over affine expressions of the variables. The IR is backend
 * neutral; solve_conic dispatches to the bundled interior-point binding or,
 * for LP-only programs, to an exhaustive-vertex fallback.
 */

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "condor/errors.hpp"

namespace condor
{

/**
 * @brief Sparse affine expression sum_j coeff_j * x_{idx_j} + constant.
 *
 * Terms may repeat an index; canonicalize() merges them. Construction
 * helpers keep builder code close to the algebra it implements.
 */
struct AffineExpr
{
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;

    AffineExpr() = default;
    /*implicit*/ AffineExpr(double c) : constant(c) {}

    static AffineExpr var(int index, double coeff = 1.0)
    {
        AffineExpr e;
        e.terms.emplace_back(index, coeff);
        return e;
    }

    AffineExpr& add(int index, double coeff)
    {
        terms.emplace_back(index, coeff);
        return *this;
    }

    AffineExpr& operator+=(const AffineExpr& other);
    AffineExpr& operator-=(const AffineExpr& other);
    AffineExpr& operator*=(double scale);
    friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
    friend AffineExpr operator*(double s, AffineExpr e) { return e *= s; }
    friend AffineExpr operator-(AffineExpr e) { return e *= -1.0; }

    /// Sorts terms by index and merges duplicates (dropping exact zeros).
    void canonicalize();

    /// Evaluates the expression at a primal point.
    double eval(const Eigen::VectorXd& x) const;
};

enum class ConeKind
{
    Nonnegative,
    SecondOrder,
    PositiveSemidefinite
};

/**
 * @brief One cone constraint block over affine expressions.
 *
 * Nonnegative:          every expression must be >= 0.
 * SecondOrder:          exprs[0] >= || (exprs[1], ..., exprs[k-1]) ||_2.
 * PositiveSemidefinite: exprs holds a full `order` x `order` matrix in
 *                       row-major order; the affine matrix must be
 *                       symmetric (checked by validate_program).
 */
struct ConeBlock
{
    ConeKind kind = ConeKind::Nonnegative;
    int order = 0; ///< matrix order for PSD blocks, 0 otherwise
    std::vector<AffineExpr> exprs;

    static ConeBlock nonnegative(std::vector<AffineExpr> exprs);
    static ConeBlock second_order(std::vector<AffineExpr> exprs);
    static ConeBlock psd(int order, std::vector<AffineExpr> row_major);
};

/**
 * @brief Immutable-once-built conic minimization program.
 *
 * minimize   objective' x
 * subject to e(x) = 0            for each equality expression e
 *            each ConeBlock constraint.
 *
 * Variable names are optional debugging/serialization metadata; builders
 * populate them so solutions can be queried by name.
 */
struct ConicProgram
{
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<AffineExpr> equalities;
    std::vector<ConeBlock> cones;
    std::vector<std::string> var_names;

    /// Index of a named variable; throws InvalidArgument when absent.
    int var(const std::string& name) const;
};

/**
 * @brief Structural validation. Returns an empty list when the program is
 *        well formed; otherwise human-readable diagnostics.
 *
 * Checks: objective/name lengths, variable indices in range, SOC arity,
 * PSD block arity and symmetry of the affine matrix.
 */
std::vector<std::string> validate_program(const ConicProgram& p);

enum class SolveStatus
{
    Optimal,
    Infeasible,
    Unbounded,
    NumericalLimit
};

const char* to_string(SolveStatus s) noexcept;

/// Primal-dual result of a conic solve.
struct Solution
{
    SolveStatus status = SolveStatus::NumericalLimit;
    Eigen::VectorXd primal;
    Eigen::VectorXd dual_eq;                     ///< one multiplier per equality
    std::vector<Eigen::VectorXd> dual_cones;     ///< per cone block
    double objective = 0.0;
    int iterations = 0;

    double value(const ConicProgram& p, const std::string& name) const
    {
        return primal[p.var(name)];
    }
};

enum class SolverBackend
{
    Auto,      ///< CONDOR_SOLVER env var, defaulting to the interior-point binding
    InteriorPoint,
    VertexEnum ///< exhaustive-vertex LP fallback (LP-only programs)
};

struct SolveOptions
{
    double tol = 1e-8;
    int max_iter = 200;
    bool verbose = false;
    SolverBackend backend = SolverBackend::Auto;
};

/**
 * @brief Solves a validated program.
 *
 * Optimal solutions satisfy primal/dual feasibility and relative duality
 * gap within `opts.tol`. Infeasible/Unbounded/NumericalLimit statuses are
 * reported in the Solution, never thrown; structural errors (invalid
 * program, unsupported backend/cone combination) throw.
 */
Solution solve_conic(const ConicProgram& p, const SolveOptions& opts = {});

/// Max violation of all constraints at a primal point (for certification).
double constraint_violation(const ConicProgram& p, const Eigen::VectorXd& x);

/// JSON round-trip (schema documented in docs/conic-program.md).
std::string to_json(const ConicProgram& p, int indent = -1);
ConicProgram program_from_json(const std::string& text);

/**
 * @brief Result of the dense exhaustive-vertex LP fallback.
 */
struct LpResult
{
    bool feasible = false;
    Eigen::VectorXd x;
    double objective = 0.0;
};

/**
 * @brief Minimizes c'x over { A_ub x <= b_ub, A_eq x = b_eq } by enumerating
 *        basic feasible solutions.
 *
 * Intended for tiny LPs (oracle cross-checks); the feasible region must be
 * a polytope (bounded) for the enumeration to be exhaustive. Either matrix
 * may have zero rows.
 */
LpResult solve_lp_vertex_enum(const Eigen::VectorXd& c, const Eigen::MatrixXd& A_ub,
                              const Eigen::VectorXd& b_ub, const Eigen::MatrixXd& A_eq,
                              const Eigen::VectorXd& b_eq);

/**
 * @brief Dual variables recovered from solved reformulation programs.
 *
 * Singleton-fiber programs expose (lambda1, lambda2, theta); fiber programs
 * expose the dual polyhedron variables (lambda, s, nu+, nu-, phi, varphi,
 * psi). Membership of the latter in the dual feasible set is checkable via
 * check_fiber_dual.
 */
struct DualCertificate
{
    bool has_singleton = false;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Eigen::VectorXd theta;

    bool has_fiber = false;
    Eigen::VectorXd lambda; ///< per-sample, nonnegative
    Eigen::VectorXd s;      ///< per-sample, free
    Eigen::VectorXd psi;    ///< per-sample, nonnegative
    double nu_plus = 0.0;
    double nu_minus = 0.0;
    double phi = 0.0;    ///< free scalar
    double varphi = 0.0; ///< nonnegative scalar
};

/**
 * @brief Checks the fiber dual-set inequalities at the certificate point.
 *
 * Verifies, within `tol`: phi - d_i*varphi + psi_i - s_i >= 0 on I1,
 * phi + d_i*varphi + psi_i - s_i >= 0 on I2, nu+ - nu- +
 * (sum_{I1} d_i - N*rho)*varphi - sum_i psi_i >= 0, varphi >= lambda_i >= 0,
 * psi >= 0, nu+- >= 0. Returns human-readable violations (empty = member).
 */
std::vector<std::string> check_fiber_dual(const DualCertificate& cert,
                                          const Eigen::VectorXd& d,
                                          const std::vector<int>& I1,
                                          const std::vector<int>& I2, int N, double rho,
                                          double tol);

} // namespace condor
