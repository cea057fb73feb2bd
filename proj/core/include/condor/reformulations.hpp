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
 * @file reformulations.hpp
 * @brief Tractable dual reformulations of the worst-case conditional loss
 *        as conic programs, plus regime routing and allocation solves.
 *
 * Two problem families are covered. With a singular fiber (gamma = 0) the
 * worst case admits second-order cone reformulations; with a proper fiber
 * (gamma > 0) it admits semidefinite reformulations over a polyhedral dual
 * set. Type-infinity ambiguity balls and a linear-decision-rule two-stage
 * extension have their own builders. All builders emit minimization
 * programs whose optimal value equals (or, where the return support is
 * unbounded, conservatively upper-bounds) the min-max allocation value.
 */

#pragma once

#include <Eigen/Dense>
#include <variant>

#include "condor/conic.hpp"
#include "condor/feasibility.hpp"
#include "condor/geometry.hpp"
#include "condor/types.hpp"

namespace condor
{

/**
 * @brief Full problem statement for one allocation solve.
 *
 * Dimensional consistency is checked at construction; regime validity
 * (rho against rho_min/rho_max, eps against zero) is checked at build /
 * solve time because it depends on the fiber geometry.
 */
struct ProblemSpec
{
    SampleSet data;
    FiberSpec fiber;
    AmbiguitySpec ambiguity;
    LossSpec loss;
    SupportSpec support;
    FeasibleSet feasible;
    GroundCostConfig cost;

    ProblemSpec(SampleSet data_in, FiberSpec fiber_in, AmbiguitySpec ambiguity_in,
                LossSpec loss_in, SupportSpec support_in, FeasibleSet feasible_in,
                GroundCostConfig cost_in = {});

    /// Copy with a different ambiguity budget (used by regime reduction).
    ProblemSpec with_ambiguity(const AmbiguitySpec& a) const;
};

/**
 * @brief Two-stage linear recourse h(y, alpha) = max{ c'u : A alpha + B u <= C y }
 *        with a box-bounded return support for the robust rows.
 *
 * K is the number of recourse constraint rows; the recourse decision u
 * lives in R^m. Finite y_lower/y_upper bounds are required so the support
 * function of the box is finite.
 */
struct RecourseSpec
{
    Eigen::MatrixXd A; ///< K x m, multiplies alpha
    Eigen::MatrixXd B; ///< K x m, multiplies the recourse decision
    Eigen::MatrixXd C; ///< K x m, multiplies the return realization
    Eigen::VectorXd c; ///< recourse profit vector, R^m
    Eigen::VectorXd y_lower;
    Eigen::VectorXd y_upper;

    RecourseSpec(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in, Eigen::MatrixXd C_in,
                 Eigen::VectorXd c_in, Eigen::VectorXd y_lower_in,
                 Eigen::VectorXd y_upper_in);
};

/// Support function of the box [y_lower, y_upper] at z.
double box_support(const Eigen::VectorXd& z, const Eigen::VectorXd& lower,
                   const Eigen::VectorXd& upper);

// ---------------------------------------------------------------------------
// Builders. Each returns a validated ConicProgram with named variables
// ("alpha[j]", "beta", "lambda1", ...). Regime violations throw.
// ---------------------------------------------------------------------------

/// Mean-variance SOCP for the singular fiber (gamma = 0, eps > 0).
ConicProgram build_mv_singleton(const ProblemSpec& spec);

/// Mean-CVaR SOCP for the singular fiber (gamma = 0, eps > 0).
ConicProgram build_cvar_singleton(const ProblemSpec& spec);

/// Mean-variance SDP for a proper fiber (gamma > 0, eps > 0); supports
/// WholeSpace and Ellipsoid return supports.
ConicProgram build_mv_fiber(const ProblemSpec& spec);

/// Mean-CVaR SDP for a proper fiber (gamma > 0, eps > 0).
ConicProgram build_cvar_fiber(const ProblemSpec& spec);

/// Mean-variance SOCP for the type-infinity ambiguity ball.
ConicProgram build_mv_infty(const ProblemSpec& spec);

/// Mean-CVaR companion of build_mv_infty (same index-set skeleton; the
/// per-sample ball suprema are maxima of two linear-plus-norm terms).
ConicProgram build_cvar_infty(const ProblemSpec& spec);

/// Linear-decision-rule SOCP for the two-stage mean-CVaR problem
/// (gamma = 0, eps > 0, box return support from the recourse spec).
ConicProgram build_cvar_tslp(const ProblemSpec& spec, const RecourseSpec& recourse);

// ---------------------------------------------------------------------------
// Evaluation and routing.
// ---------------------------------------------------------------------------

struct WorstCaseResult
{
    double value = 0.0;
    DualCertificate certificate;
};

/**
 * @brief Worst-case conditional expected loss for a fixed decision
 *        (alpha, beta).
 *
 * Builds the regime-appropriate program with (alpha, beta) frozen as
 * constants and returns its optimal value plus the dual certificate read
 * off the solution. eps = 0 with gamma > 0 is internally reduced to the
 * implied positive mass floor; uninformative regimes throw, with the
 * data-independent sup attached to the error payload.
 */
WorstCaseResult worst_case_value(const Eigen::VectorXd& alpha, double beta,
                                 const ProblemSpec& spec, const SolveOptions& opts = {});

/// Marker for parameter regions where the worst case is data-independent.
struct UninformativeRegime
{
};

/**
 * @brief Regime reduction for eps = 0 with a proper fiber.
 *
 * rho < rho_max: returns the spec with eps replaced by the implied floor.
 * rho > rho_max: returns the UninformativeRegime marker.
 * |rho - rho_max| <= tol: throws the boundary-regime error.
 */
std::variant<ProblemSpec, UninformativeRegime> reduce_null_eps(const ProblemSpec& spec,
                                                               double tol = kRegimeTol);

/**
 * @brief Supremum of the loss over the return support at fixed
 *        (alpha, beta) — the uninformative-regime value.
 *
 * WholeSpace support: +infinity unless alpha = 0 (then the finite constant
 * in beta). Ellipsoid support: exact, via the 1-D range of y'alpha over
 * the ellipsoid (the loss depends on y only through that scalar).
 */
double sup_loss_over_support(const SupportSpec& support, const LossSpec& loss,
                             const Eigen::VectorXd& alpha, double beta);

/**
 * @brief End-to-end allocation solve with regime routing.
 *
 * Selects the builder from (transport order, gamma, eps, loss kind),
 * applies the eps = 0 reduction when applicable, solves, and extracts the
 * allocation. Solver failures are propagated as SolverFailure errors with
 * the serialized program attached to the payload.
 */
Allocation solve_allocation(const ProblemSpec& spec, const SolveOptions& opts = {});

/// solve_allocation for the two-stage linear recourse problem.
Allocation solve_allocation_tslp(const ProblemSpec& spec, const RecourseSpec& recourse,
                                 const SolveOptions& opts = {});

} // namespace condor
