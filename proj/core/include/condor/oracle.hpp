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
 * @file oracle.hpp
 * @brief Brute-force adversary oracle and the conditional SAA evaluator.
 *
 * The oracle searches discrete adversary distributions directly — fiber
 * masses on a simplex-slice grid, return atoms on a box grid — and
 * certifies a *lower bound* on the worst-case conditional expected loss.
 * It shares no code with the conic reformulation path, so agreement
 * between the two is meaningful evidence. Limiting constructions (mass
 * moved infinitesimally outside the fiber) are represented at their
 * limiting transport cost, which preserves the lower-bound guarantee.
 */

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "condor/geometry.hpp"
#include "condor/reformulations.hpp"
#include "condor/types.hpp"

namespace condor
{

/// Axis-aligned box discretization of the return space.
struct GridSpec
{
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    int points_per_dim = 31;

    GridSpec() = default;
    GridSpec(Eigen::VectorXd lower_in, Eigen::VectorXd upper_in, int points);

    /// Symmetric cube [-half_width, half_width]^m.
    static GridSpec cube(int m, double half_width, int points);
};

/// One transported atom of a per-sample plan.
struct TransportAtom
{
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    double mass = 0.0;     ///< within sample i's unit budget
    double cost = 0.0;     ///< ground cost from (x_i, y_i) to (x, y)
    bool in_fiber = false; ///< whether x lies in the fiber
};

/**
 * @brief Discrete adversary distribution in per-sample transport-plan form.
 *
 * Sample i's plan moves its 1/N mass across `plans[i]` (atom masses sum to
 * one). `fiber_mass[i]` is the in-fiber fraction; `value` is the realized
 * conditional expected loss.
 */
struct WorstCaseDistribution
{
    std::vector<std::vector<TransportAtom>> plans;
    Eigen::VectorXd fiber_mass;
    double transport_cost = 0.0; ///< (1/N) sum_i sum_atoms cost * mass
    double value = 0.0;

    /**
     * @brief Re-verifies all invariants from the raw atoms: per-sample mass
     *        one, transport budget <= rho + tol, fiber mass >= eps - tol,
     *        and the conditional value identity. Returns violations
     *        (empty = valid).
     */
    std::vector<std::string> verify(const SampleSet& data, const FiberSpec& fiber,
                                    const Eigen::VectorXd& alpha, double beta,
                                    const LossSpec& loss, double rho, double eps,
                                    const GroundCostConfig& cfg, double tol) const;
};

/**
 * @brief Brute-force lower bound on the worst-case conditional expected
 *        loss at fixed (alpha, beta).
 *
 * Fiber masses are searched over an 11-level discretization of the slice
 * { u in [0,1]^N : sum u_i = N*eps } (pruned by the transport budget,
 * enriched with knapsack-greedy vertices); for each candidate the inner
 * atom-placement problem is an LP with one budget row, solved exactly.
 * Intended for desk-scale instances (N <= 6, coarse grids).
 *
 * @throws Error (RegimeRhoBelowMin) when no discretized adversary is
 *         budget-feasible.
 */
std::pair<double, WorstCaseDistribution> worst_case_bruteforce(
    const Eigen::VectorXd& alpha, double beta, const ProblemSpec& spec,
    const GridSpec& grid);

/**
 * @brief Conditional sample-average loss: the uniform average of the loss
 *        over samples whose covariate lies in the fiber.
 * @throws Error (EmptyFiber) when no sample is in the fiber.
 */
double saa_conditional_loss(const Eigen::VectorXd& alpha, double beta,
                            const SampleSet& data, const FiberSpec& fiber,
                            const LossSpec& loss, const GroundCostConfig& cfg = {});

/**
 * @brief Constructs the explicit feasible adversary witnessing
 *        rho >= rho_min: each sample splits between staying put and its
 *        fiber projection with the knapsack-optimal fiber masses.
 *
 * The returned distribution satisfies the budget and the eps floor
 * (verifiable via WorstCaseDistribution::verify); its value field carries
 * the induced conditional loss at the supplied (alpha, beta).
 */
WorstCaseDistribution construct_feasible_adversary(const Eigen::VectorXd& alpha,
                                                   double beta,
                                                   const ProblemSpec& spec);

} // namespace condor
