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
 * @file geometry.hpp
 * @brief Ground transport costs, fiber projections and per-sample geometry.
 *
 * The ground cost is separable across covariates and returns:
 * the x-cost is a squared norm (Euclidean by default, p-norms optionally)
 * and the y-cost is fixed to the squared Euclidean norm. Fiber membership
 * is cost-based: x is in the fiber iff x_cost(x, x0) <= gamma, so with
 * squared-Euclidean cost the Euclidean fiber radius is sqrt(gamma).
 */

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "condor/types.hpp"

namespace condor
{

enum class XCostKind
{
    SquaredEuclidean,
    SquaredPNorm ///< squared p-norm for a configurable p in [1, inf)
};

/// Configuration of the separable ground cost D = D_X + D_Y.
struct GroundCostConfig
{
    XCostKind x_kind = XCostKind::SquaredEuclidean;
    double p = 2.0; ///< exponent for SquaredPNorm

    GroundCostConfig() = default;
    GroundCostConfig(XCostKind kind, double p_in);

    static GroundCostConfig squared_euclidean() { return {}; }
    static GroundCostConfig squared_p_norm(double p) { return {XCostKind::SquaredPNorm, p}; }
};

/// x-side ground cost D_X(a, b) = ||a - b||^2 in the configured norm.
double x_cost(const GroundCostConfig& cfg, const Eigen::VectorXd& a,
              const Eigen::VectorXd& b);

/// y-side ground cost D_Y(a, b) = ||a - b||_2^2 (fixed).
double y_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/**
 * @brief Per-sample fiber geometry.
 *
 * kappa[i]: minimal x-cost to move sample i's covariate into the fiber
 *           (zero when it is already inside).
 * d[i]:     minimal x-cost from the covariate to the fiber *boundary*
 *           (exit cost for inside samples; equals kappa[i] outside).
 * I1:       indices with x-cost(x0, x_i) <= gamma (inside or on boundary).
 * I2:       the complement.
 * projections: row i is the cost-projection of x_i onto the fiber.
 * d_exact:  true when d comes from a closed form (all p-norm costs admit
 *           one: radial moves are optimal by the triangle inequality).
 */
struct GeometryStats
{
    Eigen::VectorXd kappa;
    Eigen::VectorXd d;
    std::vector<int> I1;
    std::vector<int> I2;
    Eigen::MatrixXd projections;
    bool d_exact = true;
};

/**
 * @brief Projects `x` onto the fiber, returning the projection point and the
 *        transport cost kappa = D_X(projection, x).
 *
 * Points already inside project to themselves at zero cost. Outside points
 * project radially toward x0: for every p-norm ground cost the radial
 * boundary point is optimal by the triangle inequality, giving the closed
 * form kappa = (||x - x0|| - sqrt(gamma))^2 in the configured norm.
 */
std::pair<Eigen::VectorXd, double> project_to_fiber(const Eigen::VectorXd& x,
                                                    const FiberSpec& fiber,
                                                    const GroundCostConfig& cfg);

/**
 * @brief Computes kappa, d, the I1/I2 partition and projections for every
 *        sample.
 *
 * For gamma = 0 the fiber degenerates to {x0}: I1 collects samples with
 * x-cost exactly zero (i.e. at x0) and d is reported as kappa. Boundary
 * exit costs use the closed form d_i = (sqrt(gamma) - ||x0 - x_i||)^2 in
 * the configured norm (radial moves are optimal for exits too).
 */
GeometryStats compute_geometry(const SampleSet& data, const FiberSpec& fiber,
                               const GroundCostConfig& cfg = {});

/**
 * @brief Index sets for the type-infinity ambiguity ball.
 *
 * J  = { i : D_X(x0, x_i) <= rho + gamma }
 * J1 = { i in J : D_X(x0, x_i) + rho <= gamma }
 * J2 = J \ J1.
 */
struct TypeInftyIndex
{
    std::vector<int> J;
    std::vector<int> J1;
    std::vector<int> J2;
};

/**
 * @brief Computes the type-infinity index sets for radius `rho`.
 *
 * An empty J signals infeasibility of the type-infinity conditional
 * problem; this function reports it via the returned sets (callers route
 * the error), it does not throw.
 */
TypeInftyIndex type_infty_index(const SampleSet& data, const FiberSpec& fiber,
                                double rho, const GroundCostConfig& cfg = {});

} // namespace condor
