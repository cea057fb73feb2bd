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
 * @file feasibility.hpp
 * @brief Feasibility thresholds rho_min / rho_max and the implied fiber-mass
 *        floor via fractional knapsacks.
 *
 * All three quantities are optima of tiny LPs with one coupling row; the
 * implementations use the exact O(N log N) greedy (sort + fractional fill),
 * which attains the LP optimum. Ties are broken toward the lower sample
 * index for determinism.
 */

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace condor
{

/// Absolute tolerance used when comparing rho against rho_min / rho_max
/// while routing regimes.
inline constexpr double kRegimeTol = 1e-9;

/**
 * @brief Minimal transport budget that lets some feasible adversary place
 *        mass >= eps on the fiber.
 *
 * Value of min (1/N) sum_i kappa_i * u_i over u in [0,1]^N with
 * sum_i u_i >= N * eps.
 */
double rho_min(const Eigen::VectorXd& kappa, double eps, int N);

/**
 * @brief Minimal budget letting the adversary remove all mass from the
 *        fiber: (1/N) * sum over I1 of d_i (zero for empty I1).
 */
double rho_max(const Eigen::VectorXd& d, const std::vector<int>& I1, int N);

/**
 * @brief Smallest fiber probability any budget-rho adversary can leave.
 *
 * Value of min (1/N) sum_{i in I1} p_i over p in [0,1]^N subject to
 * (1/N) sum_{i in I1} d_i (1 - p_i) <= rho. Requires rho < rho_max;
 * otherwise throws the null-probability regime error (callers must route
 * to the uninformative-regime handler instead).
 */
double eps_lower(const Eigen::VectorXd& d, const std::vector<int>& I1, double rho,
                 int N);

} // namespace condor
