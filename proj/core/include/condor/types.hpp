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
 * @file types.hpp
 * @brief Core data model: samples, fibers, ambiguity budgets, losses,
 *        supports, feasible sets and allocations.
 *
 * All types are immutable value types after construction and may be shared
 * freely across threads. Construction validates invariants and throws
 * condor::Error on violation.
 */

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "condor/errors.hpp"

namespace condor
{

/// One covariate-return observation (x in R^n, y in R^m).
struct Sample
{
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

/**
 * @brief Ordered collection of N covariate-return pairs defining the
 *        empirical distribution (uniform mass 1/N per sample).
 *
 * Sample order is stable and meaningful: index i appears in index sets,
 * transport plans and dual certificates.
 */
class SampleSet
{
public:
    /// Builds from stacked rows: X is N-by-n, Y is N-by-m.
    SampleSet(Eigen::MatrixXd X, Eigen::MatrixXd Y);

    int N() const noexcept { return static_cast<int>(X_.rows()); }
    int n() const noexcept { return static_cast<int>(X_.cols()); }
    int m() const noexcept { return static_cast<int>(Y_.cols()); }

    const Eigen::MatrixXd& X() const noexcept { return X_; }
    const Eigen::MatrixXd& Y() const noexcept { return Y_; }

    Eigen::VectorXd x(int i) const { return X_.row(i).transpose(); }
    Eigen::VectorXd y(int i) const { return Y_.row(i).transpose(); }
    Sample sample(int i) const { return Sample{x(i), y(i)}; }

    /// Sub-sample of rows `idx` (order preserved, duplicates allowed).
    SampleSet rows(const std::vector<int>& idx) const;

private:
    Eigen::MatrixXd X_;
    Eigen::MatrixXd Y_;
};

/**
 * @brief Conditioning fiber: covariates within ground cost `gamma` of `x0`.
 *
 * gamma is in ground-cost units, so with squared-Euclidean cost the
 * Euclidean radius of the fiber is sqrt(gamma). gamma = 0 encodes the
 * singular fiber {x0}.
 */
struct FiberSpec
{
    Eigen::VectorXd x0;
    double gamma = 0.0;

    FiberSpec() = default;
    FiberSpec(Eigen::VectorXd x0_in, double gamma_in);
};

/// Which transport order defines the ambiguity ball.
enum class TransportOrder
{
    Type1,   ///< expected ground cost (the default throughout)
    TypeInfty///< essential-sup ground cost
};

/**
 * @brief Ambiguity budget: transport radius rho and fiber-mass floor eps.
 *
 * eps is only meaningful for Type1 balls; the TypeInfty conditional problem
 * constrains the fiber mass to be strictly positive instead.
 */
struct AmbiguitySpec
{
    double rho = 0.0;
    double eps = 0.0;
    TransportOrder order = TransportOrder::Type1;

    AmbiguitySpec() = default;
    AmbiguitySpec(double rho_in, double eps_in,
                  TransportOrder order_in = TransportOrder::Type1);
};

enum class LossKind
{
    MeanVariance,
    MeanCVaR
};

/**
 * @brief Loss specification.
 *
 * MeanVariance: (y'a - b)^2 - eta * y'a.
 * MeanCVaR:     -eta * y'a + b + (1/tau) * max(-y'a - b, 0),
 * identically   max{ -eta*y'a + b, -(eta + 1/tau)*y'a + (1 - 1/tau)*b }.
 * beta is unconstrained (real line) in every solved program.
 */
struct LossSpec
{
    LossKind kind = LossKind::MeanVariance;
    double eta = 0.0;
    double tau = 0.05; ///< CVaR tolerance; ignored for MeanVariance

    LossSpec() = default;
    LossSpec(LossKind kind_in, double eta_in, double tau_in = 0.05);

    static LossSpec mean_variance(double eta) { return {LossKind::MeanVariance, eta}; }
    static LossSpec mean_cvar(double eta, double tau) { return {LossKind::MeanCVaR, eta, tau}; }
};

/**
 * @brief Linearly-representable feasible set for the portfolio weights.
 *
 * Effective per-asset bounds are [lower_j, upper_j] for tradable assets and
 * exactly {0} for untradable ones. With `budget` set the weights must also
 * sum to one. Nonemptiness is checked at construction.
 */
class FeasibleSet
{
public:
    FeasibleSet(int m, Eigen::VectorXd lower, Eigen::VectorXd upper, bool budget,
                std::vector<bool> tradable);

    /// The nonnegative simplex: 0 <= alpha <= 1, sum(alpha) = 1.
    static FeasibleSet simplex(int m);

    /// Simplex with some assets forced to zero weight.
    static FeasibleSet simplex_with_mask(int m, std::vector<bool> tradable);

    /// Fixes alpha to a constant vector (degenerate box, no budget row).
    static FeasibleSet fixed(const Eigen::VectorXd& alpha);

    int m() const noexcept { return m_; }
    bool budget() const noexcept { return budget_; }
    const std::vector<bool>& tradable() const noexcept { return tradable_; }

    /// Effective bounds with the tradable mask folded in.
    const Eigen::VectorXd& lower() const noexcept { return eff_lower_; }
    const Eigen::VectorXd& upper() const noexcept { return eff_upper_; }

    /// Max constraint violation of `alpha` (bounds and budget row).
    double violation(const Eigen::VectorXd& alpha) const;

    /// Euclidean projection of `alpha` onto the set.
    Eigen::VectorXd project(const Eigen::VectorXd& alpha) const;

private:
    int m_;
    Eigen::VectorXd eff_lower_;
    Eigen::VectorXd eff_upper_;
    bool budget_;
    std::vector<bool> tradable_;
};

enum class SupportKind
{
    WholeSpace,
    Ellipsoid
};

/**
 * @brief Support of the return distribution.
 *
 * Ellipsoid kind encodes {y : y'Qy + 2q'y + q0 <= 0} with Q symmetric
 * positive definite; a Slater point with strictly negative value must be
 * supplied at construction to certify the nonempty interior.
 */
class SupportSpec
{
public:
    static SupportSpec whole_space();
    static SupportSpec ellipsoid(Eigen::MatrixXd Q, Eigen::VectorXd q, double q0,
                                 const Eigen::VectorXd& slater_point);
    /// Euclidean ball {y : ||y - center||_2 <= radius} as an ellipsoid.
    static SupportSpec ball(const Eigen::VectorXd& center, double radius);

    SupportKind kind() const noexcept { return kind_; }
    const Eigen::MatrixXd& Q() const { return Q_; }
    const Eigen::VectorXd& q() const { return q_; }
    double q0() const { return q0_; }

    /// Quadratic form value y'Qy + 2q'y + q0 (Ellipsoid only).
    double quad_value(const Eigen::VectorXd& y) const;

    /// True if `y` lies in the support (trivially true for WholeSpace).
    bool contains(const Eigen::VectorXd& y, double tol = 1e-9) const;

    /// Ellipsoid center -Q^{-1} q (Ellipsoid only).
    Eigen::VectorXd center() const;

    /// Range [lo, hi] of a'y over the support; unbounded for WholeSpace
    /// with a != 0. Throws on WholeSpace when the range is infinite.
    std::pair<double, double> linear_range(const Eigen::VectorXd& a) const;

private:
    SupportSpec() = default;
    SupportKind kind_ = SupportKind::WholeSpace;
    Eigen::MatrixXd Q_;
    Eigen::VectorXd q_;
    double q0_ = 0.0;
};

/// Result of an allocation solve.
struct Allocation
{
    Eigen::VectorXd alpha;
    double beta = 0.0;
    double objective = 0.0;
};

/**
 * @brief Evaluates the loss at a return vector for weights alpha and level
 *        beta.
 * @throws Error (DimensionMismatch) when y and alpha disagree in length.
 */
double eval_loss(const Eigen::VectorXd& y, const Eigen::VectorXd& alpha, double beta,
                 const LossSpec& loss);

/// Loss as a function of the scalar portfolio return v = y'alpha.
double eval_loss_return(double v, double beta, const LossSpec& loss);

} // namespace condor
