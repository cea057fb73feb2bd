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
 * @file test_types.cpp
 * @brief Unit tests for the core domain types and loss evaluations.
 */

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "condor/errors.hpp"
#include "condor/types.hpp"
#include "doctest.h"

using namespace condor;

namespace
{

Eigen::VectorXd vec1(double v)
{
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

} // namespace

TEST_CASE("mean-variance loss pinned values")
{
    // (v - beta)^2 - eta*v at v = 2, beta = 1, eta = 0.
    CHECK(eval_loss_return(2.0, 1.0, LossSpec::mean_variance(0.0)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    Eigen::VectorXd alpha = vec1(1.0);
    CHECK(eval_loss(vec1(2.0), alpha, 1.0, LossSpec::mean_variance(0.0)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    // eta shifts the value by -eta*v.
    CHECK(eval_loss_return(2.0, 1.0, LossSpec::mean_variance(0.5)) ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("mean-CVaR loss pinned values")
{
    // v = 1, beta = 0, eta = 1, tau = 0.5: -1 + 0 + 2*max(-1, 0) = -1,
    // identically max{-1, -3}.
    const LossSpec cv(LossKind::MeanCVaR, 1.0, 0.5);
    CHECK(eval_loss_return(1.0, 0.0, cv) == doctest::Approx(-1.0).epsilon(1e-15));
    // v = -1, beta = 0, eta = 0, tau = 0.5: 0 + 0 + 2*max(1, 0) = 2.
    const LossSpec cv2(LossKind::MeanCVaR, 0.0, 0.5);
    CHECK(eval_loss_return(-1.0, 0.0, cv2) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("CVaR hinge form equals the max-of-affine form at machine precision")
{
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (int k = 0; k < 10000; ++k)
    {
        const double eta = std::abs(gauss(rng));
        const double tau = unif(rng);
        const double v = 3.0 * gauss(rng);
        const double beta = gauss(rng);
        const LossSpec loss(LossKind::MeanCVaR, eta, tau);
        const double hinge = eval_loss_return(v, beta, loss);
        const double piece1 = -eta * v + beta;
        const double piece2 = -(eta + 1.0 / tau) * v + (1.0 - 1.0 / tau) * beta;
        CHECK(hinge == doctest::Approx(std::max(piece1, piece2)).epsilon(1e-14));
    }
}

TEST_CASE("vector and scalar loss evaluations coincide")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd alpha(3);
    alpha << 0.2, 0.5, 0.3;
    for (int k = 0; k < 100; ++k)
    {
        Eigen::VectorXd y(3);
        y << gauss(rng), gauss(rng), gauss(rng);
        const double beta = gauss(rng);
        for (const LossSpec& loss :
             {LossSpec::mean_variance(0.4), LossSpec::mean_cvar(0.4, 0.2)})
        {
            CHECK(eval_loss(y, alpha, beta, loss) ==
                  doctest::Approx(eval_loss_return(y.dot(alpha), beta, loss))
                      .epsilon(1e-14));
        }
    }
}

TEST_CASE("eval_loss rejects mismatched dimensions")
{
    Eigen::VectorXd alpha(2);
    alpha << 0.5, 0.5;
    CHECK_THROWS_WITH_AS(eval_loss(vec1(0.1), alpha, 0.0, LossSpec::mean_variance(0.0)),
                         doctest::Contains("length"), Error);
}

TEST_CASE("quadratic loss mean is minimized over beta at the sample mean")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss(0.02, 0.3);
    const int N = 200;
    Eigen::VectorXd z(N);
    for (int i = 0; i < N; ++i)
    {
        z[i] = gauss(rng);
    }
    const double mean = z.mean();
    const double variance = (z.array() - mean).square().mean();
    const LossSpec mv = LossSpec::mean_variance(0.0);
    const auto avg_at = [&](double beta) {
        double s = 0.0;
        for (int i = 0; i < N; ++i)
        {
            s += eval_loss_return(z[i], beta, mv);
        }
        return s / N;
    };
    CHECK(avg_at(mean) == doctest::Approx(variance).epsilon(1e-12));
    CHECK(avg_at(mean) <= avg_at(mean + 0.05) + 1e-15);
    CHECK(avg_at(mean) <= avg_at(mean - 0.05) + 1e-15);
}

TEST_CASE("both losses are convex in beta")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const LossSpec& loss :
         {LossSpec::mean_variance(0.7), LossSpec::mean_cvar(0.7, 0.1)})
    {
        for (int k = 0; k < 500; ++k)
        {
            const double v = gauss(rng);
            const double b1 = gauss(rng);
            const double b2 = gauss(rng);
            const double mid = eval_loss_return(v, 0.5 * (b1 + b2), loss);
            const double hull = 0.5 * (eval_loss_return(v, b1, loss) +
                                       eval_loss_return(v, b2, loss));
            CHECK(mid <= hull + 1e-12);
        }
    }
}

TEST_CASE("constructor guards reject out-of-range parameters")
{
    CHECK_THROWS_AS(LossSpec(LossKind::MeanCVaR, 0.1, 1.0), Error);
    CHECK_THROWS_AS(LossSpec(LossKind::MeanCVaR, 0.1, 0.0), Error);
    CHECK_THROWS_AS(LossSpec(LossKind::MeanVariance, -0.5), Error);
    CHECK_THROWS_AS(AmbiguitySpec(0.0, 0.5), Error);
    CHECK_THROWS_AS(AmbiguitySpec(1.0, 1.5), Error);
    CHECK_THROWS_AS(AmbiguitySpec(1.0, -0.1), Error);
    CHECK_THROWS_AS(FiberSpec(Eigen::VectorXd::Zero(2), -1.0), Error);
    try
    {
        AmbiguitySpec bad(-2.0, 0.5);
        CHECK(false);
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("SampleSet validates row consistency and slices by index")
{
    Eigen::MatrixXd X(3, 2);
    X << 1, 2, 3, 4, 5, 6;
    Eigen::MatrixXd Y(3, 1);
    Y << 7, 8, 9;
    SampleSet data(X, Y);
    CHECK(data.N() == 3);
    CHECK(data.n() == 2);
    CHECK(data.m() == 1);
    CHECK(data.x(1)[0] == 3.0);
    CHECK(data.y(2)[0] == 9.0);

    SampleSet sliced = data.rows({2, 0});
    CHECK(sliced.N() == 2);
    CHECK(sliced.y(0)[0] == 9.0);
    CHECK(sliced.y(1)[0] == 7.0);

    Eigen::MatrixXd Ybad(2, 1);
    Ybad << 7, 8;
    CHECK_THROWS_AS(SampleSet(X, Ybad), Error);
}

TEST_CASE("simplex feasible set projects the origin to equal weights")
{
    const FeasibleSet feas = FeasibleSet::simplex(4);
    const Eigen::VectorXd p = feas.project(Eigen::VectorXd::Zero(4));
    CHECK((p - Eigen::VectorXd::Constant(4, 0.25)).norm() < 1e-12);
    CHECK(feas.violation(p) < 1e-12);
}

TEST_CASE("untradable assets are pinned to zero weight")
{
    const FeasibleSet feas = FeasibleSet::simplex_with_mask(4, {true, true, false, true});
    const Eigen::VectorXd p = feas.project(Eigen::VectorXd::Zero(4));
    CHECK(p[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(p[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    Eigen::VectorXd bad(4);
    bad << 0.25, 0.25, 0.25, 0.25;
    CHECK(feas.violation(bad) > 0.1);
}

TEST_CASE("fixed feasible set admits exactly one point")
{
    Eigen::VectorXd w(3);
    w << 0.2, 0.3, 0.5;
    const FeasibleSet feas = FeasibleSet::fixed(w);
    CHECK(feas.violation(w) < 1e-12);
    Eigen::VectorXd other(3);
    other << 0.5, 0.3, 0.2;
    CHECK(feas.violation(other) > 0.1);
    CHECK((feas.project(other) - w).norm() < 1e-9);
}

TEST_CASE("ball support reports containment and linear ranges")
{
    const SupportSpec ball = SupportSpec::ball(Eigen::VectorXd::Zero(2), 2.0);
    CHECK(ball.kind() == SupportKind::Ellipsoid);
    Eigen::VectorXd inside(2);
    inside << 1.0, 1.0;
    Eigen::VectorXd outside(2);
    outside << 2.0, 2.0;
    CHECK(ball.contains(inside));
    CHECK(!ball.contains(outside));
    Eigen::VectorXd a(2);
    a << 3.0, 4.0;
    const auto [lo, hi] = ball.linear_range(a);
    CHECK(hi == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(lo == doctest::Approx(-10.0).epsilon(1e-9));
}
