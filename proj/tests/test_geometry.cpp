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
 * @file test_geometry.cpp
 * @brief Unit tests for fiber projections, entry/exit costs and index sets.
 */

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "condor/geometry.hpp"
#include "doctest.h"

using namespace condor;

namespace
{

SampleSet scalar_covariates(const std::vector<double>& xs)
{
    const int N = static_cast<int>(xs.size());
    Eigen::MatrixXd X(N, 1);
    Eigen::MatrixXd Y(N, 1);
    for (int i = 0; i < N; ++i)
    {
        X(i, 0) = xs[static_cast<std::size_t>(i)];
        Y(i, 0) = 0.01 * i;
    }
    return SampleSet(X, Y);
}

} // namespace

TEST_CASE("outside points project radially onto the fiber boundary")
{
    Eigen::VectorXd x(2);
    x << 2.0, 0.0;
    const FiberSpec fiber(Eigen::VectorXd::Zero(2), 1.0);
    const auto [p, cost] = project_to_fiber(x, fiber, GroundCostConfig());
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cost == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inside points project to themselves at zero cost")
{
    Eigen::VectorXd x(2);
    x << 0.5, 0.0;
    const FiberSpec fiber(Eigen::VectorXd::Zero(2), 1.0);
    const auto [p, cost] = project_to_fiber(x, fiber, GroundCostConfig());
    CHECK((p - x).norm() < 1e-15);
    CHECK(cost == 0.0);
}

TEST_CASE("one-dimensional projection pinned value")
{
    Eigen::VectorXd x(1);
    x << 3.0;
    const FiberSpec fiber(Eigen::VectorXd::Zero(1), 1.0);
    const auto [p, cost] = project_to_fiber(x, fiber, GroundCostConfig());
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cost == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("geometry statistics pinned example")
{
    const SampleSet data = scalar_covariates({0.5, 1.5, 3.0});
    const GeometryStats geo = compute_geometry(data, FiberSpec(Eigen::VectorXd::Zero(1), 1.0));
    REQUIRE(geo.kappa.size() == 3);
    CHECK(geo.kappa[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(geo.kappa[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(geo.kappa[2] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(geo.d[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(geo.d[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(geo.d[2] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(geo.I1 == std::vector<int>{0});
    CHECK(geo.I2 == std::vector<int>{1, 2});
}

TEST_CASE("samples at the center have entry cost zero and exit cost gamma")
{
    const SampleSet data = scalar_covariates({0.0, 0.0});
    const GeometryStats geo = compute_geometry(data, FiberSpec(Eigen::VectorXd::Zero(1), 0.7));
    CHECK(geo.kappa.isZero(0.0));
    CHECK(geo.d[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(geo.d[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(geo.I1 == std::vector<int>{0, 1});
    CHECK(geo.I2.empty());
}

TEST_CASE("with no interior samples exit costs equal entry costs")
{
    const SampleSet data = scalar_covariates({2.0, 3.0});
    const GeometryStats geo = compute_geometry(data, FiberSpec(Eigen::VectorXd::Zero(1), 1.0));
    CHECK(geo.I1.empty());
    CHECK((geo.d - geo.kappa).norm() < 1e-15);
}

TEST_CASE("degenerate fiber collects only exact matches")
{
    const SampleSet data = scalar_covariates({0.0, 0.3});
    const GeometryStats geo = compute_geometry(data, FiberSpec(Eigen::VectorXd::Zero(1), 0.0));
    CHECK(geo.I1 == std::vector<int>{0});
    CHECK(geo.kappa[0] == 0.0);
    CHECK(geo.kappa[1] == doctest::Approx(0.09).epsilon(1e-12));
    CHECK((geo.d - geo.kappa).norm() < 1e-15);
}

TEST_CASE("geometry is permutation-equivariant in the sample order")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int N = 6;
    Eigen::MatrixXd X(N, 2);
    Eigen::MatrixXd Y(N, 1);
    for (int i = 0; i < N; ++i)
    {
        X(i, 0) = gauss(rng);
        X(i, 1) = gauss(rng);
        Y(i, 0) = gauss(rng);
    }
    const FiberSpec fiber(Eigen::VectorXd::Zero(2), 0.8);
    const GeometryStats base = compute_geometry(SampleSet(X, Y), fiber);

    const std::vector<int> perm = {3, 0, 5, 1, 4, 2};
    Eigen::MatrixXd Xp(N, 2);
    Eigen::MatrixXd Yp(N, 1);
    for (int i = 0; i < N; ++i)
    {
        Xp.row(i) = X.row(perm[static_cast<std::size_t>(i)]);
        Yp.row(i) = Y.row(perm[static_cast<std::size_t>(i)]);
    }
    const GeometryStats permuted = compute_geometry(SampleSet(Xp, Yp), fiber);
    for (int i = 0; i < N; ++i)
    {
        CHECK(permuted.kappa[i] ==
              doctest::Approx(base.kappa[perm[static_cast<std::size_t>(i)]])
                  .epsilon(1e-15));
        CHECK(permuted.d[i] ==
              doctest::Approx(base.d[perm[static_cast<std::size_t>(i)]]).epsilon(1e-15));
    }
    CHECK(permuted.I1.size() == base.I1.size());
}

TEST_CASE("closed-form costs agree with dense boundary search")
{
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.5);
    const double gamma = 1.3;
    const FiberSpec fiber(Eigen::VectorXd::Zero(2), gamma);
    const int directions = 20000;
    for (int k = 0; k < 10; ++k)
    {
        Eigen::VectorXd x(2);
        x << gauss(rng), gauss(rng);
        const auto [p, cost] = project_to_fiber(x, fiber, GroundCostConfig());
        // Entry: nearest boundary point over a dense angular sweep (outside
        // points only; inside points enter for free).
        double best = cost;
        if (x.norm() > std::sqrt(gamma))
        {
            best = 1e100;
            for (int a = 0; a < directions; ++a)
            {
                const double ang = 2.0 * M_PI * a / directions;
                Eigen::VectorXd b(2);
                b << std::sqrt(gamma) * std::cos(ang), std::sqrt(gamma) * std::sin(ang);
                best = std::min(best, (x - b).squaredNorm());
            }
        }
        // The closed form minimizes over the continuum, so it can only sit
        // below the sweep minimum, and at most by the discretization error.
        CHECK(cost <= best + 1e-12);
        CHECK(best - cost <= 1e-6);
        CHECK(std::abs((p - fiber.x0).squaredNorm() - std::min(gamma, x.squaredNorm())) <
              1e-9);
    }
}

TEST_CASE("squared p-norm ground costs scale the projection radius")
{
    // With the 1-norm the closest boundary point of { ||x||_1^2 <= gamma }
    // from a point on an axis is still radial.
    Eigen::VectorXd x(2);
    x << 3.0, 0.0;
    const FiberSpec fiber(Eigen::VectorXd::Zero(2), 1.0);
    const auto [p, cost] = project_to_fiber(x, fiber, GroundCostConfig::squared_p_norm(1.0));
    CHECK(cost == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("type-infinity index sets pinned example")
{
    const SampleSet data = scalar_covariates({0.5, 1.5, 3.0});
    const FiberSpec fiber(Eigen::VectorXd::Zero(1), 1.0);
    // Covariate costs (0.25, 2.25, 9): only the first sample can reach the
    // fiber within budget 0.5, and it sits deep inside.
    const TypeInftyIndex idx = type_infty_index(data, fiber, 0.5);
    CHECK(idx.J == std::vector<int>{0});
    CHECK(idx.J1 == std::vector<int>{0});
    CHECK(idx.J2.empty());
}

TEST_CASE("type-infinity index collapses to the fiber as the radius vanishes")
{
    const SampleSet data = scalar_covariates({0.5, 1.5, 3.0});
    const FiberSpec fiber(Eigen::VectorXd::Zero(1), 1.0);
    const TypeInftyIndex idx = type_infty_index(data, fiber, 1e-15);
    CHECK(idx.J == std::vector<int>{0});
}

TEST_CASE("type-infinity index covers all samples for a huge radius")
{
    const SampleSet data = scalar_covariates({0.5, 1.5, 3.0});
    const FiberSpec fiber(Eigen::VectorXd::Zero(1), 1.0);
    const TypeInftyIndex idx = type_infty_index(data, fiber, 100.0);
    CHECK(idx.J == std::vector<int>{0, 1, 2});
    CHECK(idx.J1.size() + idx.J2.size() == idx.J.size());
}
