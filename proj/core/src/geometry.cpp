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

#include "condor/geometry.hpp"

#include <cmath>

namespace condor
{
namespace
{

double p_norm(const Eigen::VectorXd& v, double p)
{
    if (p == 2.0)
    {
        return v.norm();
    }
    double acc = 0.0;
    for (int j = 0; j < v.size(); ++j)
    {
        acc += std::pow(std::abs(v[j]), p);
    }
    return std::pow(acc, 1.0 / p);
}

double cost_norm(const GroundCostConfig& cfg, const Eigen::VectorXd& v)
{
    return cfg.x_kind == XCostKind::SquaredEuclidean ? v.norm() : p_norm(v, cfg.p);
}

} // namespace

GroundCostConfig::GroundCostConfig(XCostKind kind, double p_in) : x_kind(kind), p(p_in)
{
    detail::require(std::isfinite(p) and p >= 1.0, ErrorCode::InvalidArgument,
                    "GroundCostConfig: p must be finite and >= 1");
}

double x_cost(const GroundCostConfig& cfg, const Eigen::VectorXd& a,
              const Eigen::VectorXd& b)
{
    detail::require(a.size() == b.size(), ErrorCode::DimensionMismatch,
                    "x_cost: vector lengths differ");
    const double nrm = cost_norm(cfg, a - b);
    return nrm * nrm;
}

double y_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    detail::require(a.size() == b.size(), ErrorCode::DimensionMismatch,
                    "y_cost: vector lengths differ");
    return (a - b).squaredNorm();
}

std::pair<Eigen::VectorXd, double> project_to_fiber(const Eigen::VectorXd& x,
                                                    const FiberSpec& fiber,
                                                    const GroundCostConfig& cfg)
{
    detail::require(x.size() == fiber.x0.size(), ErrorCode::DimensionMismatch,
                    "project_to_fiber: x and x0 lengths differ");
    const Eigen::VectorXd delta = x - fiber.x0;
    const double dist = cost_norm(cfg, delta);
    const double radius = std::sqrt(fiber.gamma);
    if (dist <= radius)
    {
        return {x, 0.0};
    }
    // Radial moves are optimal for any p-norm: the triangle inequality
    // lower-bounds the move by dist - radius, and the radial boundary
    // point attains it.
    const Eigen::VectorXd projection = fiber.x0 + (radius / dist) * delta;
    const double gap = dist - radius;
    return {projection, gap * gap};
}

GeometryStats compute_geometry(const SampleSet& data, const FiberSpec& fiber,
                               const GroundCostConfig& cfg)
{
    detail::require(data.n() == fiber.x0.size(), ErrorCode::DimensionMismatch,
                    "compute_geometry: covariate dimension != fiber center");
    const int N = data.N();
    const double radius = std::sqrt(fiber.gamma);

    GeometryStats stats;
    stats.kappa.resize(N);
    stats.d.resize(N);
    stats.projections.resize(N, data.n());
    stats.d_exact = true;
    for (int i = 0; i < N; ++i)
    {
        const Eigen::VectorXd xi = data.x(i);
        const double dist = cost_norm(cfg, xi - fiber.x0);
        auto [proj, kappa] = project_to_fiber(xi, fiber, cfg);
        stats.kappa[i] = kappa;
        stats.projections.row(i) = proj.transpose();
        if (dist * dist <= fiber.gamma)
        {
            stats.I1.push_back(i);
            // Exit cost to the boundary; radial moves are optimal here too.
            const double gap = radius - dist;
            stats.d[i] = gap * gap;
        }
        else
        {
            stats.I2.push_back(i);
            stats.d[i] = kappa;
        }
    }
    return stats;
}

TypeInftyIndex type_infty_index(const SampleSet& data, const FiberSpec& fiber,
                                double rho, const GroundCostConfig& cfg)
{
    detail::require(std::isfinite(rho) and rho >= 0.0, ErrorCode::InvalidArgument,
                    "type_infty_index: rho must be finite and nonnegative");
    detail::require(data.n() == fiber.x0.size(), ErrorCode::DimensionMismatch,
                    "type_infty_index: covariate dimension != fiber center");
    TypeInftyIndex idx;
    for (int i = 0; i < data.N(); ++i)
    {
        const double cost = x_cost(cfg, fiber.x0, data.x(i));
        if (cost <= rho + fiber.gamma)
        {
            idx.J.push_back(i);
            if (cost + rho <= fiber.gamma)
            {
                idx.J1.push_back(i);
            }
            else
            {
                idx.J2.push_back(i);
            }
        }
    }
    return idx;
}

} // namespace condor
