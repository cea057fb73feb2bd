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

#include "condor/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "condor/errors.hpp"

namespace condor
{
namespace
{

void check_costs(const Eigen::VectorXd& c, int N, const char* who)
{
    detail::require(N >= 1, ErrorCode::InvalidArgument,
                    std::string(who) + ": N must be >= 1");
    detail::require(static_cast<int>(c.size()) == N, ErrorCode::DimensionMismatch,
                    std::string(who) + ": cost vector length != N");
    detail::require(c.allFinite() and (c.array() >= 0.0).all(),
                    ErrorCode::InvalidArgument,
                    std::string(who) + ": costs must be finite and nonnegative");
}

void check_index_set(const std::vector<int>& I1, int N, const char* who)
{
    for (int i : I1)
    {
        detail::require(i >= 0 and i < N, ErrorCode::InvalidArgument,
                        std::string(who) + ": index out of range");
    }
}

/// Indices of `values` restricted to `subset`, sorted ascending by value
/// with ties resolved toward the lower index.
std::vector<int> sorted_by_value(const Eigen::VectorXd& values,
                                 const std::vector<int>& subset)
{
    std::vector<int> order = subset;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    return order;
}

} // namespace

double rho_min(const Eigen::VectorXd& kappa, double eps, int N)
{
    check_costs(kappa, N, "rho_min");
    detail::require(std::isfinite(eps) and eps >= 0.0 and eps <= 1.0,
                    ErrorCode::InvalidArgument, "rho_min: eps must lie in [0, 1]");
    std::vector<int> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    order = sorted_by_value(kappa, order);

    // Fractional knapsack: fill the cheapest entry costs until mass N*eps
    // is inside the fiber; the greedy fill attains the LP optimum.
    double need = static_cast<double>(N) * eps;
    double total = 0.0;
    for (int i : order)
    {
        if (need <= 0.0)
        {
            break;
        }
        const double take = std::min(1.0, need);
        total += take * kappa[i];
        need -= take;
    }
    return total / static_cast<double>(N);
}

double rho_max(const Eigen::VectorXd& d, const std::vector<int>& I1, int N)
{
    check_costs(d, N, "rho_max");
    check_index_set(I1, N, "rho_max");
    double total = 0.0;
    for (int i : I1)
    {
        total += d[i];
    }
    return total / static_cast<double>(N);
}

double eps_lower(const Eigen::VectorXd& d, const std::vector<int>& I1, double rho,
                 int N)
{
    check_costs(d, N, "eps_lower");
    check_index_set(I1, N, "eps_lower");
    detail::require(std::isfinite(rho) and rho >= 0.0, ErrorCode::InvalidArgument,
                    "eps_lower: rho must be finite and nonnegative");
    const double cap = rho_max(d, I1, N);
    if (rho >= cap)
    {
        throw Error(ErrorCode::NullProbabilityRegime,
                    "eps_lower: null-probability regime (rho >= rho_max, the "
                    "adversary can empty the fiber)");
    }
    // Spend the budget N*rho removing mass from the cheapest exits first;
    // the greedy removal attains the LP optimum.
    double budget = static_cast<double>(N) * rho;
    double kept = static_cast<double>(I1.size());
    for (int i : sorted_by_value(d, I1))
    {
        if (budget <= 0.0)
        {
            break;
        }
        const double removable = d[i] <= 0.0 ? 1.0 : std::min(1.0, budget / d[i]);
        kept -= removable;
        budget -= removable * d[i];
    }
    return std::max(0.0, kept) / static_cast<double>(N);
}

} // namespace condor
