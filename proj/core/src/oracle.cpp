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

#include "condor/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_set>
#include <vector>

namespace condor
{

GridSpec::GridSpec(Eigen::VectorXd lower_in, Eigen::VectorXd upper_in, int points)
    : lower(std::move(lower_in)), upper(std::move(upper_in)), points_per_dim(points)
{
    detail::require(lower.size() == upper.size() and lower.size() >= 1,
                    ErrorCode::DimensionMismatch, "GridSpec: bound lengths differ");
    detail::require(lower.allFinite() and upper.allFinite(),
                    ErrorCode::InvalidArgument, "GridSpec: bounds must be finite");
    detail::require((lower.array() <= upper.array()).all(), ErrorCode::InvalidArgument,
                    "GridSpec: lower bound exceeds upper bound");
    detail::require(points >= 2, ErrorCode::InvalidArgument,
                    "GridSpec: need at least 2 points per dimension");
}

GridSpec GridSpec::cube(int m, double half_width, int points)
{
    detail::require(m >= 1 and half_width > 0.0, ErrorCode::InvalidArgument,
                    "GridSpec::cube: need m >= 1 and positive half width");
    return GridSpec(Eigen::VectorXd::Constant(m, -half_width),
                    Eigen::VectorXd::Constant(m, half_width), points);
}

namespace
{

/// Enumerates all points of the axis-aligned box grid.
std::vector<Eigen::VectorXd> grid_points(const GridSpec& grid)
{
    const int m = static_cast<int>(grid.lower.size());
    const int P = grid.points_per_dim;
    std::int64_t total = 1;
    for (int j = 0; j < m; ++j)
    {
        total *= P;
        detail::require(total <= 400000, ErrorCode::InvalidArgument,
                        "grid too large for the brute-force oracle");
    }
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(static_cast<std::size_t>(total));
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    Eigen::VectorXd step(m);
    for (int j = 0; j < m; ++j)
    {
        step[j] = (grid.upper[j] - grid.lower[j]) / (P - 1);
    }
    for (std::int64_t k = 0; k < total; ++k)
    {
        Eigen::VectorXd y(m);
        for (int j = 0; j < m; ++j)
        {
            y[j] = grid.lower[j] + step[j] * idx[static_cast<std::size_t>(j)];
        }
        pts.push_back(std::move(y));
        for (int j = 0; j < m; ++j)
        {
            if (++idx[static_cast<std::size_t>(j)] < P)
            {
                break;
            }
            idx[static_cast<std::size_t>(j)] = 0;
        }
    }
    return pts;
}

/// One point of a per-sample cost/loss concave envelope.
struct EnvPoint
{
    double cost = 0.0; ///< squared y-move from the sample return
    double loss = 0.0;
    int grid_index = -1; ///< -1 marks the untouched return
};

/// Per-sample data for the inner placement problem.
struct SampleEnv
{
    std::vector<EnvPoint> pts; ///< concave, strictly increasing loss
    double entry = 0.0;        ///< covariate cost for in-fiber mass
    double exit = 0.0;         ///< covariate cost for out-of-fiber mass
    bool can_enter = true;     ///< false when no admissible placement exists
};

/// Upper concave envelope of the candidate (cost, loss) cloud, trimmed to
/// the increasing-loss prefix. Fractionally mixing along this envelope is
/// exactly the per-sample structure of the inner linear program.
std::vector<EnvPoint> build_envelope(std::vector<EnvPoint> cand)
{
    std::sort(cand.begin(), cand.end(), [](const EnvPoint& a, const EnvPoint& b) {
        if (a.cost != b.cost)
        {
            return a.cost < b.cost;
        }
        return a.loss > b.loss;
    });
    // Dedupe equal costs keeping the best loss.
    std::vector<EnvPoint> uniq;
    for (const EnvPoint& p : cand)
    {
        if (uniq.empty() or p.cost > uniq.back().cost + 1e-15)
        {
            uniq.push_back(p);
        }
    }
    // Upper hull with strictly decreasing slopes.
    std::vector<EnvPoint> hull;
    for (const EnvPoint& p : uniq)
    {
        while (hull.size() >= 2)
        {
            const EnvPoint& a = hull[hull.size() - 2];
            const EnvPoint& b = hull.back();
            const double s_ab = (b.loss - a.loss) / (b.cost - a.cost);
            const double s_bp = (p.loss - b.loss) / (p.cost - b.cost);
            if (s_bp >= s_ab)
            {
                hull.pop_back();
            }
            else
            {
                break;
            }
        }
        hull.push_back(p);
    }
    // Keep the increasing-loss prefix: paying more for less is never used.
    std::vector<EnvPoint> kept;
    kept.push_back(hull.front());
    for (std::size_t k = 1; k < hull.size(); ++k)
    {
        if (hull[k].loss > kept.back().loss + 1e-15)
        {
            kept.push_back(hull[k]);
        }
        else
        {
            break;
        }
    }
    return kept;
}

struct Increment
{
    int sample = 0;
    int from = 0; ///< envelope position
    double dcost = 0.0;
    double dloss = 0.0;
    double ratio = 0.0;
};

struct InnerResult
{
    double numerator = 0.0; ///< sum_i u_i * (mean in-fiber loss of sample i)
    /// Final envelope position per sample: index and fractional progress
    /// toward the next point.
    std::vector<std::pair<int, double>> position;
};

/// Exact inner maximization at fixed fiber masses u: spend the remaining
/// budget on envelope increments in decreasing gain/cost order. With one
/// coupling row this greedy attains the linear-program optimum.
InnerResult inner_solve(const std::vector<SampleEnv>& env,
                        const std::vector<Increment>& sorted_inc,
                        const Eigen::VectorXd& u, double remaining, bool track)
{
    const int N = static_cast<int>(env.size());
    InnerResult r;
    if (track)
    {
        r.position.assign(static_cast<std::size_t>(N), {0, 0.0});
    }
    for (int i = 0; i < N; ++i)
    {
        if (u[i] > 0.0)
        {
            r.numerator += u[i] * env[static_cast<std::size_t>(i)].pts.front().loss;
        }
    }
    for (const Increment& inc : sorted_inc)
    {
        if (remaining <= 1e-15)
        {
            break;
        }
        const double ui = u[inc.sample];
        if (ui <= 0.0)
        {
            continue;
        }
        const double full = ui * inc.dcost;
        const double take = std::min(1.0, remaining / full);
        r.numerator += take * ui * inc.dloss;
        remaining -= take * full;
        if (track)
        {
            auto& pos = r.position[static_cast<std::size_t>(inc.sample)];
            if (take >= 1.0 - 1e-13)
            {
                pos = {inc.from + 1, 0.0};
            }
            else
            {
                pos = {inc.from, take};
            }
        }
    }
    return r;
}

std::uint64_t u_key(const Eigen::VectorXd& u)
{
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < u.size(); ++i)
    {
        const auto q = static_cast<std::uint64_t>(std::llround(u[i] * 1e9));
        h ^= q + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

} // namespace

std::vector<std::string> WorstCaseDistribution::verify(
    const SampleSet& data, const FiberSpec& fiber, const Eigen::VectorXd& alpha,
    double beta, const LossSpec& loss, double rho, double eps,
    const GroundCostConfig& cfg, double tol) const
{
    std::vector<std::string> out;
    const int N = data.N();
    if (static_cast<int>(plans.size()) != N)
    {
        out.push_back("plan count != sample count");
        return out;
    }
    double total_cost = 0.0;
    double mass_in = 0.0;
    double loss_in = 0.0;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
    for (int i = 0; i < N; ++i)
    {
        double mass_i = 0.0;
        for (const TransportAtom& atom : plans[static_cast<std::size_t>(i)])
        {
            if (atom.mass < -tol)
            {
                out.push_back("negative atom mass at sample " + std::to_string(i));
            }
            mass_i += atom.mass;
            const double c = x_cost(cfg, atom.x, data.x(i)) +
                             y_cost(atom.y, data.y(i));
            if (std::abs(c - atom.cost) > tol * std::max(1.0, std::abs(c)))
            {
                out.push_back("stored cost mismatch at sample " + std::to_string(i));
            }
            const bool in = x_cost(cfg, atom.x, fiber.x0) <= fiber.gamma;
            if (in != atom.in_fiber)
            {
                out.push_back("fiber flag mismatch at sample " + std::to_string(i));
            }
            total_cost += c * atom.mass;
            if (in)
            {
                u[i] += atom.mass;
                mass_in += atom.mass;
                loss_in += atom.mass * eval_loss(atom.y, alpha, beta, loss);
            }
        }
        if (std::abs(mass_i - 1.0) > tol)
        {
            out.push_back("sample " + std::to_string(i) + " mass sums to " +
                          std::to_string(mass_i));
        }
        if (std::abs(u[i] - fiber_mass[i]) > tol)
        {
            out.push_back("stored fiber mass mismatch at sample " + std::to_string(i));
        }
    }
    total_cost /= N;
    if (total_cost > rho + tol)
    {
        out.push_back("transport budget exceeded: " + std::to_string(total_cost));
    }
    if (std::abs(total_cost - transport_cost) > tol * std::max(1.0, total_cost))
    {
        out.push_back("stored transport cost mismatch");
    }
    if (mass_in / N < eps - tol)
    {
        out.push_back("fiber mass below the floor: " + std::to_string(mass_in / N));
    }
    if (mass_in > tol)
    {
        const double v = loss_in / mass_in;
        if (std::abs(v - value) > tol * std::max(1.0, std::abs(v)))
        {
            out.push_back("conditional value mismatch: recomputed " +
                          std::to_string(v));
        }
    }
    return out;
}

std::pair<double, WorstCaseDistribution> worst_case_bruteforce(
    const Eigen::VectorXd& alpha, double beta, const ProblemSpec& spec,
    const GridSpec& grid)
{
    const SampleSet& data = spec.data;
    const int N = data.N();
    const int m = data.m();
    detail::require(alpha.size() == m, ErrorCode::DimensionMismatch,
                    "worst_case_bruteforce: alpha length != asset count");
    detail::require(grid.lower.size() == m, ErrorCode::DimensionMismatch,
                    "worst_case_bruteforce: grid dimension != asset count");
    detail::require(N <= 8, ErrorCode::InvalidArgument,
                    "worst_case_bruteforce: desk-scale only (N <= 8)");
    const double rho = spec.ambiguity.rho;
    const double eps = spec.ambiguity.eps;
    const GeometryStats geo = compute_geometry(data, spec.fiber, spec.cost);
    {
        const double floor = rho_min(geo.kappa, eps, N);
        if (rho < floor - 1e-12)
        {
            throw Error(ErrorCode::RegimeRhoBelowMin,
                        "worst_case_bruteforce: transport budget below rho_min");
        }
    }

    // Candidate placements shared across samples.
    const std::vector<Eigen::VectorXd> pts = grid_points(grid);
    std::vector<double> pt_loss(pts.size());
    std::vector<bool> pt_ok(pts.size());
    for (std::size_t g = 0; g < pts.size(); ++g)
    {
        pt_ok[g] = spec.support.contains(pts[g]);
        pt_loss[g] = pt_ok[g] ? eval_loss(pts[g], alpha, beta, spec.loss) : 0.0;
    }

    // Per-sample envelopes and the covariate-side entry/exit costs.
    std::vector<SampleEnv> env(static_cast<std::size_t>(N));
    std::vector<bool> inside(static_cast<std::size_t>(N), false);
    for (int i : geo.I1)
    {
        inside[static_cast<std::size_t>(i)] = true;
    }
    for (int i = 0; i < N; ++i)
    {
        SampleEnv& e = env[static_cast<std::size_t>(i)];
        e.entry = geo.kappa[i];
        e.exit = inside[static_cast<std::size_t>(i)] ? geo.d[i] : 0.0;
        std::vector<EnvPoint> cand;
        if (spec.support.contains(data.y(i)))
        {
            cand.push_back({0.0, eval_loss(data.y(i), alpha, beta, spec.loss), -1});
        }
        for (std::size_t g = 0; g < pts.size(); ++g)
        {
            if (pt_ok[g])
            {
                cand.push_back({y_cost(pts[g], data.y(i)), pt_loss[g],
                                static_cast<int>(g)});
            }
        }
        if (cand.empty())
        {
            e.can_enter = false;
            continue;
        }
        e.pts = build_envelope(std::move(cand));
    }
    std::vector<Increment> incs;
    for (int i = 0; i < N; ++i)
    {
        const auto& p = env[static_cast<std::size_t>(i)].pts;
        for (std::size_t k = 0; k + 1 < p.size(); ++k)
        {
            const double dc = p[k + 1].cost - p[k].cost;
            const double dl = p[k + 1].loss - p[k].loss;
            incs.push_back({i, static_cast<int>(k), dc, dl, dl / dc});
        }
    }
    std::sort(incs.begin(), incs.end(),
              [](const Increment& a, const Increment& b) { return a.ratio > b.ratio; });

    // Fiber-mass candidates: the equality slice sum u = N*eps on an
    // 11-level grid (one designated coordinate absorbs the residual),
    // plus knapsack-style vertices.
    const double target = N * eps;
    std::vector<Eigen::VectorXd> candidates;
    std::unordered_set<std::uint64_t> seen;
    const auto push_u = [&](const Eigen::VectorXd& u) {
        for (int i = 0; i < N; ++i)
        {
            if (u[i] < -1e-9 or u[i] > 1.0 + 1e-9)
            {
                return;
            }
            if (u[i] > 0.0 and !env[static_cast<std::size_t>(i)].can_enter)
            {
                return;
            }
        }
        if (u.sum() <= 1e-12)
        {
            return;
        }
        if (seen.insert(u_key(u)).second)
        {
            candidates.push_back(u.cwiseMax(0.0).cwiseMin(1.0));
        }
    };

    const int levels = 11;
    for (int resid = 0; resid < N; ++resid)
    {
        std::vector<int> lvl(static_cast<std::size_t>(N - 1), 0);
        while (true)
        {
            Eigen::VectorXd u(N);
            double sum = 0.0;
            int pos = 0;
            for (int i = 0; i < N; ++i)
            {
                if (i == resid)
                {
                    continue;
                }
                u[i] = lvl[static_cast<std::size_t>(pos++)] / double(levels - 1);
                sum += u[i];
            }
            u[resid] = target - sum;
            if (u[resid] >= -1e-9 and u[resid] <= 1.0 + 1e-9)
            {
                push_u(u);
            }
            int j = 0;
            for (; j < N - 1; ++j)
            {
                if (++lvl[static_cast<std::size_t>(j)] < levels)
                {
                    break;
                }
                lvl[static_cast<std::size_t>(j)] = 0;
            }
            if (j == N - 1)
            {
                break;
            }
        }
        if (N == 1)
        {
            Eigen::VectorXd u(1);
            u[0] = target;
            push_u(u);
            break;
        }
    }
    {
        // Knapsack witness: fill the floor with the cheapest entries.
        std::vector<int> order(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i)
        {
            order[static_cast<std::size_t>(i)] = i;
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return geo.kappa[a] < geo.kappa[b]; });
        Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
        double need = target;
        for (int i : order)
        {
            const double take = std::min(1.0, need);
            u[i] = take;
            need -= take;
            if (need <= 0.0)
            {
                break;
            }
        }
        push_u(u);
        // Untransported configuration: every inside sample keeps its mass.
        Eigen::VectorXd nat = Eigen::VectorXd::Zero(N);
        for (int i : geo.I1)
        {
            nat[i] = 1.0;
        }
        if (nat.sum() >= target - 1e-12)
        {
            push_u(nat);
            // Cheapest-exit reduction of the natural mass down to the floor.
            std::vector<int> ex(geo.I1);
            std::stable_sort(ex.begin(), ex.end(),
                             [&](int a, int b) { return geo.d[a] < geo.d[b]; });
            Eigen::VectorXd red = nat;
            double excess = nat.sum() - target;
            for (int i : ex)
            {
                const double cut = std::min(red[i], excess);
                red[i] -= cut;
                excess -= cut;
                if (excess <= 0.0)
                {
                    break;
                }
            }
            push_u(red);
        }
    }

    // Evaluate every candidate.
    const double budget = N * rho;
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_u;
    bool any_feasible = false;
    for (const Eigen::VectorXd& u : candidates)
    {
        double base = 0.0;
        for (int i = 0; i < N; ++i)
        {
            const SampleEnv& e = env[static_cast<std::size_t>(i)];
            const double enter = e.entry + (e.can_enter ? e.pts.front().cost : 0.0);
            base += u[i] * enter + (1.0 - u[i]) * e.exit;
        }
        if (base > budget + 1e-9)
        {
            continue;
        }
        any_feasible = true;
        const InnerResult r =
            inner_solve(env, incs, u, std::max(0.0, budget - base), false);
        const double v = r.numerator / u.sum();
        if (v > best)
        {
            best = v;
            best_u = u;
        }
    }
    if (!any_feasible)
    {
        throw Error(ErrorCode::RegimeRhoBelowMin,
                    "worst_case_bruteforce: no discretized adversary fits the "
                    "transport budget");
    }

    // Reconstruct the winner's transport plan.
    WorstCaseDistribution wc;
    wc.plans.resize(static_cast<std::size_t>(N));
    wc.fiber_mass = best_u;
    double base = 0.0;
    for (int i = 0; i < N; ++i)
    {
        const SampleEnv& e = env[static_cast<std::size_t>(i)];
        const double enter = e.entry + (e.can_enter ? e.pts.front().cost : 0.0);
        base += best_u[i] * enter + (1.0 - best_u[i]) * e.exit;
    }
    const InnerResult r =
        inner_solve(env, incs, best_u, std::max(0.0, budget - base), true);
    wc.value = r.numerator / best_u.sum();
    const double sqrt_gamma = std::sqrt(spec.fiber.gamma);
    double total_cost = 0.0;
    for (int i = 0; i < N; ++i)
    {
        auto& plan = wc.plans[static_cast<std::size_t>(i)];
        const SampleEnv& e = env[static_cast<std::size_t>(i)];
        const double ui = best_u[i];
        const auto emit_in = [&](const EnvPoint& p, double mass) {
            if (mass <= 0.0)
            {
                return;
            }
            TransportAtom atom;
            atom.x = geo.projections.row(i).transpose();
            if (!inside[static_cast<std::size_t>(i)] and spec.fiber.gamma > 0.0)
            {
                // Pull boundary projections a hair inward so the fiber
                // membership of the atom is unambiguous under roundoff.
                atom.x = spec.fiber.x0 + (atom.x - spec.fiber.x0) * (1.0 - 1e-9);
            }
            atom.y = p.grid_index < 0 ? data.y(i)
                                      : pts[static_cast<std::size_t>(p.grid_index)];
            atom.mass = mass;
            atom.cost = x_cost(spec.cost, atom.x, data.x(i)) + p.cost;
            atom.in_fiber = true;
            total_cost += atom.cost * mass;
            plan.push_back(std::move(atom));
        };
        if (ui > 0.0)
        {
            const auto [k, frac] = r.position[static_cast<std::size_t>(i)];
            emit_in(e.pts[static_cast<std::size_t>(k)], ui * (1.0 - frac));
            if (frac > 0.0)
            {
                emit_in(e.pts[static_cast<std::size_t>(k + 1)], ui * frac);
            }
        }
        const double out_mass = 1.0 - ui;
        if (out_mass > 0.0)
        {
            TransportAtom atom;
            atom.y = data.y(i);
            atom.mass = out_mass;
            if (inside[static_cast<std::size_t>(i)])
            {
                // Limiting exit: nudge just across the fiber boundary along
                // the outward radial direction.
                Eigen::VectorXd dir = data.x(i) - spec.fiber.x0;
                const double norm = dir.norm();
                if (norm < 1e-14)
                {
                    dir = Eigen::VectorXd::Zero(data.n());
                    dir[0] = 1.0;
                }
                else
                {
                    dir /= norm;
                }
                const double radius = sqrt_gamma * (1.0 + 1e-9) + 1e-12;
                atom.x = spec.fiber.x0 + radius * dir;
                atom.cost = x_cost(spec.cost, atom.x, data.x(i));
                atom.in_fiber = false;
            }
            else
            {
                atom.x = data.x(i);
                atom.cost = 0.0;
                atom.in_fiber = false;
            }
            total_cost += atom.cost * atom.mass;
            plan.push_back(std::move(atom));
        }
    }
    wc.transport_cost = total_cost / N;
    return {wc.value, wc};
}

double saa_conditional_loss(const Eigen::VectorXd& alpha, double beta,
                            const SampleSet& data, const FiberSpec& fiber,
                            const LossSpec& loss, const GroundCostConfig& cfg)
{
    detail::require(alpha.size() == data.m(), ErrorCode::DimensionMismatch,
                    "saa_conditional_loss: alpha length != asset count");
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < data.N(); ++i)
    {
        if (x_cost(cfg, data.x(i), fiber.x0) <= fiber.gamma)
        {
            sum += eval_loss(data.y(i), alpha, beta, loss);
            ++count;
        }
    }
    if (count == 0)
    {
        throw Error(ErrorCode::EmptyFiber,
                    "saa_conditional_loss: conditioning on empirical null event");
    }
    return sum / count;
}

WorstCaseDistribution construct_feasible_adversary(const Eigen::VectorXd& alpha,
                                                   double beta,
                                                   const ProblemSpec& spec)
{
    const SampleSet& data = spec.data;
    const int N = data.N();
    detail::require(alpha.size() == data.m(), ErrorCode::DimensionMismatch,
                    "construct_feasible_adversary: alpha length != asset count");
    const GeometryStats geo = compute_geometry(data, spec.fiber, spec.cost);

    // Knapsack-optimal fiber masses: cheapest entry costs first until the
    // floor is met (the witness for rho >= rho_min).
    std::vector<int> order(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
    {
        order[static_cast<std::size_t>(i)] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return geo.kappa[a] < geo.kappa[b]; });
    Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
    double need = N * spec.ambiguity.eps;
    for (int i : order)
    {
        const double take = std::min(1.0, need);
        u[i] = take;
        need -= take;
        if (need <= 0.0)
        {
            break;
        }
    }

    WorstCaseDistribution wc;
    wc.plans.resize(static_cast<std::size_t>(N));
    wc.fiber_mass = Eigen::VectorXd::Zero(N);
    double total_cost = 0.0;
    double mass_in = 0.0;
    double loss_in = 0.0;
    for (int i = 0; i < N; ++i)
    {
        auto& plan = wc.plans[static_cast<std::size_t>(i)];
        const bool inside = x_cost(spec.cost, data.x(i), spec.fiber.x0) <=
                            spec.fiber.gamma;
        if (u[i] > 0.0)
        {
            TransportAtom atom;
            atom.x = geo.projections.row(i).transpose();
            if (!inside and spec.fiber.gamma > 0.0)
            {
                atom.x = spec.fiber.x0 + (atom.x - spec.fiber.x0) * (1.0 - 1e-9);
            }
            atom.y = data.y(i);
            atom.mass = u[i];
            atom.cost = x_cost(spec.cost, atom.x, data.x(i));
            atom.in_fiber = true;
            total_cost += atom.cost * atom.mass;
            plan.push_back(std::move(atom));
        }
        if (u[i] < 1.0)
        {
            TransportAtom atom;
            atom.x = data.x(i);
            atom.y = data.y(i);
            atom.mass = 1.0 - u[i];
            atom.cost = 0.0;
            atom.in_fiber = inside;
            plan.push_back(std::move(atom));
        }
        for (const TransportAtom& atom : plan)
        {
            if (atom.in_fiber)
            {
                wc.fiber_mass[i] += atom.mass;
                mass_in += atom.mass;
                loss_in += atom.mass * eval_loss(atom.y, alpha, beta, spec.loss);
            }
        }
    }
    wc.transport_cost = total_cost / N;
    wc.value = mass_in > 0.0 ? loss_in / mass_in : 0.0;
    return wc;
}

} // namespace condor
