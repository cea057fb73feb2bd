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

#include "condor/reformulations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "condor/feasibility.hpp"
#include "program_builder.hpp"

namespace condor
{

ProblemSpec::ProblemSpec(SampleSet data_in, FiberSpec fiber_in,
                         AmbiguitySpec ambiguity_in, LossSpec loss_in,
                         SupportSpec support_in, FeasibleSet feasible_in,
                         GroundCostConfig cost_in)
    : data(std::move(data_in)), fiber(std::move(fiber_in)), ambiguity(ambiguity_in),
      loss(loss_in), support(std::move(support_in)), feasible(std::move(feasible_in)),
      cost(cost_in)
{
    detail::require(data.n() == fiber.x0.size(), ErrorCode::DimensionMismatch,
                    "ProblemSpec: covariate dimension != fiber center dimension");
    detail::require(feasible.m() == data.m(), ErrorCode::DimensionMismatch,
                    "ProblemSpec: feasible set dimension != asset count");
    if (support.kind() == SupportKind::Ellipsoid)
    {
        detail::require(support.q().size() == data.m(), ErrorCode::DimensionMismatch,
                        "ProblemSpec: support dimension != asset count");
    }
}

ProblemSpec ProblemSpec::with_ambiguity(const AmbiguitySpec& a) const
{
    ProblemSpec copy = *this;
    copy.ambiguity = a;
    return copy;
}

RecourseSpec::RecourseSpec(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in,
                           Eigen::MatrixXd C_in, Eigen::VectorXd c_in,
                           Eigen::VectorXd y_lower_in, Eigen::VectorXd y_upper_in)
    : A(std::move(A_in)), B(std::move(B_in)), C(std::move(C_in)), c(std::move(c_in)),
      y_lower(std::move(y_lower_in)), y_upper(std::move(y_upper_in))
{
    const auto K = A.rows();
    const auto m = c.size();
    detail::require(m >= 1, ErrorCode::InvalidArgument, "RecourseSpec: empty profit");
    detail::require(B.rows() == K and C.rows() == K, ErrorCode::DimensionMismatch,
                    "RecourseSpec: A, B, C must have the same row count");
    detail::require(A.cols() == m and B.cols() == m and C.cols() == m,
                    ErrorCode::DimensionMismatch,
                    "RecourseSpec: A, B, C must have m columns");
    detail::require(y_lower.size() == m and y_upper.size() == m,
                    ErrorCode::DimensionMismatch,
                    "RecourseSpec: support bounds must have length m");
    detail::require(y_lower.allFinite() and y_upper.allFinite(),
                    ErrorCode::InvalidArgument,
                    "RecourseSpec: support bounds must be finite (bounded support)");
    detail::require((y_lower.array() <= y_upper.array()).all(),
                    ErrorCode::InvalidArgument,
                    "RecourseSpec: lower bound exceeds upper bound");
}

double box_support(const Eigen::VectorXd& z, const Eigen::VectorXd& lower,
                   const Eigen::VectorXd& upper)
{
    detail::require(z.size() == lower.size() and z.size() == upper.size(),
                    ErrorCode::DimensionMismatch, "box_support: lengths differ");
    double value = 0.0;
    for (int j = 0; j < z.size(); ++j)
    {
        value += std::max(z[j] * lower[j], z[j] * upper[j]);
    }
    return value;
}

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

using build_detail::Builder;
using build_detail::Decisions;
using build_detail::decision_constants;
using build_detail::decision_variables;
using build_detail::dot;
using build_detail::fmt;
using build_detail::extract_allocation;
using build_detail::solve_or_throw;

/// Common guard for the singular-fiber programs; returns the per-sample
/// covariate costs.
Eigen::VectorXd guard_singleton(const ProblemSpec& spec, LossKind expected)
{
    detail::require(spec.loss.kind == expected, ErrorCode::UnsupportedProgram,
                    "builder: loss kind does not match this program family");
    detail::require(spec.fiber.gamma == 0.0, ErrorCode::InvalidArgument,
                    "builder: this program family requires a singular fiber "
                    "(gamma = 0)");
    detail::require(spec.support.kind() == SupportKind::WholeSpace,
                    ErrorCode::UnsupportedProgram,
                    "builder: singular-fiber cone programs require an unbounded "
                    "return support");
    if (spec.ambiguity.eps == 0.0)
    {
        throw Error(ErrorCode::RegimeUninformative,
                    "builder: gamma = 0 with eps = 0 is uninformative (the worst "
                    "case equals the support supremum and ignores the data)");
    }
    const GeometryStats geo = compute_geometry(spec.data, spec.fiber, spec.cost);
    const double floor = rho_min(geo.kappa, spec.ambiguity.eps, spec.data.N());
    if (spec.ambiguity.rho <= floor)
    {
        throw Error(ErrorCode::RegimeRhoBelowMin,
                    "builder: rho = " + fmt(spec.ambiguity.rho) +
                        " does not exceed rho_min = " + fmt(floor));
    }
    return geo.kappa;
}

GeometryStats guard_fiber(const ProblemSpec& spec, LossKind expected)
{
    detail::require(spec.loss.kind == expected, ErrorCode::UnsupportedProgram,
                    "builder: loss kind does not match this program family");
    detail::require(spec.fiber.gamma > 0.0, ErrorCode::InvalidArgument,
                    "builder: this program family requires a proper fiber "
                    "(gamma > 0)");
    detail::require(spec.ambiguity.eps > 0.0, ErrorCode::InvalidArgument,
                    "builder: eps = 0 must be routed through reduce_null_eps "
                    "before building the fiber program");
    GeometryStats geo = compute_geometry(spec.data, spec.fiber, spec.cost);
    const double floor = rho_min(geo.kappa, spec.ambiguity.eps, spec.data.N());
    if (spec.ambiguity.rho <= floor)
    {
        throw Error(ErrorCode::RegimeRhoBelowMin,
                    "builder: rho = " + fmt(spec.ambiguity.rho) +
                        " does not exceed rho_min = " + fmt(floor));
    }
    return geo;
}

// -----------------------------------------------------------------------
// Singular-fiber SOCPs.
// -----------------------------------------------------------------------

ConicProgram mv_singleton_impl(const ProblemSpec& spec, Builder& b,
                               const Decisions& dec, const Eigen::VectorXd& kappa)
{
    const int N = spec.data.N();
    const double eps = spec.ambiguity.eps;
    const double eta = spec.loss.eta;

    const int lambda1 = b.add_var("lambda1");
    const int lambda2 = b.add_var("lambda2");
    const std::vector<int> theta = b.add_vec("theta", N);
    const std::vector<int> z = b.add_vec("z", N);
    const int w = b.add_var("w");

    b.add_cost(lambda1, spec.ambiguity.rho);
    b.add_cost(lambda2, eps);
    for (int i = 0; i < N; ++i)
    {
        b.add_cost(theta[static_cast<std::size_t>(i)], 1.0 / N);
    }

    std::vector<AffineExpr> signs;
    signs.push_back(AffineExpr::var(lambda1));
    signs.push_back(AffineExpr::var(w));
    signs.push_back(AffineExpr(1.0) - AffineExpr::var(w));

    // || (2 alpha, 1 - w - eps*lambda1) ||_2 <= 1 - w + eps*lambda1.
    {
        std::vector<AffineExpr> soc;
        soc.push_back(AffineExpr(1.0) - AffineExpr::var(w) +
                      AffineExpr::var(lambda1, eps));
        for (const AffineExpr& aj : dec.alpha)
        {
            soc.push_back(2.0 * aj);
        }
        soc.push_back(AffineExpr(1.0) - AffineExpr::var(w) -
                      AffineExpr::var(lambda1, eps));
        b.p.cones.push_back(ConeBlock::second_order(std::move(soc)));
    }

    for (int i = 0; i < N; ++i)
    {
        const AffineExpr zi = AffineExpr::var(z[static_cast<std::size_t>(i)]);
        const AffineExpr ti = AffineExpr::var(theta[static_cast<std::size_t>(i)]);
        signs.push_back(ti);
        signs.push_back(zi);
        // z_i = eps*theta_i + eps*kappa_i*lambda1 + eps*lambda2
        //       + eta^2/4 + eta*beta.
        b.p.equalities.push_back(zi - eps * ti -
                                 AffineExpr::var(lambda1, eps * kappa[i]) -
                                 AffineExpr::var(lambda2, eps) -
                                 AffineExpr(eta * eta / 4.0) - eta * dec.beta);
        // || (2 y_i'alpha - 2 beta - eta, z_i - w) ||_2 <= z_i + w.
        const AffineExpr vi = dot(spec.data.y(i), dec.alpha);
        std::vector<AffineExpr> soc;
        soc.push_back(zi + AffineExpr::var(w));
        soc.push_back(2.0 * vi - 2.0 * dec.beta - AffineExpr(eta));
        soc.push_back(zi - AffineExpr::var(w));
        b.p.cones.push_back(ConeBlock::second_order(std::move(soc)));
    }
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(signs)));
    return b.finalize();
}

ConicProgram cvar_singleton_impl(const ProblemSpec& spec, Builder& b,
                                 const Decisions& dec, const Eigen::VectorXd& kappa)
{
    const int N = spec.data.N();
    const double eps = spec.ambiguity.eps;
    const double eta = spec.loss.eta;
    const double tau = spec.loss.tau;

    const int lambda1 = b.add_var("lambda1");
    const int lambda2 = b.add_var("lambda2");
    const std::vector<int> theta = b.add_vec("theta", N);
    const std::vector<int> z = b.add_vec("z", N);
    const std::vector<int> zt = b.add_vec("ztilde", N);

    b.add_cost(lambda1, spec.ambiguity.rho);
    b.add_cost(lambda2, eps);
    for (int i = 0; i < N; ++i)
    {
        b.add_cost(theta[static_cast<std::size_t>(i)], 1.0 / N);
    }

    std::vector<AffineExpr> signs;
    signs.push_back(AffineExpr::var(lambda1));

    for (int i = 0; i < N; ++i)
    {
        const AffineExpr zi = AffineExpr::var(z[static_cast<std::size_t>(i)]);
        const AffineExpr zti = AffineExpr::var(zt[static_cast<std::size_t>(i)]);
        const AffineExpr ti = AffineExpr::var(theta[static_cast<std::size_t>(i)]);
        const AffineExpr vi = dot(spec.data.y(i), dec.alpha);
        signs.push_back(ti);
        signs.push_back(zi);
        signs.push_back(zti);
        // z_i     = theta_i + kappa_i*lambda1 + lambda2
        //           + (eta/eps) y_i'alpha - beta/eps
        // ztilde_i = ... with slopes (eta + 1/tau) and level (1 - 1/tau).
        b.p.equalities.push_back(zi - ti - AffineExpr::var(lambda1, kappa[i]) -
                                 AffineExpr::var(lambda2) - (eta / eps) * vi +
                                 (1.0 / eps) * dec.beta);
        b.p.equalities.push_back(zti - ti - AffineExpr::var(lambda1, kappa[i]) -
                                 AffineExpr::var(lambda2) -
                                 ((eta + 1.0 / tau) / eps) * vi +
                                 ((1.0 - 1.0 / tau) / eps) * dec.beta);
        // || ((eta/eps) alpha, z_i - lambda1) ||_2 <= z_i + lambda1 and the
        // companion with slope eta + 1/tau.
        std::vector<AffineExpr> soc1;
        soc1.push_back(zi + AffineExpr::var(lambda1));
        for (const AffineExpr& aj : dec.alpha)
        {
            soc1.push_back((eta / eps) * aj);
        }
        soc1.push_back(zi - AffineExpr::var(lambda1));
        b.p.cones.push_back(ConeBlock::second_order(std::move(soc1)));

        std::vector<AffineExpr> soc2;
        soc2.push_back(zti + AffineExpr::var(lambda1));
        for (const AffineExpr& aj : dec.alpha)
        {
            soc2.push_back(((eta + 1.0 / tau) / eps) * aj);
        }
        soc2.push_back(zti - AffineExpr::var(lambda1));
        b.p.cones.push_back(ConeBlock::second_order(std::move(soc2)));
    }
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(signs)));
    return b.finalize();
}

// -----------------------------------------------------------------------
// Proper-fiber SDPs over the dual polyhedron.
// -----------------------------------------------------------------------

struct FiberDualVars
{
    std::vector<int> lambda;
    std::vector<int> s;
    std::vector<int> psi;
    int nu_plus = -1;
    int nu_minus = -1;
    int phi = -1;
    int varphi = -1;
};

/// Allocates the dual variables, their sign constraints, the polyhedron
/// rows and the objective phi + nu+/(N eps) - nu-/N.
FiberDualVars fiber_dual_polyhedron(Builder& b, const GeometryStats& geo, double rho,
                                    double eps, int N)
{
    FiberDualVars v;
    v.lambda = b.add_vec("lambda", N);
    v.s = b.add_vec("s", N);
    v.psi = b.add_vec("psi", N);
    v.nu_plus = b.add_var("nu_plus");
    v.nu_minus = b.add_var("nu_minus");
    v.phi = b.add_var("phi");
    v.varphi = b.add_var("varphi");

    b.add_cost(v.phi, 1.0);
    b.add_cost(v.nu_plus, 1.0 / (N * eps));
    b.add_cost(v.nu_minus, -1.0 / N);

    std::vector<AffineExpr> rows;
    rows.push_back(AffineExpr::var(v.nu_plus));
    rows.push_back(AffineExpr::var(v.nu_minus));
    rows.push_back(AffineExpr::var(v.varphi));
    double d1_sum = 0.0;
    for (int i : geo.I1)
    {
        d1_sum += geo.d[i];
    }
    for (int i : geo.I1)
    {
        // phi - d_i varphi + psi_i - s_i >= 0.
        rows.push_back(AffineExpr::var(v.phi) -
                       AffineExpr::var(v.varphi, geo.d[i]) +
                       AffineExpr::var(v.psi[static_cast<std::size_t>(i)]) -
                       AffineExpr::var(v.s[static_cast<std::size_t>(i)]));
    }
    for (int i : geo.I2)
    {
        // phi + d_i varphi + psi_i - s_i >= 0.
        rows.push_back(AffineExpr::var(v.phi) +
                       AffineExpr::var(v.varphi, geo.d[i]) +
                       AffineExpr::var(v.psi[static_cast<std::size_t>(i)]) -
                       AffineExpr::var(v.s[static_cast<std::size_t>(i)]));
    }
    // nu+ - nu- + (sum_{I1} d_i - N rho) varphi - sum_i psi_i >= 0.
    AffineExpr coupling = AffineExpr::var(v.nu_plus) -
                          AffineExpr::var(v.nu_minus) +
                          AffineExpr::var(v.varphi, d1_sum - N * rho);
    for (int i = 0; i < N; ++i)
    {
        coupling -= AffineExpr::var(v.psi[static_cast<std::size_t>(i)]);
        // psi_i >= 0 and varphi >= lambda_i >= 0.
        rows.push_back(AffineExpr::var(v.psi[static_cast<std::size_t>(i)]));
        rows.push_back(AffineExpr::var(v.varphi) -
                       AffineExpr::var(v.lambda[static_cast<std::size_t>(i)]));
        rows.push_back(AffineExpr::var(v.lambda[static_cast<std::size_t>(i)]));
    }
    rows.push_back(std::move(coupling));
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(rows)));
    return v;
}

/// Quadratic-form entry helpers for the per-sample LMIs. The inner
/// supremum constraint
///
///   s_i >= sup_y { loss(y) - lambda_i ||y - y_i||^2, y in support }
///
/// is equivalent, for the mean-variance loss, to the nonnegativity on the
/// support of
///
///   B(y) = lambda_i ||y - y_i||^2 - (y'alpha - beta)^2 + eta y'alpha + s_i.
///
/// Homogenizing in (y, 1) and taking a Schur complement for the squared
/// affine term gives one (m+2)-order LMI with entries jointly affine in
/// (lambda_i, s_i, alpha, beta):
///
///   [ lambda_i I + w Q   (eta/2) alpha - lambda_i y_i + w q   alpha ]
///   [        .           s_i + lambda_i ||y_i||^2 + w q0      -beta ] >= 0,
///   [     alpha'                      -beta                     1   ]
///
/// where (Q, q, q0, w) is the S-procedure term for an ellipsoidal support
/// (absent for the whole space). Exactness of the S-procedure holds by
/// the S-lemma with the Slater point required at support construction.
void mv_fiber_lmi(Builder& b, const ProblemSpec& spec, const Decisions& dec,
                  const FiberDualVars& v, int i, int omega)
{
    const int m = spec.data.m();
    const int k = m + 2;
    const Eigen::VectorXd yi = spec.data.y(i);
    const double eta = spec.loss.eta;
    const int li = v.lambda[static_cast<std::size_t>(i)];
    const int si = v.s[static_cast<std::size_t>(i)];
    const bool ell = spec.support.kind() == SupportKind::Ellipsoid;

    std::vector<AffineExpr> M(static_cast<std::size_t>(k * k));
    const auto at = [&](int r, int c) -> AffineExpr& {
        return M[static_cast<std::size_t>(r * k + c)];
    };
    for (int r = 0; r < m; ++r)
    {
        for (int c = 0; c < m; ++c)
        {
            at(r, c) = r == c ? AffineExpr::var(li) : AffineExpr(0.0);
            if (ell)
            {
                at(r, c) += AffineExpr::var(omega, spec.support.Q()(r, c));
            }
        }
        AffineExpr off = (eta / 2.0) * dec.alpha[static_cast<std::size_t>(r)] -
                         AffineExpr::var(li, yi[r]);
        if (ell)
        {
            off += AffineExpr::var(omega, spec.support.q()[r]);
        }
        at(r, m) = off;
        at(m, r) = off;
        at(r, m + 1) = dec.alpha[static_cast<std::size_t>(r)];
        at(m + 1, r) = dec.alpha[static_cast<std::size_t>(r)];
    }
    AffineExpr corner = AffineExpr::var(si) +
                        AffineExpr::var(li, yi.squaredNorm());
    if (ell)
    {
        corner += AffineExpr::var(omega, spec.support.q0());
    }
    at(m, m) = corner;
    at(m, m + 1) = -dec.beta;
    at(m + 1, m) = -dec.beta;
    at(m + 1, m + 1) = AffineExpr(1.0);
    b.p.cones.push_back(ConeBlock::psd(k, std::move(M)));
}

/// One CVaR-piece LMI of order m+1 for
///   s_i >= sup_y { c'y + b0 - lambda_i ||y - y_i||^2, y in support },
/// i.e. [ lambda_i I + w Q,  -c/2 - lambda_i y_i + w q ;
///        .               ,  s_i + lambda_i||y_i||^2 - b0 + w q0 ] >= 0.
void cvar_fiber_lmi(Builder& b, const ProblemSpec& spec, const Decisions& dec,
                    const FiberDualVars& v, int i, double slope,
                    const AffineExpr& level, int omega)
{
    const int m = spec.data.m();
    const int k = m + 1;
    const Eigen::VectorXd yi = spec.data.y(i);
    const int li = v.lambda[static_cast<std::size_t>(i)];
    const int si = v.s[static_cast<std::size_t>(i)];
    const bool ell = spec.support.kind() == SupportKind::Ellipsoid;

    std::vector<AffineExpr> M(static_cast<std::size_t>(k * k));
    const auto at = [&](int r, int c) -> AffineExpr& {
        return M[static_cast<std::size_t>(r * k + c)];
    };
    for (int r = 0; r < m; ++r)
    {
        for (int c = 0; c < m; ++c)
        {
            at(r, c) = r == c ? AffineExpr::var(li) : AffineExpr(0.0);
            if (ell)
            {
                at(r, c) += AffineExpr::var(omega, spec.support.Q()(r, c));
            }
        }
        // The piece is  c'y + b0  with  c = -slope * alpha, so -c/2 is
        // (slope/2) alpha.
        AffineExpr off = (slope / 2.0) * dec.alpha[static_cast<std::size_t>(r)] -
                         AffineExpr::var(li, yi[r]);
        if (ell)
        {
            off += AffineExpr::var(omega, spec.support.q()[r]);
        }
        at(r, m) = off;
        at(m, r) = off;
    }
    AffineExpr corner = AffineExpr::var(si) +
                        AffineExpr::var(li, yi.squaredNorm()) - level;
    if (ell)
    {
        corner += AffineExpr::var(omega, spec.support.q0());
    }
    at(m, m) = corner;
    b.p.cones.push_back(ConeBlock::psd(k, std::move(M)));
}

ConicProgram mv_fiber_impl(const ProblemSpec& spec, Builder& b, const Decisions& dec,
                           const GeometryStats& geo)
{
    const int N = spec.data.N();
    const FiberDualVars v = fiber_dual_polyhedron(b, geo, spec.ambiguity.rho,
                                                  spec.ambiguity.eps, N);
    std::vector<int> omega;
    if (spec.support.kind() == SupportKind::Ellipsoid)
    {
        omega = b.add_vec("omega", N);
        std::vector<AffineExpr> signs;
        for (int i = 0; i < N; ++i)
        {
            signs.push_back(AffineExpr::var(omega[static_cast<std::size_t>(i)]));
        }
        b.p.cones.push_back(ConeBlock::nonnegative(std::move(signs)));
    }
    for (int i = 0; i < N; ++i)
    {
        mv_fiber_lmi(b, spec, dec, v, i,
                     omega.empty() ? -1 : omega[static_cast<std::size_t>(i)]);
    }
    return b.finalize();
}

ConicProgram cvar_fiber_impl(const ProblemSpec& spec, Builder& b, const Decisions& dec,
                             const GeometryStats& geo)
{
    const int N = spec.data.N();
    const double eta = spec.loss.eta;
    const double tau = spec.loss.tau;
    const FiberDualVars v = fiber_dual_polyhedron(b, geo, spec.ambiguity.rho,
                                                  spec.ambiguity.eps, N);
    std::vector<int> omega1;
    std::vector<int> omega2;
    if (spec.support.kind() == SupportKind::Ellipsoid)
    {
        omega1 = b.add_vec("omega1", N);
        omega2 = b.add_vec("omega2", N);
        std::vector<AffineExpr> signs;
        for (int i = 0; i < N; ++i)
        {
            signs.push_back(AffineExpr::var(omega1[static_cast<std::size_t>(i)]));
            signs.push_back(AffineExpr::var(omega2[static_cast<std::size_t>(i)]));
        }
        b.p.cones.push_back(ConeBlock::nonnegative(std::move(signs)));
    }
    for (int i = 0; i < N; ++i)
    {
        // Piece 1: -eta y'alpha + beta. Piece 2: -(eta + 1/tau) y'alpha
        // + (1 - 1/tau) beta.
        cvar_fiber_lmi(b, spec, dec, v, i, eta, dec.beta,
                       omega1.empty() ? -1 : omega1[static_cast<std::size_t>(i)]);
        cvar_fiber_lmi(b, spec, dec, v, i, eta + 1.0 / tau,
                       (1.0 - 1.0 / tau) * dec.beta,
                       omega2.empty() ? -1 : omega2[static_cast<std::size_t>(i)]);
    }
    return b.finalize();
}

// -----------------------------------------------------------------------
// Type-infinity ball SOCPs.
// -----------------------------------------------------------------------

struct InftyContext
{
    TypeInftyIndex idx;
    Eigen::VectorXd kappa;
};

InftyContext guard_infty(const ProblemSpec& spec, LossKind expected)
{
    detail::require(spec.loss.kind == expected, ErrorCode::UnsupportedProgram,
                    "builder: loss kind does not match this program family");
    detail::require(spec.ambiguity.order == TransportOrder::TypeInfty,
                    ErrorCode::InvalidArgument,
                    "builder: this program family requires the type-infinity ball");
    detail::require(spec.support.kind() == SupportKind::WholeSpace,
                    ErrorCode::UnsupportedProgram,
                    "builder: type-infinity cone programs require an unbounded "
                    "return support");
    InftyContext ctx;
    const GeometryStats geo = compute_geometry(spec.data, spec.fiber, spec.cost);
    ctx.kappa = geo.kappa;
    const double min_kappa = ctx.kappa.minCoeff();
    if (spec.ambiguity.rho <= min_kappa)
    {
        throw Error(ErrorCode::RegimeRhoBelowMin,
                    "builder: type-infinity radius rho = " + fmt(spec.ambiguity.rho) +
                        " does not exceed the minimal fiber entry cost " +
                        fmt(min_kappa));
    }
    ctx.idx = type_infty_index(spec.data, spec.fiber, spec.ambiguity.rho, spec.cost);
    if (ctx.idx.J.empty())
    {
        throw Error(ErrorCode::EmptyIndexSet,
                    "builder: no sample can reach the fiber within the "
                    "type-infinity radius (empty index set)");
    }
    return ctx;
}

/// Shared skeleton: variables lambda (the objective), per-sample u_i (free
/// on the deep-interior set, nonnegative otherwise) with sum u_i <= 0, and
/// an epigraph g >= ||alpha||_2 used by the per-sample ball radii.
struct InftySkeleton
{
    int lambda = -1;
    std::vector<int> u; ///< indexed by position in idx.J
    int g = -1;
};

InftySkeleton infty_skeleton(Builder& b, const InftyContext& ctx,
                             const Decisions& dec)
{
    InftySkeleton sk;
    sk.lambda = b.add_var("lambda");
    b.add_cost(sk.lambda, 1.0);
    sk.u = b.add_vec("u", static_cast<int>(ctx.idx.J.size()));
    sk.g = b.add_var("g");

    std::vector<AffineExpr> signs;
    AffineExpr usum;
    for (std::size_t pos = 0; pos < ctx.idx.J.size(); ++pos)
    {
        usum += AffineExpr::var(sk.u[pos]);
        const int i = ctx.idx.J[pos];
        const bool deep = std::find(ctx.idx.J1.begin(), ctx.idx.J1.end(), i) !=
                          ctx.idx.J1.end();
        if (!deep)
        {
            signs.push_back(AffineExpr::var(sk.u[pos]));
        }
    }
    signs.push_back(-usum);
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(signs)));

    std::vector<AffineExpr> soc;
    soc.push_back(AffineExpr::var(sk.g));
    for (const AffineExpr& aj : dec.alpha)
    {
        soc.push_back(aj);
    }
    b.p.cones.push_back(ConeBlock::second_order(std::move(soc)));
    return sk;
}

ConicProgram mv_infty_impl(const ProblemSpec& spec, Builder& b, const Decisions& dec,
                           const InftyContext& ctx)
{
    const double eta = spec.loss.eta;
    const double rho = spec.ambiguity.rho;
    const InftySkeleton sk = infty_skeleton(b, ctx, dec);
    const std::vector<int> t = b.add_vec("t", static_cast<int>(ctx.idx.J.size()));
    const std::vector<int> z = b.add_vec("z", static_cast<int>(ctx.idx.J.size()));

    std::vector<AffineExpr> rows;
    for (std::size_t pos = 0; pos < ctx.idx.J.size(); ++pos)
    {
        const int i = ctx.idx.J[pos];
        const AffineExpr vi = dot(spec.data.y(i), dec.alpha);
        const AffineExpr ti = AffineExpr::var(t[pos]);
        const AffineExpr zi = AffineExpr::var(z[pos]);
        // t_i >= | y_i'alpha - beta - eta/2 |.
        const AffineExpr centered = vi - dec.beta - AffineExpr(eta / 2.0);
        rows.push_back(ti - centered);
        rows.push_back(ti + centered);
        // t_i + sqrt(rho - kappa_i) ||alpha||_2 <= z_i.
        const double radius = std::sqrt(std::max(0.0, rho - ctx.kappa[i]));
        rows.push_back(zi - ti - AffineExpr::var(sk.g, radius));
        // z_i^2 <= lambda + u_i + eta beta + eta^2/4, as the rotated cone
        // || (2 z_i, 1 - h_i) ||_2 <= 1 + h_i with
        // h_i = lambda + u_i + eta beta + eta^2/4.
        const AffineExpr hi = AffineExpr::var(sk.lambda) + AffineExpr::var(sk.u[pos]) +
                              eta * dec.beta + AffineExpr(eta * eta / 4.0);
        std::vector<AffineExpr> soc;
        soc.push_back(AffineExpr(1.0) + hi);
        soc.push_back(2.0 * zi);
        soc.push_back(AffineExpr(1.0) - hi);
        b.p.cones.push_back(ConeBlock::second_order(std::move(soc)));
    }
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(rows)));
    return b.finalize();
}

ConicProgram cvar_infty_impl(const ProblemSpec& spec, Builder& b, const Decisions& dec,
                             const InftyContext& ctx)
{
    const double eta = spec.loss.eta;
    const double tau = spec.loss.tau;
    const double rho = spec.ambiguity.rho;
    const InftySkeleton sk = infty_skeleton(b, ctx, dec);

    // Per-sample ball supremum of the two-piece loss: for an affine piece
    // -a y'alpha + b0 the supremum over ||y - y_i||_2^2 <= rho - kappa_i
    // is -a y_i'alpha + a sqrt(rho - kappa_i) ||alpha||_2 + b0, so each
    // piece contributes one linear row in (lambda, u_i, alpha, beta, g).
    std::vector<AffineExpr> rows;
    for (std::size_t pos = 0; pos < ctx.idx.J.size(); ++pos)
    {
        const int i = ctx.idx.J[pos];
        const AffineExpr vi = dot(spec.data.y(i), dec.alpha);
        const double radius = std::sqrt(std::max(0.0, rho - ctx.kappa[i]));
        const AffineExpr head = AffineExpr::var(sk.lambda) +
                                AffineExpr::var(sk.u[pos]);
        rows.push_back(head + eta * vi - AffineExpr::var(sk.g, eta * radius) -
                       dec.beta);
        rows.push_back(head + (eta + 1.0 / tau) * vi -
                       AffineExpr::var(sk.g, (eta + 1.0 / tau) * radius) -
                       (1.0 - 1.0 / tau) * dec.beta);
    }
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(rows)));
    return b.finalize();
}

// -----------------------------------------------------------------------
// Two-stage linear-decision-rule SOCP.
// -----------------------------------------------------------------------

ConicProgram cvar_tslp_impl(const ProblemSpec& spec, const RecourseSpec& rec,
                            Builder& b, const Decisions& dec,
                            const Eigen::VectorXd& kappa)
{
    const int N = spec.data.N();
    const int m = spec.data.m();
    const int K = static_cast<int>(rec.A.rows());
    const double eps = spec.ambiguity.eps;
    const double eta = spec.loss.eta;
    const double tau = spec.loss.tau;

    const int lambda1 = b.add_var("lambda1");
    const int lambda2 = b.add_var("lambda2");
    const std::vector<int> theta = b.add_vec("theta", N);
    const std::vector<int> z = b.add_vec("z", N);
    const std::vector<int> zt = b.add_vec("ztilde", N);
    const std::vector<int> ups = b.add_vec("upsilon", m);
    // Row-major linear decision rule matrix.
    std::vector<std::vector<int>> U(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r)
    {
        U[static_cast<std::size_t>(r)] =
            b.add_vec("Ups[" + std::to_string(r) + "]", m);
    }

    b.add_cost(lambda1, spec.ambiguity.rho);
    b.add_cost(lambda2, eps);
    for (int j = 0; j < m; ++j)
    {
        b.add_cost(ups[static_cast<std::size_t>(j)], -(1.0 + eta) * rec.c[j]);
    }
    for (int i = 0; i < N; ++i)
    {
        b.add_cost(theta[static_cast<std::size_t>(i)], 1.0 / N);
    }

    // (Ups' c)_j = sum_r c_r Ups[r][j]: the effective return loadings of
    // the decision rule.
    std::vector<AffineExpr> uc(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
    {
        for (int r = 0; r < m; ++r)
        {
            uc[static_cast<std::size_t>(j)] +=
                AffineExpr::var(U[static_cast<std::size_t>(r)][static_cast<std::size_t>(
                                    j)],
                                rec.c[r]);
        }
    }

    std::vector<AffineExpr> signs;
    signs.push_back(AffineExpr::var(lambda1));
    for (int i = 0; i < N; ++i)
    {
        const AffineExpr zi = AffineExpr::var(z[static_cast<std::size_t>(i)]);
        const AffineExpr zti = AffineExpr::var(zt[static_cast<std::size_t>(i)]);
        const AffineExpr ti = AffineExpr::var(theta[static_cast<std::size_t>(i)]);
        const AffineExpr vi = dot(spec.data.y(i), uc);
        signs.push_back(ti);
        signs.push_back(zi);
        signs.push_back(zti);
        b.p.equalities.push_back(zi - ti - AffineExpr::var(lambda1, kappa[i]) -
                                 AffineExpr::var(lambda2) - (eta / eps) * vi +
                                 (1.0 / eps) * dec.beta);
        b.p.equalities.push_back(zti - ti - AffineExpr::var(lambda1, kappa[i]) -
                                 AffineExpr::var(lambda2) -
                                 ((eta + 1.0 / tau) / eps) * vi +
                                 ((1.0 - 1.0 / tau) / eps) * dec.beta);
        std::vector<AffineExpr> soc1;
        soc1.push_back(zi + AffineExpr::var(lambda1));
        for (const AffineExpr& e : uc)
        {
            soc1.push_back((eta / eps) * e);
        }
        soc1.push_back(zi - AffineExpr::var(lambda1));
        b.p.cones.push_back(ConeBlock::second_order(std::move(soc1)));
        std::vector<AffineExpr> soc2;
        soc2.push_back(zti + AffineExpr::var(lambda1));
        for (const AffineExpr& e : uc)
        {
            soc2.push_back(((eta + 1.0 / tau) / eps) * e);
        }
        soc2.push_back(zti - AffineExpr::var(lambda1));
        b.p.cones.push_back(ConeBlock::second_order(std::move(soc2)));
    }

    // Robust feasibility of the decision rule on the support box:
    //   e_k'(A alpha + B upsilon) + sup_y { ((Ups'B' - C') e_k)' y } <= 0,
    // with the box support function expanded by splitting the argument
    // into p_k - q_k >= 0 parts priced at the upper/lower corners.
    for (int k = 0; k < K; ++k)
    {
        const std::vector<int> pk = b.add_vec("p[" + std::to_string(k) + "]", m);
        const std::vector<int> qk = b.add_vec("q[" + std::to_string(k) + "]", m);
        AffineExpr row;
        for (int j = 0; j < m; ++j)
        {
            row += rec.A(k, j) * dec.alpha[static_cast<std::size_t>(j)];
            row += AffineExpr::var(ups[static_cast<std::size_t>(j)], rec.B(k, j));
            row += AffineExpr::var(pk[static_cast<std::size_t>(j)],
                                   rec.y_upper[j]);
            row -= AffineExpr::var(qk[static_cast<std::size_t>(j)],
                                   rec.y_lower[j]);
            signs.push_back(AffineExpr::var(pk[static_cast<std::size_t>(j)]));
            signs.push_back(AffineExpr::var(qk[static_cast<std::size_t>(j)]));
            // p_kj - q_kj = (Ups' B' e_k)_j - C_kj.
            AffineExpr link = AffineExpr::var(pk[static_cast<std::size_t>(j)]) -
                              AffineExpr::var(qk[static_cast<std::size_t>(j)]) +
                              AffineExpr(rec.C(k, j));
            for (int r = 0; r < m; ++r)
            {
                link -= AffineExpr::var(
                    U[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)],
                    rec.B(k, r));
            }
            b.p.equalities.push_back(std::move(link));
        }
        signs.push_back(-row);
    }
    b.p.cones.push_back(ConeBlock::nonnegative(std::move(signs)));
    return b.finalize();
}

} // namespace

// -----------------------------------------------------------------------
// Public builders.
// -----------------------------------------------------------------------

ConicProgram build_mv_singleton(const ProblemSpec& spec)
{
    const Eigen::VectorXd kappa = guard_singleton(spec, LossKind::MeanVariance);
    Builder b;
    const Decisions dec = decision_variables(b, spec.feasible);
    return mv_singleton_impl(spec, b, dec, kappa);
}

ConicProgram build_cvar_singleton(const ProblemSpec& spec)
{
    const Eigen::VectorXd kappa = guard_singleton(spec, LossKind::MeanCVaR);
    Builder b;
    const Decisions dec = decision_variables(b, spec.feasible);
    return cvar_singleton_impl(spec, b, dec, kappa);
}

ConicProgram build_mv_fiber(const ProblemSpec& spec)
{
    const GeometryStats geo = guard_fiber(spec, LossKind::MeanVariance);
    Builder b;
    const Decisions dec = decision_variables(b, spec.feasible);
    return mv_fiber_impl(spec, b, dec, geo);
}

ConicProgram build_cvar_fiber(const ProblemSpec& spec)
{
    const GeometryStats geo = guard_fiber(spec, LossKind::MeanCVaR);
    Builder b;
    const Decisions dec = decision_variables(b, spec.feasible);
    return cvar_fiber_impl(spec, b, dec, geo);
}

ConicProgram build_mv_infty(const ProblemSpec& spec)
{
    const InftyContext ctx = guard_infty(spec, LossKind::MeanVariance);
    Builder b;
    const Decisions dec = decision_variables(b, spec.feasible);
    return mv_infty_impl(spec, b, dec, ctx);
}

ConicProgram build_cvar_infty(const ProblemSpec& spec)
{
    const InftyContext ctx = guard_infty(spec, LossKind::MeanCVaR);
    Builder b;
    const Decisions dec = decision_variables(b, spec.feasible);
    return cvar_infty_impl(spec, b, dec, ctx);
}

ConicProgram build_cvar_tslp(const ProblemSpec& spec, const RecourseSpec& recourse)
{
    const Eigen::VectorXd kappa = guard_singleton(spec, LossKind::MeanCVaR);
    detail::require(recourse.A.cols() == spec.data.m(), ErrorCode::DimensionMismatch,
                    "build_cvar_tslp: recourse dimension != asset count");
    Builder b;
    const Decisions dec = decision_variables(b, spec.feasible);
    return cvar_tslp_impl(spec, recourse, b, dec, kappa);
}

// -----------------------------------------------------------------------
// Evaluation, routing and solves.
// -----------------------------------------------------------------------

double sup_loss_over_support(const SupportSpec& support, const LossSpec& loss,
                             const Eigen::VectorXd& alpha, double beta)
{
    if (support.kind() == SupportKind::WholeSpace)
    {
        if (!alpha.isZero(0.0))
        {
            return kInf;
        }
        return eval_loss_return(0.0, beta, loss);
    }
    // The loss depends on y only through v = y'alpha and is convex in v,
    // so the supremum sits at an endpoint of the attainable range.
    const auto [lo, hi] = support.linear_range(alpha);
    return std::max(eval_loss_return(lo, beta, loss),
                    eval_loss_return(hi, beta, loss));
}

std::variant<ProblemSpec, UninformativeRegime> reduce_null_eps(const ProblemSpec& spec,
                                                               double tol)
{
    detail::require(spec.fiber.gamma > 0.0, ErrorCode::InvalidArgument,
                    "reduce_null_eps: requires a proper fiber (gamma > 0)");
    detail::require(spec.ambiguity.eps == 0.0, ErrorCode::InvalidArgument,
                    "reduce_null_eps: requires eps = 0");
    const GeometryStats geo = compute_geometry(spec.data, spec.fiber, spec.cost);
    const double cap = rho_max(geo.d, geo.I1, spec.data.N());
    if (std::abs(spec.ambiguity.rho - cap) <= tol)
    {
        throw Error(ErrorCode::RegimeBoundary,
                    "reduce_null_eps: boundary regime (rho = " +
                        fmt(spec.ambiguity.rho) + " is within tolerance of rho_max = " +
                        fmt(cap) + "; the problem is not defined on the boundary)");
    }
    if (spec.ambiguity.rho > cap)
    {
        return UninformativeRegime{};
    }
    const double floor = eps_lower(geo.d, geo.I1, spec.ambiguity.rho, spec.data.N());
    return spec.with_ambiguity(
        AmbiguitySpec(spec.ambiguity.rho, floor, spec.ambiguity.order));
}

namespace
{

[[noreturn]] void throw_uninformative(const ProblemSpec& spec,
                                      const Eigen::VectorXd& alpha, double beta)
{
    const double sup = sup_loss_over_support(spec.support, spec.loss, alpha, beta);
    const std::string payload = std::isfinite(sup)
                                    ? "{\"sup_loss\": " + fmt(sup) + "}"
                                    : "{\"sup_loss\": \"inf\"}";
    throw Error(ErrorCode::RegimeUninformative,
                "worst case equals the support supremum and is independent of the "
                "data (uninformative regime)",
                payload);
}

/// Builds the regime-appropriate program with (alpha, beta) frozen.
ConicProgram build_frozen(const ProblemSpec& spec, const Eigen::VectorXd& alpha,
                          double beta)
{
    const Decisions dec = decision_constants(alpha, beta);
    if (spec.ambiguity.order == TransportOrder::TypeInfty)
    {
        if (spec.loss.kind == LossKind::MeanVariance)
        {
            const InftyContext ctx = guard_infty(spec, LossKind::MeanVariance);
            Builder b;
            return mv_infty_impl(spec, b, dec, ctx);
        }
        const InftyContext ctx = guard_infty(spec, LossKind::MeanCVaR);
        Builder b;
        return cvar_infty_impl(spec, b, dec, ctx);
    }
    if (spec.fiber.gamma == 0.0)
    {
        if (spec.loss.kind == LossKind::MeanVariance)
        {
            const Eigen::VectorXd kappa = guard_singleton(spec, LossKind::MeanVariance);
            Builder b;
            return mv_singleton_impl(spec, b, dec, kappa);
        }
        const Eigen::VectorXd kappa = guard_singleton(spec, LossKind::MeanCVaR);
        Builder b;
        return cvar_singleton_impl(spec, b, dec, kappa);
    }
    if (spec.loss.kind == LossKind::MeanVariance)
    {
        const GeometryStats geo = guard_fiber(spec, LossKind::MeanVariance);
        Builder b;
        return mv_fiber_impl(spec, b, dec, geo);
    }
    const GeometryStats geo = guard_fiber(spec, LossKind::MeanCVaR);
    Builder b;
    return cvar_fiber_impl(spec, b, dec, geo);
}

DualCertificate extract_certificate(const ConicProgram& p, const Solution& sol, int N)
{
    DualCertificate cert;
    const auto has = [&](const std::string& name) {
        return std::find(p.var_names.begin(), p.var_names.end(), name) !=
               p.var_names.end();
    };
    if (has("lambda1"))
    {
        cert.has_singleton = true;
        cert.lambda1 = sol.value(p, "lambda1");
        cert.lambda2 = sol.value(p, "lambda2");
        cert.theta.resize(N);
        for (int i = 0; i < N; ++i)
        {
            cert.theta[i] = sol.value(p, "theta[" + std::to_string(i) + "]");
        }
    }
    if (has("varphi"))
    {
        cert.has_fiber = true;
        cert.lambda.resize(N);
        cert.s.resize(N);
        cert.psi.resize(N);
        for (int i = 0; i < N; ++i)
        {
            const std::string idx = "[" + std::to_string(i) + "]";
            cert.lambda[i] = sol.value(p, "lambda" + idx);
            cert.s[i] = sol.value(p, "s" + idx);
            cert.psi[i] = sol.value(p, "psi" + idx);
        }
        cert.nu_plus = sol.value(p, "nu_plus");
        cert.nu_minus = sol.value(p, "nu_minus");
        cert.phi = sol.value(p, "phi");
        cert.varphi = sol.value(p, "varphi");
    }
    return cert;
}

} // namespace

WorstCaseResult worst_case_value(const Eigen::VectorXd& alpha, double beta,
                                 const ProblemSpec& spec, const SolveOptions& opts)
{
    detail::require(alpha.size() == spec.data.m(), ErrorCode::DimensionMismatch,
                    "worst_case_value: alpha length != asset count");
    detail::require(alpha.allFinite() and std::isfinite(beta),
                    ErrorCode::InvalidArgument,
                    "worst_case_value: non-finite decision");
    const ProblemSpec* effective = &spec;
    ProblemSpec reduced = spec;
    if (spec.ambiguity.order == TransportOrder::Type1 and spec.ambiguity.eps == 0.0)
    {
        if (spec.fiber.gamma == 0.0)
        {
            throw_uninformative(spec, alpha, beta);
        }
        auto routed = reduce_null_eps(spec);
        if (std::holds_alternative<UninformativeRegime>(routed))
        {
            throw_uninformative(spec, alpha, beta);
        }
        reduced = std::get<ProblemSpec>(std::move(routed));
        effective = &reduced;
    }
    const ConicProgram p = build_frozen(*effective, alpha, beta);
    const Solution sol = solve_or_throw(p, opts);
    WorstCaseResult result;
    result.value = sol.objective;
    result.certificate = extract_certificate(p, sol, effective->data.N());
    return result;
}

std::vector<std::string> check_fiber_dual(const DualCertificate& cert,
                                          const Eigen::VectorXd& d,
                                          const std::vector<int>& I1,
                                          const std::vector<int>& I2, int N, double rho,
                                          double tol)
{
    std::vector<std::string> out;
    if (!cert.has_fiber)
    {
        out.push_back("certificate carries no fiber dual variables");
        return out;
    }
    const auto check = [&](bool ok, const std::string& what) {
        if (!ok)
        {
            out.push_back(what);
        }
    };
    check(cert.nu_plus >= -tol, "nu+ negative");
    check(cert.nu_minus >= -tol, "nu- negative");
    check(cert.varphi >= -tol, "varphi negative");
    double d1_sum = 0.0;
    for (int i : I1)
    {
        d1_sum += d[i];
        check(cert.phi - d[i] * cert.varphi + cert.psi[i] - cert.s[i] >= -tol,
              "inside-sample row violated at index " + std::to_string(i));
    }
    for (int i : I2)
    {
        check(cert.phi + d[i] * cert.varphi + cert.psi[i] - cert.s[i] >= -tol,
              "outside-sample row violated at index " + std::to_string(i));
    }
    double psi_sum = 0.0;
    for (int i = 0; i < N; ++i)
    {
        psi_sum += cert.psi[i];
        check(cert.psi[i] >= -tol, "psi negative at index " + std::to_string(i));
        check(cert.lambda[i] >= -tol, "lambda negative at index " + std::to_string(i));
        check(cert.varphi - cert.lambda[i] >= -tol,
              "varphi < lambda at index " + std::to_string(i));
    }
    check(cert.nu_plus - cert.nu_minus + (d1_sum - N * rho) * cert.varphi - psi_sum >=
              -tol,
          "coupling row violated");
    return out;
}

Allocation solve_allocation(const ProblemSpec& spec, const SolveOptions& opts)
{
    const ProblemSpec* effective = &spec;
    ProblemSpec reduced = spec;
    if (spec.ambiguity.order == TransportOrder::Type1 and spec.ambiguity.eps == 0.0)
    {
        if (spec.fiber.gamma == 0.0)
        {
            throw Error(ErrorCode::RegimeUninformative,
                        "solve_allocation: gamma = 0 with eps = 0 is uninformative "
                        "(the objective ignores the data)");
        }
        auto routed = reduce_null_eps(spec);
        if (std::holds_alternative<UninformativeRegime>(routed))
        {
            throw Error(ErrorCode::RegimeUninformative,
                        "solve_allocation: rho exceeds rho_max; the objective "
                        "reduces to the support supremum and ignores the data");
        }
        reduced = std::get<ProblemSpec>(std::move(routed));
        effective = &reduced;
    }

    ConicProgram p;
    if (effective->ambiguity.order == TransportOrder::TypeInfty)
    {
        p = effective->loss.kind == LossKind::MeanVariance
                ? build_mv_infty(*effective)
                : build_cvar_infty(*effective);
    }
    else if (effective->fiber.gamma == 0.0)
    {
        p = effective->loss.kind == LossKind::MeanVariance
                ? build_mv_singleton(*effective)
                : build_cvar_singleton(*effective);
    }
    else
    {
        p = effective->loss.kind == LossKind::MeanVariance
                ? build_mv_fiber(*effective)
                : build_cvar_fiber(*effective);
    }
    const Solution sol = solve_or_throw(p, opts);
    return extract_allocation(p, sol, effective->feasible);
}

Allocation solve_allocation_tslp(const ProblemSpec& spec, const RecourseSpec& recourse,
                                 const SolveOptions& opts)
{
    const ConicProgram p = build_cvar_tslp(spec, recourse);
    const Solution sol = solve_or_throw(p, opts);
    return extract_allocation(p, sol, spec.feasible);
}

} // namespace condor
