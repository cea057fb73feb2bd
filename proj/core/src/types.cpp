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

#include "condor/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace condor
{
namespace
{

bool all_finite(const Eigen::MatrixXd& M)
{
    return M.allFinite();
}

} // namespace

SampleSet::SampleSet(Eigen::MatrixXd X, Eigen::MatrixXd Y)
    : X_(std::move(X)), Y_(std::move(Y))
{
    detail::require(X_.rows() == Y_.rows(), ErrorCode::DimensionMismatch,
                    "SampleSet: X and Y must have the same number of rows");
    detail::require(X_.rows() >= 1, ErrorCode::InvalidArgument,
                    "SampleSet: at least one sample is required");
    detail::require(X_.cols() >= 1 and Y_.cols() >= 1, ErrorCode::InvalidArgument,
                    "SampleSet: covariates and returns must be nonempty vectors");
    detail::require(all_finite(X_) and all_finite(Y_), ErrorCode::InvalidArgument,
                    "SampleSet: non-finite entries");
}

SampleSet SampleSet::rows(const std::vector<int>& idx) const
{
    detail::require(!idx.empty(), ErrorCode::InvalidArgument,
                    "SampleSet::rows: empty index list");
    Eigen::MatrixXd X(static_cast<int>(idx.size()), n());
    Eigen::MatrixXd Y(static_cast<int>(idx.size()), m());
    for (std::size_t k = 0; k < idx.size(); ++k)
    {
        detail::require(idx[k] >= 0 and idx[k] < N(), ErrorCode::InvalidArgument,
                        "SampleSet::rows: index out of range");
        X.row(static_cast<int>(k)) = X_.row(idx[k]);
        Y.row(static_cast<int>(k)) = Y_.row(idx[k]);
    }
    return SampleSet(std::move(X), std::move(Y));
}

FiberSpec::FiberSpec(Eigen::VectorXd x0_in, double gamma_in)
    : x0(std::move(x0_in)), gamma(gamma_in)
{
    detail::require(x0.size() >= 1, ErrorCode::InvalidArgument,
                    "FiberSpec: empty center");
    detail::require(x0.allFinite(), ErrorCode::InvalidArgument,
                    "FiberSpec: non-finite center");
    detail::require(std::isfinite(gamma) and gamma >= 0.0, ErrorCode::InvalidArgument,
                    "FiberSpec: gamma must be finite and nonnegative");
}

AmbiguitySpec::AmbiguitySpec(double rho_in, double eps_in, TransportOrder order_in)
    : rho(rho_in), eps(eps_in), order(order_in)
{
    detail::require(std::isfinite(rho) and rho > 0.0, ErrorCode::InvalidArgument,
                    "AmbiguitySpec: rho must be finite and positive");
    detail::require(std::isfinite(eps) and eps >= 0.0 and eps <= 1.0,
                    ErrorCode::InvalidArgument, "AmbiguitySpec: eps must lie in [0, 1]");
}

LossSpec::LossSpec(LossKind kind_in, double eta_in, double tau_in)
    : kind(kind_in), eta(eta_in), tau(tau_in)
{
    detail::require(std::isfinite(eta) and eta >= 0.0, ErrorCode::InvalidArgument,
                    "LossSpec: eta must be finite and nonnegative");
    if (kind == LossKind::MeanCVaR)
    {
        detail::require(std::isfinite(tau) and tau > 0.0 and tau < 1.0,
                        ErrorCode::InvalidArgument, "LossSpec: tau must lie in (0, 1)");
    }
}

FeasibleSet::FeasibleSet(int m, Eigen::VectorXd lower, Eigen::VectorXd upper,
                         bool budget, std::vector<bool> tradable)
    : m_(m), eff_lower_(std::move(lower)), eff_upper_(std::move(upper)),
      budget_(budget), tradable_(std::move(tradable))
{
    detail::require(m_ >= 1, ErrorCode::InvalidArgument, "FeasibleSet: m must be >= 1");
    detail::require(eff_lower_.size() == m_ and eff_upper_.size() == m_,
                    ErrorCode::DimensionMismatch, "FeasibleSet: bound lengths != m");
    detail::require(static_cast<int>(tradable_.size()) == m_,
                    ErrorCode::DimensionMismatch, "FeasibleSet: mask length != m");
    detail::require(eff_lower_.allFinite() and eff_upper_.allFinite(),
                    ErrorCode::InvalidArgument, "FeasibleSet: non-finite bounds");
    for (int j = 0; j < m_; ++j)
    {
        if (!tradable_[static_cast<std::size_t>(j)])
        {
            eff_lower_[j] = 0.0;
            eff_upper_[j] = 0.0;
        }
        detail::require(eff_lower_[j] <= eff_upper_[j], ErrorCode::InvalidArgument,
                        "FeasibleSet: lower bound exceeds upper bound");
    }
    if (budget_)
    {
        detail::require(eff_lower_.sum() <= 1.0 + 1e-12 and
                            eff_upper_.sum() >= 1.0 - 1e-12,
                        ErrorCode::InvalidArgument,
                        "FeasibleSet: budget row makes the set empty");
    }
}

FeasibleSet FeasibleSet::simplex(int m)
{
    return FeasibleSet(m, Eigen::VectorXd::Zero(m), Eigen::VectorXd::Ones(m), true,
                       std::vector<bool>(static_cast<std::size_t>(m), true));
}

FeasibleSet FeasibleSet::simplex_with_mask(int m, std::vector<bool> tradable)
{
    detail::require(std::any_of(tradable.begin(), tradable.end(),
                                [](bool b) { return b; }),
                    ErrorCode::InvalidArgument,
                    "FeasibleSet: at least one asset must be tradable");
    return FeasibleSet(m, Eigen::VectorXd::Zero(m), Eigen::VectorXd::Ones(m), true,
                       std::move(tradable));
}

FeasibleSet FeasibleSet::fixed(const Eigen::VectorXd& alpha)
{
    const int m = static_cast<int>(alpha.size());
    return FeasibleSet(m, alpha, alpha, false,
                       std::vector<bool>(static_cast<std::size_t>(m), true));
}

double FeasibleSet::violation(const Eigen::VectorXd& alpha) const
{
    detail::require(alpha.size() == m_, ErrorCode::DimensionMismatch,
                    "FeasibleSet::violation: alpha length != m");
    double v = 0.0;
    for (int j = 0; j < m_; ++j)
    {
        v = std::max(v, eff_lower_[j] - alpha[j]);
        v = std::max(v, alpha[j] - eff_upper_[j]);
    }
    if (budget_)
    {
        v = std::max(v, std::abs(alpha.sum() - 1.0));
    }
    return v;
}

Eigen::VectorXd FeasibleSet::project(const Eigen::VectorXd& alpha) const
{
    detail::require(alpha.size() == m_, ErrorCode::DimensionMismatch,
                    "FeasibleSet::project: alpha length != m");
    const auto clamp_shift = [&](double nu) {
        Eigen::VectorXd out(m_);
        for (int j = 0; j < m_; ++j)
        {
            out[j] = std::min(eff_upper_[j], std::max(eff_lower_[j], alpha[j] - nu));
        }
        return out;
    };
    if (!budget_)
    {
        return clamp_shift(0.0);
    }
    // Projection onto { l <= a <= u, sum a = 1 }: the KKT point is a
    // clamped shift by a scalar multiplier; the budget residual is
    // monotone in the shift, so bisect.
    double lo = alpha.minCoeff() - eff_upper_.maxCoeff() - 1.0;
    double hi = alpha.maxCoeff() - eff_lower_.minCoeff() + 1.0;
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (clamp_shift(mid).sum() > 1.0)
        {
            lo = mid;
        }
        else
        {
            hi = mid;
        }
    }
    return clamp_shift(0.5 * (lo + hi));
}

SupportSpec SupportSpec::whole_space()
{
    SupportSpec s;
    s.kind_ = SupportKind::WholeSpace;
    return s;
}

SupportSpec SupportSpec::ellipsoid(Eigen::MatrixXd Q, Eigen::VectorXd q, double q0,
                                   const Eigen::VectorXd& slater_point)
{
    SupportSpec s;
    s.kind_ = SupportKind::Ellipsoid;
    s.Q_ = std::move(Q);
    s.q_ = std::move(q);
    s.q0_ = q0;
    detail::require(s.Q_.rows() == s.Q_.cols() and s.Q_.rows() >= 1,
                    ErrorCode::DimensionMismatch, "SupportSpec: Q must be square");
    detail::require(s.q_.size() == s.Q_.rows(), ErrorCode::DimensionMismatch,
                    "SupportSpec: q length != order of Q");
    detail::require(s.Q_.isApprox(s.Q_.transpose(), 1e-12), ErrorCode::InvalidArgument,
                    "SupportSpec: Q must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(s.Q_);
    detail::require(llt.info() == Eigen::Success, ErrorCode::InvalidArgument,
                    "SupportSpec: Q must be positive definite");
    detail::require(slater_point.size() == s.q_.size(), ErrorCode::DimensionMismatch,
                    "SupportSpec: Slater point has wrong length");
    detail::require(s.quad_value(slater_point) < 0.0, ErrorCode::InvalidArgument,
                    "SupportSpec: Slater point must be strictly interior");
    return s;
}

SupportSpec SupportSpec::ball(const Eigen::VectorXd& center, double radius)
{
    detail::require(std::isfinite(radius) and radius > 0.0, ErrorCode::InvalidArgument,
                    "SupportSpec::ball: radius must be positive");
    const int m = static_cast<int>(center.size());
    return ellipsoid(Eigen::MatrixXd::Identity(m, m), -center,
                     center.squaredNorm() - radius * radius, center);
}

double SupportSpec::quad_value(const Eigen::VectorXd& y) const
{
    detail::require(kind_ == SupportKind::Ellipsoid, ErrorCode::UnsupportedProgram,
                    "SupportSpec::quad_value: WholeSpace support has no quadratic form");
    detail::require(y.size() == q_.size(), ErrorCode::DimensionMismatch,
                    "SupportSpec::quad_value: y has wrong length");
    return y.dot(Q_ * y) + 2.0 * q_.dot(y) + q0_;
}

bool SupportSpec::contains(const Eigen::VectorXd& y, double tol) const
{
    if (kind_ == SupportKind::WholeSpace)
    {
        return true;
    }
    return quad_value(y) <= tol;
}

Eigen::VectorXd SupportSpec::center() const
{
    detail::require(kind_ == SupportKind::Ellipsoid, ErrorCode::UnsupportedProgram,
                    "SupportSpec::center: WholeSpace support has no center");
    return Q_.ldlt().solve(-q_);
}

std::pair<double, double> SupportSpec::linear_range(const Eigen::VectorXd& a) const
{
    if (kind_ == SupportKind::WholeSpace)
    {
        detail::require(a.size() >= 1 and a.isZero(0.0), ErrorCode::InvalidArgument,
                        "SupportSpec::linear_range: unbounded over the whole space");
        return {0.0, 0.0};
    }
    detail::require(a.size() == q_.size(), ErrorCode::DimensionMismatch,
                    "SupportSpec::linear_range: a has wrong length");
    const Eigen::VectorXd c = center();
    // With y = c + z the constraint is z'Qz <= r2 and a'y = a'c + a'z; the
    // extremal values of a'z are +- sqrt(r2 * a'Q^{-1}a).
    const double r2 = std::max(0.0, q_.dot(Q_.ldlt().solve(q_)) - q0_);
    const double spread = std::sqrt(r2 * std::max(0.0, a.dot(Q_.ldlt().solve(a))));
    const double mid = a.dot(c);
    return {mid - spread, mid + spread};
}

double eval_loss_return(double v, double beta, const LossSpec& loss)
{
    if (loss.kind == LossKind::MeanVariance)
    {
        return (v - beta) * (v - beta) - loss.eta * v;
    }
    return -loss.eta * v + beta + std::max(-v - beta, 0.0) / loss.tau;
}

double eval_loss(const Eigen::VectorXd& y, const Eigen::VectorXd& alpha, double beta,
                 const LossSpec& loss)
{
    detail::require(y.size() == alpha.size(), ErrorCode::DimensionMismatch,
                    "eval_loss: y and alpha lengths differ");
    return eval_loss_return(y.dot(alpha), beta, loss);
}

const char* to_string(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::RegimeRhoBelowMin: return "REGIME_RHO_BELOW_MIN";
    case ErrorCode::RegimeBoundary: return "REGIME_BOUNDARY";
    case ErrorCode::RegimeUninformative: return "REGIME_UNINFORMATIVE";
    case ErrorCode::NullProbabilityRegime: return "NULL_PROBABILITY_REGIME";
    case ErrorCode::EmptyFiber: return "EMPTY_FIBER";
    case ErrorCode::EmptyIndexSet: return "EMPTY_INDEX_SET";
    case ErrorCode::UnsupportedProgram: return "UNSUPPORTED_PROGRAM";
    case ErrorCode::SolverFailure: return "SOLVER_FAILURE";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    }
    return "UNKNOWN";
}

} // namespace condor
