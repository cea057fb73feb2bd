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

#include "condor/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <nlohmann/json.hpp>
#include <string>

#include "solver_backends.hpp"

namespace condor
{

AffineExpr& AffineExpr::operator+=(const AffineExpr& other)
{
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    constant += other.constant;
    return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other)
{
    for (const auto& [idx, coeff] : other.terms)
    {
        terms.emplace_back(idx, -coeff);
    }
    constant -= other.constant;
    return *this;
}

AffineExpr& AffineExpr::operator*=(double scale)
{
    for (auto& [idx, coeff] : terms)
    {
        (void)idx;
        coeff *= scale;
    }
    constant *= scale;
    return *this;
}

void AffineExpr::canonicalize()
{
    std::map<int, double> merged;
    for (const auto& [idx, coeff] : terms)
    {
        merged[idx] += coeff;
    }
    terms.clear();
    for (const auto& [idx, coeff] : merged)
    {
        if (coeff != 0.0)
        {
            terms.emplace_back(idx, coeff);
        }
    }
}

double AffineExpr::eval(const Eigen::VectorXd& x) const
{
    double value = constant;
    for (const auto& [idx, coeff] : terms)
    {
        value += coeff * x[idx];
    }
    return value;
}

ConeBlock ConeBlock::nonnegative(std::vector<AffineExpr> exprs)
{
    return ConeBlock{ConeKind::Nonnegative, 0, std::move(exprs)};
}

ConeBlock ConeBlock::second_order(std::vector<AffineExpr> exprs)
{
    return ConeBlock{ConeKind::SecondOrder, 0, std::move(exprs)};
}

ConeBlock ConeBlock::psd(int order, std::vector<AffineExpr> row_major)
{
    return ConeBlock{ConeKind::PositiveSemidefinite, order, std::move(row_major)};
}

int ConicProgram::var(const std::string& name) const
{
    const auto it = std::find(var_names.begin(), var_names.end(), name);
    detail::require(it != var_names.end(), ErrorCode::InvalidArgument,
                    "ConicProgram::var: no variable named '" + name + "'");
    return static_cast<int>(it - var_names.begin());
}

namespace
{

void check_expr(const AffineExpr& e, int num_vars, const std::string& where,
                std::vector<std::string>& out)
{
    for (const auto& [idx, coeff] : e.terms)
    {
        if (idx < 0 or idx >= num_vars)
        {
            out.push_back(where + ": variable index " + std::to_string(idx) +
                          " out of range");
        }
        if (!std::isfinite(coeff))
        {
            out.push_back(where + ": non-finite coefficient");
        }
    }
    if (!std::isfinite(e.constant))
    {
        out.push_back(where + ": non-finite constant");
    }
}

/// Coefficient-wise equality after canonicalization (used for the PSD
/// symmetry check).
bool exprs_equal(AffineExpr a, AffineExpr b)
{
    a.canonicalize();
    b.canonicalize();
    if (std::abs(a.constant - b.constant) > 1e-12)
    {
        return false;
    }
    if (a.terms.size() != b.terms.size())
    {
        return false;
    }
    for (std::size_t k = 0; k < a.terms.size(); ++k)
    {
        if (a.terms[k].first != b.terms[k].first or
            std::abs(a.terms[k].second - b.terms[k].second) > 1e-12)
        {
            return false;
        }
    }
    return true;
}

} // namespace

std::vector<std::string> validate_program(const ConicProgram& p)
{
    std::vector<std::string> out;
    if (p.num_vars <= 0)
    {
        out.push_back("program has no variables");
    }
    if (static_cast<int>(p.objective.size()) != p.num_vars)
    {
        out.push_back("objective length != num_vars");
    }
    for (double c : p.objective)
    {
        if (!std::isfinite(c))
        {
            out.push_back("objective: non-finite coefficient");
            break;
        }
    }
    if (!p.var_names.empty() and static_cast<int>(p.var_names.size()) != p.num_vars)
    {
        out.push_back("var_names length != num_vars");
    }
    for (std::size_t r = 0; r < p.equalities.size(); ++r)
    {
        check_expr(p.equalities[r], p.num_vars, "equality " + std::to_string(r), out);
    }
    for (std::size_t b = 0; b < p.cones.size(); ++b)
    {
        const ConeBlock& blk = p.cones[b];
        const std::string where = "cone " + std::to_string(b);
        for (const AffineExpr& e : blk.exprs)
        {
            check_expr(e, p.num_vars, where, out);
        }
        switch (blk.kind)
        {
        case ConeKind::Nonnegative:
            if (blk.exprs.empty())
            {
                out.push_back(where + ": empty nonnegative block");
            }
            break;
        case ConeKind::SecondOrder:
            if (blk.exprs.size() < 2)
            {
                out.push_back(where + ": second-order block needs dimension >= 2");
            }
            break;
        case ConeKind::PositiveSemidefinite:
            if (blk.order < 1)
            {
                out.push_back(where + ": PSD block order must be >= 1");
            }
            else if (static_cast<int>(blk.exprs.size()) != blk.order * blk.order)
            {
                out.push_back(where + ": PSD block must hold order^2 expressions");
            }
            else
            {
                for (int r = 0; r < blk.order; ++r)
                {
                    for (int c = r + 1; c < blk.order; ++c)
                    {
                        if (!exprs_equal(blk.exprs[r * blk.order + c],
                                         blk.exprs[c * blk.order + r]))
                        {
                            out.push_back(where + ": affine matrix not symmetric at (" +
                                          std::to_string(r) + "," + std::to_string(c) +
                                          ")");
                        }
                    }
                }
            }
            break;
        }
    }
    return out;
}

const char* to_string(SolveStatus s) noexcept
{
    switch (s)
    {
    case SolveStatus::Optimal:
        return "OPTIMAL";
    case SolveStatus::Infeasible:
        return "INFEASIBLE";
    case SolveStatus::Unbounded:
        return "UNBOUNDED";
    case SolveStatus::NumericalLimit:
        return "NUMERICAL_LIMIT";
    }
    return "UNKNOWN";
}

namespace
{

bool is_linear_program(const ConicProgram& p)
{
    return std::all_of(p.cones.begin(), p.cones.end(), [](const ConeBlock& b) {
        return b.kind == ConeKind::Nonnegative;
    });
}

SolverBackend resolve_backend(const SolveOptions& opts)
{
    if (opts.backend != SolverBackend::Auto)
    {
        return opts.backend;
    }
    if (const char* env = std::getenv("CONDOR_SOLVER"))
    {
        const std::string v(env);
        if (v == "vertex" or v == "vertex_enum")
        {
            return SolverBackend::VertexEnum;
        }
        if (v == "ip" or v == "interior_point" or v.empty())
        {
            return SolverBackend::InteriorPoint;
        }
        throw Error(ErrorCode::InvalidArgument,
                    "CONDOR_SOLVER must be 'interior_point' or 'vertex_enum', got '" +
                        v + "'");
    }
    return SolverBackend::InteriorPoint;
}

} // namespace

Solution solve_conic(const ConicProgram& p, const SolveOptions& opts)
{
    const std::vector<std::string> problems = validate_program(p);
    if (!problems.empty())
    {
        std::string msg = "solve_conic: invalid program:";
        for (const std::string& s : problems)
        {
            msg += "\n  " + s;
        }
        throw Error(ErrorCode::InvalidArgument, msg, to_json(p));
    }
    const SolverBackend backend = resolve_backend(opts);
    if (backend == SolverBackend::VertexEnum)
    {
        detail::require(is_linear_program(p), ErrorCode::UnsupportedProgram,
                        "solve_conic: the vertex-enumeration backend only handles "
                        "programs without SOC/PSD blocks");
        return detail::solve_vertex(p, opts);
    }
    return detail::solve_interior_point(p, opts);
}

double constraint_violation(const ConicProgram& p, const Eigen::VectorXd& x)
{
    detail::require(static_cast<int>(x.size()) == p.num_vars,
                    ErrorCode::DimensionMismatch,
                    "constraint_violation: point length != num_vars");
    double worst = 0.0;
    for (const AffineExpr& e : p.equalities)
    {
        worst = std::max(worst, std::abs(e.eval(x)));
    }
    for (const ConeBlock& blk : p.cones)
    {
        switch (blk.kind)
        {
        case ConeKind::Nonnegative:
            for (const AffineExpr& e : blk.exprs)
            {
                worst = std::max(worst, -e.eval(x));
            }
            break;
        case ConeKind::SecondOrder:
        {
            double norm2 = 0.0;
            for (std::size_t k = 1; k < blk.exprs.size(); ++k)
            {
                const double v = blk.exprs[k].eval(x);
                norm2 += v * v;
            }
            worst = std::max(worst, std::sqrt(norm2) - blk.exprs[0].eval(x));
            break;
        }
        case ConeKind::PositiveSemidefinite:
        {
            Eigen::MatrixXd M(blk.order, blk.order);
            for (int r = 0; r < blk.order; ++r)
            {
                for (int c = 0; c < blk.order; ++c)
                {
                    M(r, c) = blk.exprs[static_cast<std::size_t>(r * blk.order + c)]
                                  .eval(x);
                }
            }
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
                0.5 * (M + M.transpose()));
            worst = std::max(worst, -eig.eigenvalues().minCoeff());
            break;
        }
        }
    }
    return worst;
}

namespace
{

nlohmann::json expr_to_json(const AffineExpr& e)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [idx, coeff] : e.terms)
    {
        terms.push_back({idx, coeff});
    }
    return {{"terms", std::move(terms)}, {"constant", e.constant}};
}

AffineExpr expr_from_json(const nlohmann::json& j)
{
    AffineExpr e;
    e.constant = j.at("constant").get<double>();
    for (const auto& t : j.at("terms"))
    {
        e.terms.emplace_back(t.at(0).get<int>(), t.at(1).get<double>());
    }
    return e;
}

const char* cone_kind_name(ConeKind k)
{
    switch (k)
    {
    case ConeKind::Nonnegative:
        return "nonnegative";
    case ConeKind::SecondOrder:
        return "second_order";
    case ConeKind::PositiveSemidefinite:
        return "psd";
    }
    return "unknown";
}

} // namespace

std::string to_json(const ConicProgram& p, int indent)
{
    nlohmann::json j;
    j["version"] = 1;
    j["num_vars"] = p.num_vars;
    j["objective"] = p.objective;
    if (!p.var_names.empty())
    {
        j["var_names"] = p.var_names;
    }
    j["equalities"] = nlohmann::json::array();
    for (const AffineExpr& e : p.equalities)
    {
        j["equalities"].push_back(expr_to_json(e));
    }
    j["cones"] = nlohmann::json::array();
    for (const ConeBlock& blk : p.cones)
    {
        nlohmann::json jb;
        jb["kind"] = cone_kind_name(blk.kind);
        if (blk.kind == ConeKind::PositiveSemidefinite)
        {
            jb["order"] = blk.order;
        }
        jb["exprs"] = nlohmann::json::array();
        for (const AffineExpr& e : blk.exprs)
        {
            jb["exprs"].push_back(expr_to_json(e));
        }
        j["cones"].push_back(std::move(jb));
    }
    return j.dump(indent);
}

ConicProgram program_from_json(const std::string& text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(ErrorCode::SchemaError,
                    std::string("program_from_json: parse failure: ") + e.what());
    }
    try
    {
        ConicProgram p;
        p.num_vars = j.at("num_vars").get<int>();
        p.objective = j.at("objective").get<std::vector<double>>();
        if (j.contains("var_names"))
        {
            p.var_names = j.at("var_names").get<std::vector<std::string>>();
        }
        for (const auto& je : j.at("equalities"))
        {
            p.equalities.push_back(expr_from_json(je));
        }
        for (const auto& jb : j.at("cones"))
        {
            ConeBlock blk;
            const std::string kind = jb.at("kind").get<std::string>();
            if (kind == "nonnegative")
            {
                blk.kind = ConeKind::Nonnegative;
            }
            else if (kind == "second_order")
            {
                blk.kind = ConeKind::SecondOrder;
            }
            else if (kind == "psd")
            {
                blk.kind = ConeKind::PositiveSemidefinite;
                blk.order = jb.at("order").get<int>();
            }
            else
            {
                throw Error(ErrorCode::SchemaError,
                            "program_from_json: unknown cone kind '" + kind + "'");
            }
            for (const auto& je : jb.at("exprs"))
            {
                blk.exprs.push_back(expr_from_json(je));
            }
            p.cones.push_back(std::move(blk));
        }
        return p;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(ErrorCode::SchemaError,
                    std::string("program_from_json: schema violation: ") + e.what());
    }
}

} // namespace condor
