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

#include "condor/data_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "condor/errors.hpp"

namespace condor
{

namespace
{

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (not line.empty() and line.back() == ',') out.emplace_back();
    return out;
}

std::string strip(const std::string& s)
{
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& cell, const std::string& path, int line_no, int col)
{
    const std::string t = strip(cell);
    std::size_t used = 0;
    double v = 0.0;
    try
    {
        v = std::stod(t, &used);
    }
    catch (const std::exception&)
    {
        throw Error(ErrorCode::SchemaError,
                    path + ":" + std::to_string(line_no) + ": column " +
                        std::to_string(col + 1) + " is not a number: '" + t + "'");
    }
    if (used != t.size())
        throw Error(ErrorCode::SchemaError,
                    path + ":" + std::to_string(line_no) + ": trailing characters in '" + t + "'");
    if (not std::isfinite(v))
        throw Error(ErrorCode::SchemaError,
                    path + ":" + std::to_string(line_no) + ": non-finite value in column " +
                        std::to_string(col + 1));
    return v;
}

} // namespace

SampleSet load_samples_csv(const std::string& path)
{
    std::ifstream in(path);
    if (not in)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");

    std::string line;
    if (not std::getline(in, line))
        throw Error(ErrorCode::IoError, "'" + path + "' is empty");

    const std::vector<std::string> header = split_csv_line(line);
    int n = 0;
    int m = 0;
    for (std::size_t j = 0; j < header.size(); ++j)
    {
        const std::string h = strip(header[j]);
        const std::string want_x = "x_" + std::to_string(n + 1);
        const std::string want_y = "y_" + std::to_string(m + 1);
        if (m == 0 and h == want_x)
            ++n;
        else if (h == want_y)
            ++m;
        else
            throw Error(ErrorCode::SchemaError,
                        path + ":1: unexpected header field '" + h + "' (want x_1..x_n,y_1..y_m)");
    }
    if (n == 0 or m == 0)
        throw Error(ErrorCode::SchemaError,
                    path + ":1: header must contain at least one x_ and one y_ column");

    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (strip(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != n + m)
            throw Error(ErrorCode::SchemaError,
                        path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(n + m) + " fields, got " +
                            std::to_string(cells.size()));
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j)
            row[j] = parse_cell(cells[j], path, line_no, static_cast<int>(j));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw Error(ErrorCode::SchemaError, "'" + path + "' contains a header but no data rows");

    Eigen::MatrixXd X(static_cast<int>(rows.size()), n);
    Eigen::MatrixXd Y(static_cast<int>(rows.size()), m);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        for (int j = 0; j < n; ++j) X(static_cast<int>(i), j) = rows[i][j];
        for (int j = 0; j < m; ++j) Y(static_cast<int>(i), j) = rows[i][n + j];
    }
    return SampleSet(std::move(X), std::move(Y));
}

void write_samples_csv(const std::string& path, const SampleSet& data)
{
    std::ofstream out(path);
    if (not out)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");

    for (int j = 0; j < data.n(); ++j) out << (j ? ",x_" : "x_") << (j + 1);
    for (int j = 0; j < data.m(); ++j) out << ",y_" << (j + 1);
    out << "\n";

    char buf[64];
    for (int i = 0; i < data.N(); ++i)
    {
        for (int j = 0; j < data.n() + data.m(); ++j)
        {
            const double v = j < data.n() ? data.X()(i, j) : data.Y()(i, j - data.n());
            std::snprintf(buf, sizeof buf, "%.17g", v);
            if (j) out << ',';
            out << buf;
        }
        out << "\n";
    }
    if (not out)
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

void SyntheticConfig::validate() const
{
    detail::require(T >= 1 and m >= 1 and n >= 1, ErrorCode::InvalidArgument,
                    "SyntheticConfig: T, m, n must all be >= 1");
    detail::require(predictor_corr > 0.0 and predictor_corr < 1.0, ErrorCode::InvalidArgument,
                    "SyntheticConfig: predictor_corr must lie in (0, 1)");
    if (loadings.size() > 0)
        detail::require(loadings.rows() == m and loadings.cols() == n,
                        ErrorCode::DimensionMismatch,
                        "SyntheticConfig: loadings must be m x n when provided");
    if (factor_vol.size() > 0)
    {
        detail::require(factor_vol.size() == n, ErrorCode::DimensionMismatch,
                        "SyntheticConfig: factor_vol must have length n when provided");
        detail::require((factor_vol.array() > 0.0).all(), ErrorCode::InvalidArgument,
                        "SyntheticConfig: factor volatilities must be positive");
    }
    detail::require(std::isfinite(idio_vol) and idio_vol >= 0.0, ErrorCode::InvalidArgument,
                    "SyntheticConfig: idio_vol must be finite and nonnegative");
}

SyntheticMarket generate_synthetic(const SyntheticConfig& cfg)
{
    cfg.validate();

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.2, 1.2);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd L = cfg.loadings;
    if (L.size() == 0)
    {
        L.resize(cfg.m, cfg.n);
        for (int i = 0; i < cfg.m; ++i)
            for (int j = 0; j < cfg.n; ++j) L(i, j) = unif(rng);
    }
    Eigen::VectorXd sigma = cfg.factor_vol;
    if (sigma.size() == 0)
    {
        sigma.resize(cfg.n);
        for (int j = 0; j < cfg.n; ++j) sigma[j] = 0.015 / std::sqrt(1.0 + j);
    }

    const double c = cfg.predictor_corr;
    const double b = std::sqrt(1.0 - c * c);

    Eigen::MatrixXd F(cfg.T, cfg.n);
    Eigen::MatrixXd X(cfg.T, cfg.n);
    Eigen::MatrixXd Y(cfg.T, cfg.m);
    for (int t = 0; t < cfg.T; ++t)
    {
        for (int j = 0; j < cfg.n; ++j) F(t, j) = sigma[j] * gauss(rng);
        Y.row(t) = (L * F.row(t).transpose()).transpose();
        for (int i = 0; i < cfg.m; ++i) Y(t, i) += cfg.idio_vol * gauss(rng);
        // Predictor = c * standardized factor return + sqrt(1-c^2) * noise,
        // so corr(factor return, predictor) equals c exactly in expectation.
        for (int j = 0; j < cfg.n; ++j) X(t, j) = c * (F(t, j) / sigma[j]) + b * gauss(rng);
    }

    return SyntheticMarket{SampleSet(std::move(X), std::move(Y)), std::move(F)};
}

} // namespace condor
