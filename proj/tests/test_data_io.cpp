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
 * @file test_data_io.cpp
 * @brief Unit tests for CSV ingestion and the synthetic market generator.
 */

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <string>

#include "condor/data_io.hpp"
#include "condor/errors.hpp"
#include "doctest.h"

using namespace condor;

namespace
{

/// Writes `content` to a throwaway file and returns the path.
std::string scratch_file(const std::string& name, const std::string& content)
{
    const std::string path = "io_scratch_" + name;
    std::ofstream out(path);
    out << content;
    out.close();
    return path;
}

ErrorCode load_error(const std::string& path, std::string* message = nullptr)
{
    try
    {
        load_samples_csv(path);
    }
    catch (const Error& e)
    {
        if (message != nullptr)
        {
            *message = e.what();
        }
        return e.code();
    }
    return ErrorCode::InvalidArgument; // unreachable marker for "did not throw"
}

} // namespace

TEST_CASE("CSV round trips are lossless")
{
    SyntheticConfig cfg;
    cfg.seed = 7;
    cfg.T = 60;
    cfg.m = 3;
    cfg.n = 2;
    const SyntheticMarket market = generate_synthetic(cfg);
    const std::string path = "io_scratch_roundtrip.csv";
    write_samples_csv(path, market.samples);
    const SampleSet back = load_samples_csv(path);
    REQUIRE(back.N() == 60);
    REQUIRE(back.n() == 2);
    REQUIRE(back.m() == 3);
    CHECK((back.X() - market.samples.X()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.Y() - market.samples.Y()).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("the generator is bitwise reproducible per seed")
{
    SyntheticConfig cfg;
    cfg.seed = 123;
    cfg.T = 80;
    cfg.m = 5;
    cfg.n = 3;
    const SyntheticMarket a = generate_synthetic(cfg);
    const SyntheticMarket b = generate_synthetic(cfg);
    CHECK((a.samples.X() - b.samples.X()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.samples.Y() - b.samples.Y()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.factors - b.factors).cwiseAbs().maxCoeff() == 0.0);
    cfg.seed = 124;
    const SyntheticMarket c = generate_synthetic(cfg);
    CHECK((a.samples.Y() - c.samples.Y()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("predictors hit the configured factor correlation")
{
    SyntheticConfig cfg;
    cfg.seed = 7;
    cfg.T = 100000;
    cfg.m = 4;
    cfg.n = 3;
    cfg.predictor_corr = 0.1;
    const SyntheticMarket market = generate_synthetic(cfg);
    const Eigen::MatrixXd& X = market.samples.X();
    const Eigen::MatrixXd& F = market.factors;
    for (int j = 0; j < cfg.n; ++j)
    {
        const Eigen::VectorXd xj = X.col(j).array() - X.col(j).mean();
        const Eigen::VectorXd fj = F.col(j).array() - F.col(j).mean();
        const double corr = xj.dot(fj) / (xj.norm() * fj.norm());
        CHECK(std::abs(corr - 0.1) < 0.02);
    }
}

TEST_CASE("returns are exactly factor-driven when idiosyncratic noise is off")
{
    SyntheticConfig cfg;
    cfg.seed = 5;
    cfg.T = 50;
    cfg.m = 4;
    cfg.n = 3;
    cfg.idio_vol = 0.0;
    const SyntheticMarket market = generate_synthetic(cfg);
    const Eigen::VectorXd sv =
        market.samples.Y().jacobiSvd().singularValues();
    REQUIRE(sv.size() == 4);
    CHECK(sv[3] <= 1e-10 * sv[0]);
}

TEST_CASE("long-run sample covariance matches the factor model")
{
    SyntheticConfig cfg;
    cfg.seed = 21;
    cfg.T = 100000;
    cfg.m = 3;
    cfg.n = 2;
    cfg.loadings = Eigen::MatrixXd(3, 2);
    cfg.loadings << 1.0, 0.2, 0.5, 0.8, 0.3, 0.3;
    cfg.factor_vol = Eigen::VectorXd(2);
    cfg.factor_vol << 0.02, 0.01;
    cfg.idio_vol = 0.005;
    const SyntheticMarket market = generate_synthetic(cfg);
    const Eigen::MatrixXd Y = market.samples.Y();
    const Eigen::MatrixXd centered = Y.rowwise() - Y.colwise().mean();
    const Eigen::MatrixXd sample_cov =
        centered.transpose() * centered / (cfg.T - 1.0);
    const Eigen::MatrixXd model_cov =
        cfg.loadings * cfg.factor_vol.array().square().matrix().asDiagonal() *
            cfg.loadings.transpose() +
        cfg.idio_vol * cfg.idio_vol * Eigen::MatrixXd::Identity(3, 3);
    CHECK((sample_cov - model_cov).norm() <= 0.05 * model_cov.norm());
}

TEST_CASE("generator configuration is validated")
{
    SyntheticConfig cfg;
    cfg.T = 0;
    CHECK_THROWS_AS(generate_synthetic(cfg), Error);
    cfg = SyntheticConfig{};
    cfg.predictor_corr = 1.0;
    CHECK_THROWS_AS(generate_synthetic(cfg), Error);
    cfg = SyntheticConfig{};
    cfg.loadings = Eigen::MatrixXd::Ones(2, 2); // wrong shape for m=10, n=3
    CHECK_THROWS_AS(generate_synthetic(cfg), Error);
}

TEST_CASE("loader reports missing and empty files as IO errors")
{
    CHECK(load_error("definitely_not_here_482.csv") == ErrorCode::IoError);
    const std::string path = scratch_file("empty.csv", "");
    CHECK(load_error(path) == ErrorCode::IoError);
    std::remove(path.c_str());
}

TEST_CASE("loader rejects malformed headers with position context")
{
    std::string message;
    const std::string bad = scratch_file("badheader.csv", "a,b\n1,2\n");
    CHECK(load_error(bad, &message) == ErrorCode::SchemaError);
    CHECK(message.find(":1:") != std::string::npos);
    std::remove(bad.c_str());

    const std::string xonly = scratch_file("xonly.csv", "x_1,x_2\n1,2\n");
    CHECK(load_error(xonly) == ErrorCode::SchemaError);
    std::remove(xonly.c_str());

    const std::string headeronly = scratch_file("headeronly.csv", "x_1,y_1\n");
    CHECK(load_error(headeronly) == ErrorCode::SchemaError);
    std::remove(headeronly.c_str());
}

TEST_CASE("loader rejects malformed rows with line context")
{
    std::string message;
    const std::string shortrow =
        scratch_file("shortrow.csv", "x_1,y_1\n0.5,0.01\n0.25\n");
    CHECK(load_error(shortrow, &message) == ErrorCode::SchemaError);
    CHECK(message.find(":3:") != std::string::npos);
    std::remove(shortrow.c_str());

    message.clear();
    const std::string nonnum =
        scratch_file("nonnum.csv", "x_1,y_1\n0.5,zebra\n");
    CHECK(load_error(nonnum, &message) == ErrorCode::SchemaError);
    CHECK(message.find(":2") != std::string::npos);
    std::remove(nonnum.c_str());
}
