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
 * @file data_io.hpp
 * @brief CSV sample ingestion and the synthetic factor-data generator.
 *
 * CSV schema: header `x_1,...,x_n,y_1,...,y_m`, one row per period,
 * decimal point '.', UTF-8. The writer emits 17 significant digits so
 * round-trips are lossless.
 *
 * The generator draws i.i.d. Gaussian factor returns, forms asset returns
 * as loadings * factors + idiosyncratic noise, and builds predictors as a
 * closed-form mixture of the (standardized) contemporaneous factor return
 * and independent noise hitting a prescribed correlation target.
 */

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "condor/types.hpp"

namespace condor
{

/// Loads a SampleSet from CSV; throws IoError / SchemaError with row
/// context on malformed input.
SampleSet load_samples_csv(const std::string& path);

/// Writes a SampleSet as CSV (17 significant digits).
void write_samples_csv(const std::string& path, const SampleSet& data);

/**
 * @brief Configuration of the synthetic market generator.
 *
 * `loadings` may be left empty (0 x 0) to draw a seeded random loading
 * matrix with entries in [0.2, 1.2]. `factor_vol` is the per-factor
 * standard deviation of the i.i.d. factor returns.
 */
struct SyntheticConfig
{
    std::uint64_t seed = 0;
    int T = 1000;                 ///< periods
    int m = 10;                   ///< assets
    int n = 3;                    ///< factors
    double predictor_corr = 0.1;  ///< target corr(X_raw, X), in (0, 1)
    Eigen::MatrixXd loadings;     ///< m x n, or empty to auto-generate
    Eigen::VectorXd factor_vol;   ///< n, or empty for a default profile
    double idio_vol = 0.01;       ///< idiosyncratic return volatility

    void validate() const;
};

/// Generated market: samples (predictors, returns) plus the latent factor
/// path that produced them.
struct SyntheticMarket
{
    SampleSet samples;
    Eigen::MatrixXd factors; ///< T x n latent factor returns
};

/**
 * @brief Generates a reproducible synthetic market (same seed, same bits).
 */
SyntheticMarket generate_synthetic(const SyntheticConfig& cfg);

} // namespace condor
