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
 * @file errors.hpp
 * @brief Error taxonomy shared across the condor library.
 *
 * Every failure mode that callers are expected to branch on carries a stable
 * machine-readable code. The CLI serializes these codes verbatim into its
 * JSON error output, so the enum-to-string mapping here is part of the
 * public contract.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace condor
{

/// Stable error codes. String forms (see to_string) are part of the CLI
/// contract and must not be renamed.
enum class ErrorCode
{
    InvalidArgument,      ///< malformed inputs (dimensions, ranges, NaN)
    DimensionMismatch,    ///< vectors/matrices with inconsistent shapes
    RegimeRhoBelowMin,    ///< rho <= rho_min: adversary problem infeasible
    RegimeBoundary,       ///< |rho - rho_max| below tolerance: undefined regime
    RegimeUninformative,  ///< worst case equals sup of the loss; data-independent
    NullProbabilityRegime,///< eps floor request with rho >= rho_max
    EmptyFiber,           ///< conditioning on an empirical null event
    EmptyIndexSet,        ///< required index set (e.g. type-infinity J) is empty
    UnsupportedProgram,   ///< builder preconditions not met (loss/support kind)
    SolverFailure,        ///< conic backend returned a non-optimal status
    IoError,              ///< file system / parse failures
    SchemaError           ///< CSV/JSON schema violations
};

/// Returns the stable SCREAMING_SNAKE_CASE code string for an ErrorCode.
const char* to_string(ErrorCode code) noexcept;

/**
 * @brief Exception type carrying an ErrorCode plus optional detail payload.
 *
 * `payload()` is free-form machine-readable context (JSON text by
 * convention), e.g. a serialized conic program after a solver failure.
 */
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message, std::string payload = {})
        : std::runtime_error(message), code_(code), payload_(std::move(payload))
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const std::string& payload() const noexcept { return payload_; }

private:
    ErrorCode code_;
    std::string payload_;
};

namespace detail
{
/// Throws Error(code, message) when `condition` is false.
inline void require(bool condition, ErrorCode code, const std::string& message)
{
    if (!condition)
    {
        throw Error(code, message);
    }
}
} // namespace detail

} // namespace condor
