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
 * @file solver_backends.hpp
 * @brief Internal backend entry points behind solve_conic (not installed).
 */

#pragma once

#include "condor/conic.hpp"

namespace condor
{
namespace detail
{

/// Interior-point backend (Clarabel FFI). Handles all cone kinds.
Solution solve_interior_point(const ConicProgram& p, const SolveOptions& opts);

/// Exhaustive-vertex fallback for LP-only programs (no SOC/PSD blocks).
Solution solve_vertex(const ConicProgram& p, const SolveOptions& opts);

} // namespace detail
} // namespace condor
