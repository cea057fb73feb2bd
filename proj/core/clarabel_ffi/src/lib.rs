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

//! Thin C ABI over Clarabel for the condor conic backend.
//!
//! The caller supplies the problem in Clarabel's native conic form
//!
//!     minimize    q' x
//!     subject to  A x + s = b,   s in K,
//!
//! with A in compressed-sparse-column layout and K a product of zero,
//! nonnegative, second-order and PSD-triangle cones (in row order).
//! PSD blocks use the scaled svec layout (off-diagonals times sqrt(2)),
//! upper triangle stacked column-wise, as Clarabel expects.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

/// Cone kinds understood by the shim. Must stay in sync with the C++ side.
pub const CONE_ZERO: i32 = 0;
pub const CONE_NONNEGATIVE: i32 = 1;
pub const CONE_SECOND_ORDER: i32 = 2;
pub const CONE_PSD_TRIANGLE: i32 = 3;

/// Solve statuses returned to C++. Must stay in sync with the C++ side.
pub const STATUS_SOLVED: i32 = 0;
pub const STATUS_ALMOST_SOLVED: i32 = 1;
pub const STATUS_PRIMAL_INFEASIBLE: i32 = 2;
pub const STATUS_DUAL_INFEASIBLE: i32 = 3;
pub const STATUS_ITERATION_LIMIT: i32 = 4;
pub const STATUS_NUMERICAL_LIMIT: i32 = 5;
pub const STATUS_SETUP_ERROR: i32 = 6;

#[repr(C)]
pub struct FfiCone {
    pub kind: i32,
    /// Vector length for zero/nonnegative/second-order cones; matrix order
    /// for PSD-triangle cones.
    pub dim: i64,
}

/// Solves one conic program. Returns a STATUS_* code.
///
/// # Safety
/// All pointers must reference buffers of the documented lengths:
/// `q`, `x_out`: `nvars`; `b`, `z_out`, `s_out`: `nrows`;
/// `colptr`: `nvars + 1`; `rowval`/`nzval`: `nnz`; `cones`: `ncones`.
#[no_mangle]
pub unsafe extern "C" fn clarabel_ffi_solve(
    nvars: i64,
    nrows: i64,
    q: *const f64,
    colptr: *const i64,
    rowval: *const i64,
    nzval: *const f64,
    nnz: i64,
    b: *const f64,
    cones: *const FfiCone,
    ncones: i64,
    tol: f64,
    max_iter: i32,
    verbose: i32,
    x_out: *mut f64,
    z_out: *mut f64,
    s_out: *mut f64,
    obj_out: *mut f64,
    iters_out: *mut i32,
) -> i32 {
    let nvars = nvars as usize;
    let nrows = nrows as usize;
    let nnz = nnz as usize;

    let q = std::slice::from_raw_parts(q, nvars);
    let b = std::slice::from_raw_parts(b, nrows);
    let colptr: Vec<usize> = std::slice::from_raw_parts(colptr, nvars + 1)
        .iter()
        .map(|&v| v as usize)
        .collect();
    let rowval: Vec<usize> = std::slice::from_raw_parts(rowval, nnz)
        .iter()
        .map(|&v| v as usize)
        .collect();
    let nzval: Vec<f64> = std::slice::from_raw_parts(nzval, nnz).to_vec();

    let a = CscMatrix::new(nrows, nvars, colptr, rowval, nzval);
    let p = CscMatrix::<f64>::zeros((nvars, nvars));

    let cone_slice = std::slice::from_raw_parts(cones, ncones as usize);
    let mut cone_spec: Vec<SupportedConeT<f64>> = Vec::with_capacity(cone_slice.len());
    for c in cone_slice {
        let dim = c.dim as usize;
        match c.kind {
            CONE_ZERO => cone_spec.push(SupportedConeT::ZeroConeT(dim)),
            CONE_NONNEGATIVE => cone_spec.push(SupportedConeT::NonnegativeConeT(dim)),
            CONE_SECOND_ORDER => cone_spec.push(SupportedConeT::SecondOrderConeT(dim)),
            CONE_PSD_TRIANGLE => cone_spec.push(SupportedConeT::PSDTriangleConeT(dim)),
            _ => return STATUS_SETUP_ERROR,
        }
    }

    let settings = DefaultSettings {
        verbose: verbose != 0,
        max_iter: max_iter.max(1) as u32,
        tol_gap_abs: tol,
        tol_gap_rel: tol,
        tol_feas: tol,
        ..DefaultSettings::default()
    };

    let mut solver = match DefaultSolver::new(&p, q, &a, b, &cone_spec, settings) {
        Ok(s) => s,
        Err(_) => return STATUS_SETUP_ERROR,
    };
    solver.solve();

    let sol = &solver.solution;
    std::slice::from_raw_parts_mut(x_out, nvars).copy_from_slice(&sol.x);
    std::slice::from_raw_parts_mut(z_out, nrows).copy_from_slice(&sol.z);
    std::slice::from_raw_parts_mut(s_out, nrows).copy_from_slice(&sol.s);
    *obj_out = sol.obj_val;
    *iters_out = sol.iterations as i32;

    match sol.status {
        SolverStatus::Solved => STATUS_SOLVED,
        SolverStatus::AlmostSolved => STATUS_ALMOST_SOLVED,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            STATUS_PRIMAL_INFEASIBLE
        }
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
            STATUS_DUAL_INFEASIBLE
        }
        SolverStatus::MaxIterations | SolverStatus::MaxTime => STATUS_ITERATION_LIMIT,
        _ => STATUS_NUMERICAL_LIMIT,
    }
}
