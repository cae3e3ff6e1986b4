//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON strings. Matrices use the same
//! `{rows, cols, data: [[re, im], …]}` document as the command-line tool.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use gruss_core::dilation::main_theorem_trace;
use gruss_core::gruss::{chebyshev_radius, gruss_check, Disk, GrussReport};
use gruss_core::io::{matrix_from_str, to_document};
use gruss_core::matcore::{eigenvalues, min_eig_herm, normality_defect, op_norm};
use gruss_core::posmaps::{depolarizing_map, identity_map, k_positivity_falsify, reduction_map, transpose_map, MapRep};
use gruss_core::{Error, Tolerance};

#[derive(Serialize)]
struct Spectrum {
    eigenvalues: Vec<[f64; 2]>,
    disk: Disk,
    normal: bool,
    norm: f64,
}

/// Eigenvalues, the Chebyshev disk and whether the matrix counts as normal.
pub fn spectrum_report(matrix: &str) -> Result<String, String> {
    let run = || -> Result<String, Error> {
        let a = matrix_from_str(matrix)?;
        let disk = chebyshev_radius(&a, &Tolerance::default())?;
        let norm = op_norm(&a)?;
        Ok(to_document(&Spectrum {
            eigenvalues: eigenvalues(&a)?.iter().map(|z| [z.re, z.im]).collect(),
            disk,
            normal: normality_defect(&a)? <= 1e-10 * norm * norm,
            norm,
        }))
    };
    run().map_err(|e| e.to_string())
}

/// `(1 − t)·id + t·target` on `M_n`.
fn blended(target: &str, t: f64, n: usize) -> Result<MapRep, Error> {
    let end = match target {
        "transpose" => transpose_map(n)?,
        "reduction" => reduction_map(n)?,
        "depolarizing" => depolarizing_map(n)?,
        other => return Err(Error::Parse(format!("unknown map {other:?}"))),
    };
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("blend weight must lie in [0, 1], got {t}")));
    }
    identity_map(n)?.mix(1.0 - t, &end)
}

#[derive(Serialize)]
struct PairReport {
    report: GrussReport,
    /// First failing step of the estimate, if any.
    failing_step: Option<String>,
}

/// Grüss defect against the bound for a blended map on a pair of matrices.
pub fn gruss_report(target: &str, t: f64, a: &str, b: &str) -> Result<String, String> {
    let run = || -> Result<String, Error> {
        let (a, b) = (matrix_from_str(a)?, matrix_from_str(b)?);
        let phi = blended(target, t, a.nrows())?;
        let report = gruss_check(&phi, &a, &b)?;
        let trace = main_theorem_trace(&phi, &a, &b)?;
        Ok(to_document(&PairReport {
            report,
            failing_step: trace.first_failure().map(|l| l.name.clone()),
        }))
    };
    run().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Positivity {
    t: f64,
    /// Smallest Choi eigenvalue; negative means not completely positive.
    choi_min_eig: f64,
    /// Most negative value found over Schmidt-rank-k vectors, one entry per k.
    witness_values: Vec<Option<f64>>,
}

/// Samples `t ∈ [0, 1]` at `steps + 1` points and searches for k-positivity
/// violations of the blended map for each `k = 1..=n`.
pub fn positivity_scan(target: &str, n: usize, steps: usize) -> Result<String, String> {
    let run = || -> Result<String, Error> {
        let tol = Tolerance::default();
        let steps = steps.clamp(1, 200);
        let mut out = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            let phi = blended(target, t, n)?;
            let witness_values = (1..=n)
                .map(|k| Ok(k_positivity_falsify(&phi, k, 8, 100, 7, &tol)?.map(|w| w.value)))
                .collect::<Result<Vec<_>, Error>>()?;
            out.push(Positivity {
                t,
                choi_min_eig: min_eig_herm(phi.choi())?,
                witness_values,
            });
        }
        Ok(to_document(&out))
    };
    run().map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn spectrum(matrix: &str) -> Result<String, JsValue> {
    spectrum_report(matrix).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gruss(target: &str, t: f64, a: &str, b: &str) -> Result<String, JsValue> {
    gruss_report(target, t, a, b).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn positivity(target: &str, n: usize, steps: usize) -> Result<String, JsValue> {
    positivity_scan(target, n, steps).map_err(|e| JsValue::from_str(&e))
}
