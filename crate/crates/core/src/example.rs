//! The transpose-map counterexample to the Grüss bound for positive maps.
//!
//! `a = [[1,3],[3,3]] ⊕ 0`, `b = diag(1,3) ⊕ 0` inside `M_k`. The defect is 6
//! for every `k ≥ 2`. For `k ≥ 3` the spectra are `{0, 2 ± √10}` and
//! `{0, 1, 3}`, giving radii `√10` and `3/2` and bound `1.5·√10 ≈ 4.7434`.
//! For `k = 2` the zero eigenvalue of `b` disappears, its radius drops to 1,
//! and the bound is `√10`; the verdict is the same.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gruss::{gruss_check, GrussReport};
use crate::matcore::{eigenvalues, real_matrix, Matrix};
use crate::posmaps::{embedded_transpose_map, transpose_map, MapRep};

/// Tolerance on every reported value.
pub const EXAMPLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleCase {
    pub name: String,
    pub dim: usize,
    /// Sorted real parts; both inputs are Hermitian.
    pub spectrum_a: Vec<f64>,
    pub spectrum_b: Vec<f64>,
    pub report: GrussReport,
    pub expected_defect: f64,
    pub expected_radius_a: f64,
    pub expected_radius_b: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub cases: Vec<ExampleCase>,
    pub violated: bool,
    pub matches: bool,
}

/// `[[1,3],[3,3]] ⊕ 0_{k−2}` and `diag(1,3) ⊕ 0_{k−2}`.
pub fn example_pair(k: usize) -> (Matrix, Matrix) {
    let mut a = Matrix::zeros(k, k);
    let mut b = Matrix::zeros(k, k);
    a.view_mut((0, 0), (2, 2))
        .copy_from(&real_matrix(2, 2, &[1.0, 3.0, 3.0, 3.0]));
    b.view_mut((0, 0), (2, 2))
        .copy_from(&real_matrix(2, 2, &[1.0, 0.0, 0.0, 3.0]));
    (a, b)
}

fn sorted_spectrum(x: &Matrix) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = eigenvalues(x)?.iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn case(name: &str, phi: &MapRep, k: usize, radius_b: f64) -> Result<ExampleCase> {
    let (a, b) = example_pair(k);
    let report = gruss_check(phi, &a, &b)?;
    let (expected_defect, expected_radius_a) = (6.0, 10f64.sqrt());
    let matches = (report.defect - expected_defect).abs() <= EXAMPLE_TOL
        && (report.radius_a.radius - expected_radius_a).abs() <= EXAMPLE_TOL
        && (report.radius_b.radius - radius_b).abs() <= EXAMPLE_TOL
        && (report.bound - expected_radius_a * radius_b).abs() <= EXAMPLE_TOL
        && !report.holds;
    Ok(ExampleCase {
        name: name.into(),
        dim: k,
        spectrum_a: sorted_spectrum(&a)?,
        spectrum_b: sorted_spectrum(&b)?,
        report,
        expected_defect,
        expected_radius_a,
        expected_radius_b: radius_b,
        matches,
    })
}

/// The headline case (transpose on `M_3`) first, then transpose on `M_2`
/// and `M_2` embedded into `M_3` with the normalized-trace corner.
pub fn transpose_example() -> Result<ExampleReport> {
    let cases = vec![
        case("transpose on M_3", &transpose_map(3)?, 3, 1.5)?,
        case("transpose on M_2", &transpose_map(2)?, 2, 1.0)?,
        case("transpose on M_2, padded by 1", &embedded_transpose_map(2, 1)?, 2, 1.0)?,
    ];
    Ok(ExampleReport {
        violated: cases.iter().all(|c| !c.report.holds),
        matches: cases.iter().all(|c| c.matches),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_cases_match() {
        let r = transpose_example().unwrap();
        assert!(r.matches && r.violated, "{r:#?}");
        let head = &r.cases[0].report;
        assert!((head.bound - 4.743416490252569).abs() < 1e-12);
        let s = &r.cases[0].spectrum_a;
        assert!((s[0] - (2.0 - 10f64.sqrt())).abs() < 1e-12 && s[1].abs() < 1e-12);
        assert_eq!(r.cases[0].spectrum_b.len(), 3);
    }

    #[test]
    fn deterministic() {
        assert_eq!(transpose_example().unwrap(), transpose_example().unwrap());
    }
}
