//! The Grüss defect and its bound.
//!
//! For a unital 2-positive map `φ`,
//! `‖φ(ab) − φ(a)φ(b)‖ ≤ inf_λ‖a − λe‖ · inf_μ‖b − μe‖`. This module computes
//! both sides, the unitary-pair inequality the proof rests on, and the
//! commuting-normal special case that only needs positivity.

mod chebyshev;
mod disk;

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::matcore::{commutator_norm, normality_defect, op_norm, unitarity_defect, Matrix, Sampler, Tolerance};
use crate::posmaps::MapRep;

pub use chebyshev::{chebyshev_radius, minimize_distance_ellipsoid, minimize_distance_grid, NORMALITY_TOL};
pub use disk::{smallest_enclosing_disk, Disk};

/// Relative slack on the verdict `defect ≤ bound`.
pub const VERDICT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrussReport {
    pub defect: f64,
    pub bound: f64,
    pub radius_a: Disk,
    pub radius_b: Disk,
    pub holds: bool,
    /// `bound − defect`.
    pub margin: f64,
}

fn check_pair(phi: &MapRep, a: &Matrix, b: &Matrix) -> Result<()> {
    let n = phi.dim_in();
    if a.shape() != (n, n) || b.shape() != (n, n) {
        return Err(dim_err!(
            "φ acts on {n}×{n}; got a {:?}, b {:?}",
            a.shape(),
            b.shape()
        ));
    }
    Ok(())
}

/// `‖φ(ab) − φ(a)φ(b)‖`.
pub fn defect(phi: &MapRep, a: &Matrix, b: &Matrix) -> Result<f64> {
    check_pair(phi, a, b)?;
    op_norm(&defect_operator(phi, a, b)?)
}

/// `φ(ab) − φ(a)φ(b)`.
pub fn defect_operator(phi: &MapRep, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_pair(phi, a, b)?;
    Ok(phi.apply(&(a * b))? - phi.apply(a)? * phi.apply(b)?)
}

pub fn gruss_check(phi: &MapRep, a: &Matrix, b: &Matrix) -> Result<GrussReport> {
    gruss_check_with(phi, a, b, &Tolerance::default())
}

/// Both sides of the Grüss inequality. The verdict is observational: it says
/// nothing about whether `φ` is 2-positive.
pub fn gruss_check_with(phi: &MapRep, a: &Matrix, b: &Matrix, tol: &Tolerance) -> Result<GrussReport> {
    let defect = defect(phi, a, b)?;
    let radius_a = chebyshev_radius(a, tol)?;
    let radius_b = chebyshev_radius(b, tol)?;
    let bound = radius_a.radius * radius_b.radius;
    Ok(GrussReport {
        defect,
        bound,
        radius_a,
        radius_b,
        holds: defect <= bound + VERDICT_TOL * bound.max(1.0),
        margin: bound - defect,
    })
}

/// Left and right sides of
/// `‖φ(ab) − φ(a)φ(b)‖² ≤ ‖φ(aa*) − φ(a)φ(a)*‖ · ‖φ(b*b) − φ(b)*φ(b)‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryPairSides {
    pub lhs: f64,
    pub rhs: f64,
}

/// Evaluates both sides without checking that `a`, `b` are unitary.
pub fn unitary_pair_sides(phi: &MapRep, a: &Matrix, b: &Matrix) -> Result<UnitaryPairSides> {
    check_pair(phi, a, b)?;
    let (pa, pb) = (phi.apply(a)?, phi.apply(b)?);
    let d = op_norm(&(phi.apply(&(a * b))? - &pa * &pb))?;
    let left = op_norm(&(phi.apply(&(a * a.adjoint()))? - &pa * pa.adjoint()))?;
    let right = op_norm(&(phi.apply(&(b.adjoint() * b))? - pb.adjoint() * &pb))?;
    Ok(UnitaryPairSides {
        lhs: d * d,
        rhs: left * right,
    })
}

/// The squared inequality for unitary `a`, `b`; `lhs ≤ rhs + tol`.
pub fn prop24_inequality_check(phi: &MapRep, a: &Matrix, b: &Matrix, tol: f64) -> Result<bool> {
    check_pair(phi, a, b)?;
    for (name, u) in [("a", a), ("b", b)] {
        let dev = unitarity_defect(u)?;
        if dev > 1e-10 {
            return Err(Error::Precondition(format!("{name} is not unitary (‖u*u − I‖ = {dev:.3e})")));
        }
    }
    let sides = unitary_pair_sides(phi, a, b)?;
    Ok(sides.lhs <= sides.rhs + tol)
}

fn require_normal(a: &Matrix, tol: f64, name: &str) -> Result<f64> {
    let norm = op_norm(a)?;
    let dev = normality_defect(a)?;
    if dev > tol * norm.powi(2).max(1.0) {
        return Err(Error::Precondition(format!("{name} is not normal (‖x*x − xx*‖ = {dev:.3e})")));
    }
    Ok(norm)
}

/// Left and right sides of `‖φ(aa*) − φ(a)φ(a)*‖ ≤ (inf_λ‖a − λe‖)²`.
pub fn normal_self_sides(phi: &MapRep, a: &Matrix) -> Result<UnitaryPairSides> {
    check_pair(phi, a, a)?;
    let pa = phi.apply(a)?;
    let lhs = op_norm(&(phi.apply(&(a * a.adjoint()))? - &pa * pa.adjoint()))?;
    let r = chebyshev_radius(a, &Tolerance::default())?.radius;
    Ok(UnitaryPairSides { lhs, rhs: r * r })
}

/// The `b = a*` case of the commuting-normal inequality, for normal `a`.
pub fn corollary_normal_check(phi: &MapRep, a: &Matrix, tol: f64) -> Result<bool> {
    require_normal(a, 1e-10, "a")?;
    let sides = normal_self_sides(phi, a)?;
    Ok(sides.lhs <= sides.rhs + tol)
}

/// For normal `x` commuting with `y`, checks `x*y = yx*` up to
/// `100·tol·max(1, ‖x‖‖y‖)`.
pub fn fuglede_putnam_check(x: &Matrix, y: &Matrix, tol: f64) -> Result<bool> {
    let xn = require_normal(x, tol, "x")?;
    let scale = (xn * op_norm(y)?).max(1.0);
    let comm = commutator_norm(x, y)?;
    if comm > tol * scale {
        return Err(Error::Precondition(format!("x and y do not commute (‖xy − yx‖ = {comm:.3e})")));
    }
    let xd = x.adjoint();
    Ok(op_norm(&(&xd * y - y * &xd))? <= 100.0 * tol * scale)
}

/// Pass count and worst margin over a batch of trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    /// Smallest `rhs − lhs` seen (relative quantities are suite-specific).
    pub worst_margin: f64,
    /// Whether a failure is a correctness failure or only diagnostic output.
    pub contractual: bool,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>, contractual: bool) -> Self {
        Self {
            name: name.into(),
            trials: 0,
            passed: 0,
            worst_margin: f64::INFINITY,
            contractual,
        }
    }

    pub fn record(&mut self, passed: bool, margin: f64) {
        self.trials += 1;
        self.passed += passed as usize;
        self.worst_margin = self.worst_margin.min(margin);
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    pub fn ok(&self) -> bool {
        !self.contractual || self.all_passed()
    }
}

/// Which random pairs a Grüss suite draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `(U D₁ U*, U D₂ U*)`.
    CommutingNormal,
    /// Independent complex Gaussian matrices.
    Arbitrary,
}

/// Runs [`gruss_check`] on `trials` random pairs; trial `t` uses seed `seed + t`.
pub fn gruss_suite(name: &str, phi: &MapRep, kind: PairKind, trials: usize, seed: u64) -> Result<SuiteReport> {
    let n = phi.dim_in();
    let mut report = SuiteReport::new(name, true);
    for t in 0..trials {
        let mut s = Sampler::new(seed.wrapping_add(t as u64));
        let (a, b) = match kind {
            PairKind::CommutingNormal => s.normal_commuting_pair(n),
            PairKind::Arbitrary => (s.gaussian(n, n), s.gaussian(n, n)),
        };
        let r = gruss_check(phi, &a, &b)?;
        report.record(r.holds, r.margin);
    }
    Ok(report)
}

/// Commuting normal pairs against a unital positive map: every trial must
/// pass even when `φ` is not 2-positive.
pub fn theorem31_suite(phi: &MapRep, trials: usize, seed: u64) -> Result<SuiteReport> {
    gruss_suite("commuting normal pairs", phi, PairKind::CommutingNormal, trials, seed)
}
