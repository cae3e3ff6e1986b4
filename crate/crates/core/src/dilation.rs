//! Kraus families, Stinespring isometries and two-unitary decompositions of
//! contractions, plus a numeric walk through the norm estimate
//! `‖φ(ab) − φ(a)φ(b)‖ ≤ ‖a‖‖b‖` built from them.

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::gruss::{chebyshev_radius, unitary_pair_sides};
use crate::matcore::{c, eigh, identity, kron, op_norm, unitarity_defect, Matrix, Tolerance, C64};
use crate::posmaps::{kraus_from_choi_vector, MapRep};

/// Choi eigenvalues at or below this are dropped from the Kraus family.
pub const KRAUS_CUTOFF: f64 = 1e-12;

/// Kraus operators from the Choi eigendecomposition; the family has
/// minimal length (the Choi rank above [`KRAUS_CUTOFF`]).
pub fn kraus_from_choi(phi: &MapRep) -> Result<Vec<Matrix>> {
    let tol = Tolerance::default();
    if !phi.is_cp(&tol)? {
        return Err(Error::Domain("Choi matrix not PSD".into()));
    }
    let eig = eigh(phi.choi(), &tol)?;
    let kraus: Vec<Matrix> = eig
        .values
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &val)| val > KRAUS_CUTOFF)
        .map(|(t, &val)| {
            let w = eig.vectors.column(t) * c(val.sqrt(), 0.0);
            kraus_from_choi_vector(&w, phi.dim_in(), phi.dim_out())
        })
        .collect();
    if kraus.is_empty() {
        // Only the zero map lands here, and it is not unital; keep one operator anyway.
        return Ok(vec![Matrix::zeros(phi.dim_out(), phi.dim_in())]);
    }
    Ok(kraus)
}

/// `φ(x) = v*(x ⊗ I_r)v` with `v: ℂ^m → ℂ^n ⊗ ℂ^r` an isometry.
#[derive(Debug, Clone)]
pub struct StinespringDilation {
    /// `(n·r) × m`; row `i·r + t` pairs input index `i` with environment index `t`.
    pub v: Matrix,
    pub env_dim: usize,
}

impl StinespringDilation {
    /// `x ↦ x ⊗ I_r`.
    pub fn represent(&self, x: &Matrix) -> Matrix {
        kron(x, &identity(self.env_dim))
    }

    /// `v*(x ⊗ I_r)v`.
    pub fn compress(&self, x: &Matrix) -> Result<Matrix> {
        let n = self.v.nrows() / self.env_dim;
        if x.shape() != (n, n) {
            return Err(dim_err!("dilation acts on {n}×{n}, got {:?}", x.shape()));
        }
        Ok(self.v.adjoint() * self.represent(x) * &self.v)
    }

    /// `‖v*v − I‖`.
    pub fn isometry_defect(&self) -> Result<f64> {
        op_norm(&(self.v.adjoint() * &self.v - identity(self.v.ncols())))
    }

    /// `v*π(a)(1 − vv*)π(b)v`, which equals `φ(ab) − φ(a)φ(b)`.
    pub fn defect_operator(&self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        let (pa, pb) = (self.represent(a), self.represent(b));
        let n = pa.nrows();
        if pb.nrows() != n || self.v.nrows() != n {
            return Err(dim_err!("dilation acts on {}×{}", self.v.nrows(), self.v.nrows()));
        }
        let gap = identity(n) - &self.v * self.v.adjoint();
        Ok(self.v.adjoint() * pa * gap * pb * &self.v)
    }
}

/// Stinespring dilation of a unital CP map.
pub fn stinespring(phi: &MapRep) -> Result<StinespringDilation> {
    let kraus = kraus_from_choi(phi)?;
    let unital = phi.unital_defect();
    if unital > 1e-10 {
        return Err(Error::Precondition(format!(
            "φ is not unital (‖φ(I) − I‖ = {unital:.3e}); v would not be an isometry"
        )));
    }
    let (n, m, r) = (phi.dim_in(), phi.dim_out(), kraus.len());
    let v = Matrix::from_fn(n * r, m, |row, j| kraus[row % r][(j, row / r)].conj());
    Ok(StinespringDilation { v, env_dim: r })
}

/// `a = scale · Σ weights[i] · unitaries[i]`.
#[derive(Debug, Clone)]
pub struct UnitaryDecomposition {
    pub weights: Vec<f64>,
    pub unitaries: Vec<Matrix>,
    pub scale: f64,
}

impl UnitaryDecomposition {
    pub fn reconstruct(&self) -> Matrix {
        let n = self.unitaries[0].nrows();
        let sum = self
            .weights
            .iter()
            .zip(&self.unitaries)
            .fold(Matrix::zeros(n, n), |acc, (&w, u)| acc + u * c(w, 0.0));
        sum * c(self.scale, 0.0)
    }
}

/// Writes `a / ‖a‖` as the average of two unitaries.
///
/// With `a/‖a‖ = UΣV*` and `Σ = (E + Ē)/2`, `E = diag(exp(i·arccos σ))`,
/// the unitaries are `UEV*` and `UĒV*`. The zero matrix gets scale 1.
pub fn russo_dye_decompose(a: &Matrix) -> Result<UnitaryDecomposition> {
    if !a.is_square() || a.is_empty() {
        return Err(dim_err!("decomposition needs a nonempty square matrix, got {:?}", a.shape()));
    }
    let norm = op_norm(a)?;
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let svd = (a / c(scale, 0.0)).svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let phases: Vec<C64> = svd
        .singular_values
        .iter()
        // Singular values within rounding of 1 are snapped so unitary input comes back unchanged.
        .map(|&s| C64::from_polar(1.0, if s >= 1.0 - 1e-12 { 0.0 } else { s.max(0.0).acos() }))
        .collect();
    let e = Matrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    let first = &u * &e * &vt;
    let second = &u * e.conjugate() * &vt;
    Ok(UnitaryDecomposition {
        weights: vec![0.5, 0.5],
        unitaries: vec![first, second],
        scale,
    })
}

/// One inequality `lhs ≤ rhs` in the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLink {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Slack on each link: `lhs ≤ rhs + 1e-8·max(1, rhs)`.
pub const LINK_TOL: f64 = 1e-8;

impl TraceLink {
    fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs + LINK_TOL * rhs.abs().max(1.0),
        }
    }
}

/// Every intermediate quantity of the estimate, for the raw pair `(a, b)`
/// and for the pair shifted by its optimal scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    /// Number of unitaries used for `a` and `b` (always 2 here).
    pub terms_a: usize,
    pub terms_b: usize,
    pub defect: f64,
    /// `‖a‖‖b‖`.
    pub norm_product: f64,
    /// Product of the two Chebyshev radii.
    pub bound: f64,
    pub links: Vec<TraceLink>,
}

impl TraceReport {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }

    /// First link that fails, if any.
    pub fn first_failure(&self) -> Option<&TraceLink> {
        self.links.iter().find(|l| !l.holds)
    }
}

fn chain(phi: &MapRep, prefix: &str, a: &Matrix, b: &Matrix, links: &mut Vec<TraceLink>) -> Result<()> {
    let da = russo_dye_decompose(a)?;
    let db = russo_dye_decompose(b)?;
    let (sa, sb) = (
        if op_norm(a)? > 0.0 { da.scale } else { 0.0 },
        if op_norm(b)? > 0.0 { db.scale } else { 0.0 },
    );
    let d = crate::gruss::defect(phi, a, b)?;

    let mut convex = 0.0;
    let mut pair_links = Vec::new();
    let mut factor_links = Vec::new();
    for (i, (alpha, u)) in da.weights.iter().zip(&da.unitaries).enumerate() {
        for (j, (beta, v)) in db.weights.iter().zip(&db.unitaries).enumerate() {
            let sides = unitary_pair_sides(phi, u, v)?;
            let pair = sides.lhs.max(0.0).sqrt();
            convex += alpha * beta * pair;
            pair_links.push(TraceLink::new(
                format!("{prefix}unitary pair ({i},{j})"),
                pair,
                sides.rhs.max(0.0).sqrt(),
            ));
        }
    }
    for (name, dec, left) in [("a", &da, true), ("b", &db, false)] {
        for (i, u) in dec.unitaries.iter().enumerate() {
            let pu = phi.apply(u)?;
            let factor = if left {
                phi.apply(&(u * u.adjoint()))? - &pu * pu.adjoint()
            } else {
                phi.apply(&(u.adjoint() * u))? - pu.adjoint() * &pu
            };
            factor_links.push(TraceLink::new(format!("{prefix}factor {name}{i}"), op_norm(&factor)?, 1.0));
        }
    }
    links.push(TraceLink::new(format!("{prefix}convexity"), d, sa * sb * convex));
    links.extend(pair_links);
    links.extend(factor_links);
    links.push(TraceLink::new(format!("{prefix}norm bound"), d, sa * sb));
    Ok(())
}

/// Replays the estimate step by step.
///
/// The raw chain ends in `defect ≤ ‖a‖‖b‖`. The centred chain runs the same
/// steps on `(a − λ, b − μ)` with `λ`, `μ` the optimal scalars; since `φ` is
/// unital the defect is unchanged and the final link is the Grüss bound.
/// For a map that is positive but not 2-positive, the convexity and factor
/// links still hold, so a failure of the bound shows up at a unitary-pair link.
pub fn main_theorem_trace(phi: &MapRep, a: &Matrix, b: &Matrix) -> Result<TraceReport> {
    let tol = Tolerance::default();
    let unital = phi.unital_defect();
    if unital > 1e-10 {
        return Err(Error::Precondition(format!("φ is not unital (‖φ(I) − I‖ = {unital:.3e})")));
    }
    let d = crate::gruss::defect(phi, a, b)?;
    let mut links = Vec::new();
    chain(phi, "", a, b, &mut links)?;

    let ra = chebyshev_radius(a, &tol)?;
    let rb = chebyshev_radius(b, &tol)?;
    let n = a.nrows();
    let shifted_a = a - identity(n) * ra.center;
    let shifted_b = b - identity(n) * rb.center;
    chain(phi, "centred ", &shifted_a, &shifted_b, &mut links)?;

    Ok(TraceReport {
        terms_a: 2,
        terms_b: 2,
        defect: d,
        norm_product: op_norm(a)? * op_norm(b)?,
        bound: ra.radius * rb.radius,
        links,
    })
}

/// `‖u*u − I‖` over every unitary in a decomposition.
pub fn decomposition_unitarity(dec: &UnitaryDecomposition) -> Result<f64> {
    dec.unitaries
        .iter()
        .try_fold(0.0f64, |m, u| Ok(m.max(unitarity_defect(u)?)))
}
