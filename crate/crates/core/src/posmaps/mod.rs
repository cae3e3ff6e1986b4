//! Linear maps `φ: M_n → M_m` stored by their Choi matrix.
//!
//! Choi layout: `C = Σ_ij E_ij ⊗ φ(E_ij)`, input factor first, so
//! `C[i·m + k, j·m + l] = φ(E_ij)[k, l]`. A Kraus family `{K_t}` (each
//! `m × n`) corresponds to Choi vectors `w_t[i·m + k] = K_t[k, i]`.

mod falsify;

use crate::error::{dim_err, Error, Result};
use crate::matcore::{
    block_assemble, block_extract, identity, is_psd, kron, matrix_unit, max_abs_diff, op_norm,
    trace, Matrix, Sampler, Tolerance, Vector, C64,
};

pub use falsify::{k_positivity_falsify, schmidt_minimize, SchmidtWitness};

/// Default falsifier budget.
pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_ITERS: usize = 200;

#[derive(Debug, Clone)]
pub struct MapRep {
    dim_in: usize,
    dim_out: usize,
    choi: Matrix,
    kraus: Option<Vec<Matrix>>,
}

impl MapRep {
    /// Builds the Choi matrix of `f` by evaluating it on matrix units.
    pub fn from_fn(dim_in: usize, dim_out: usize, f: impl Fn(&Matrix) -> Matrix) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(dim_err!("map dimensions must be ≥ 1"));
        }
        let mut choi = Matrix::zeros(dim_in * dim_out, dim_in * dim_out);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let img = f(&matrix_unit(dim_in, dim_in, i, j));
                if img.shape() != (dim_out, dim_out) {
                    return Err(dim_err!(
                        "map image is {:?}, expected {dim_out}×{dim_out}",
                        img.shape()
                    ));
                }
                choi.view_mut((i * dim_out, j * dim_out), (dim_out, dim_out))
                    .copy_from(&img);
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            choi,
            kraus: None,
        })
    }

    pub fn from_choi(dim_in: usize, dim_out: usize, choi: Matrix) -> Result<Self> {
        let d = dim_in * dim_out;
        if d == 0 || choi.shape() != (d, d) {
            return Err(dim_err!(
                "Choi matrix for M_{dim_in} → M_{dim_out} must be {d}×{d}, got {:?}",
                choi.shape()
            ));
        }
        Ok(Self {
            dim_in,
            dim_out,
            choi,
            kraus: None,
        })
    }

    /// `φ(X) = Σ_t K_t X K_t*`, each `K_t` of size `dim_out × dim_in`.
    pub fn from_kraus(dim_in: usize, dim_out: usize, kraus: Vec<Matrix>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 || kraus.is_empty() {
            return Err(dim_err!("Kraus family must be nonempty with positive dimensions"));
        }
        let d = dim_in * dim_out;
        let mut choi = Matrix::zeros(d, d);
        for k in &kraus {
            if k.shape() != (dim_out, dim_in) {
                return Err(dim_err!(
                    "Kraus operator is {:?}, expected {dim_out}×{dim_in}",
                    k.shape()
                ));
            }
            let w = choi_vector(k);
            choi += &w * w.adjoint();
        }
        Ok(Self {
            dim_in,
            dim_out,
            choi,
            kraus: Some(kraus),
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &Matrix {
        &self.choi
    }

    pub fn kraus(&self) -> Option<&[Matrix]> {
        self.kraus.as_deref()
    }


    fn check_input(&self, x: &Matrix) -> Result<()> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(dim_err!(
                "map acts on {n}×{n} matrices, got {:?}",
                x.shape(),
                n = self.dim_in
            ));
        }
        Ok(())
    }

    /// `φ(X)` by contracting the Choi matrix: `φ(X)[k,l] = Σ_ij X[i,j] C[i·m+k, j·m+l]`.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        self.check_input(x)?;
        let (n, m) = (self.dim_in, self.dim_out);
        let mut out = Matrix::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                let xij = x[(i, j)];
                if xij == C64::new(0.0, 0.0) {
                    continue;
                }
                for l in 0..m {
                    for k in 0..m {
                        out[(k, l)] += xij * self.choi[(i * m + k, j * m + l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ_t K_t X K_t*`; `None` when no Kraus family is attached.
    pub fn apply_kraus(&self, x: &Matrix) -> Option<Result<Matrix>> {
        let kraus = self.kraus.as_ref()?;
        Some(self.check_input(x).map(|_| {
            kraus
                .iter()
                .fold(Matrix::zeros(self.dim_out, self.dim_out), |acc, k| {
                    acc + k * x * k.adjoint()
                })
        }))
    }

    /// The amplification `φ_k` applied to a `kn × kn` block matrix.
    pub fn amplify(&self, k: usize, xbig: &Matrix) -> Result<Matrix> {
        if k == 0 || xbig.shape() != (k * self.dim_in, k * self.dim_in) {
            return Err(dim_err!(
                "amplification φ_{k} needs a {d}×{d} input, got {:?}",
                xbig.shape(),
                d = k * self.dim_in
            ));
        }
        let grid = block_extract(xbig, k)?;
        let mapped = grid
            .iter()
            .map(|row| row.iter().map(|b| self.apply(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        block_assemble(&mapped)
    }

    /// `‖φ(I_n) − I_m‖ ≤ tol`.
    pub fn is_unital(&self, tol: f64) -> bool {
        if self.dim_in != self.dim_out && self.dim_out == 0 {
            return false;
        }
        self.unital_defect() <= tol
    }

    pub fn unital_defect(&self) -> f64 {
        let img = self.apply(&identity(self.dim_in)).expect("identity has the input shape");
        op_norm(&(img - identity(self.dim_out))).expect("nonempty")
    }

    /// Checks `φ(X*) = φ(X)*` within 1e-10 on random Gaussian inputs.
    pub fn is_star_preserving(&self, trials: usize, seed: u64) -> bool {
        let mut s = Sampler::new(seed);
        (0..trials).all(|_| {
            let x = s.gaussian(self.dim_in, self.dim_in);
            let lhs = self.apply(&x.adjoint()).expect("shape checked");
            let rhs = self.apply(&x).expect("shape checked").adjoint();
            max_abs_diff(&lhs, &rhs) <= 1e-10
        })
    }

    /// Complete positivity via the Choi criterion.
    pub fn is_cp(&self, tol: &Tolerance) -> Result<bool> {
        is_psd(&self.choi, tol)
    }

    pub fn scaled(&self, s: f64) -> MapRep {
        Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            choi: self.choi.scale(s),
            kraus: None,
        }
    }

    /// `w·self + (1 − w)·other`.
    pub fn mix(&self, w: f64, other: &MapRep) -> Result<MapRep> {
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out) {
            return Err(dim_err!("cannot mix maps of different shapes"));
        }
        MapRep::from_choi(
            self.dim_in,
            self.dim_out,
            self.choi.scale(w) + other.choi.scale(1.0 - w),
        )
    }

    /// The composition `next ∘ self`.
    pub fn then(&self, next: &MapRep) -> Result<MapRep> {
        if self.dim_out != next.dim_in {
            return Err(dim_err!("cannot compose M_{} output with M_{} input", self.dim_out, next.dim_in));
        }
        MapRep::from_fn(self.dim_in, next.dim_out, |x| {
            next.apply(&self.apply(x).expect("shape checked")).expect("shape checked")
        })
    }
}

/// Choi vector of a single Kraus operator: `w[i·m + k] = K[k, i]`.
fn choi_vector(k: &Matrix) -> Vector {
    let (m, n) = k.shape();
    Vector::from_fn(n * m, |idx, _| k[(idx % m, idx / m)])
}

/// Inverse of [`choi_vector`].
pub(crate) fn kraus_from_choi_vector(w: &Vector, dim_in: usize, dim_out: usize) -> Matrix {
    Matrix::from_fn(dim_out, dim_in, |k, i| w[i * dim_out + k])
}

pub fn identity_map(n: usize) -> Result<MapRep> {
    Ok(MapRep::from_kraus(n, n, vec![identity(n)])?)
}

/// The transpose map `X ↦ Xᵀ` on `M_n`, `n ≥ 2`.
pub fn transpose_map(n: usize) -> Result<MapRep> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "transpose map needs n ≥ 2 (on M_1 it is the identity), got {n}"
        )));
    }
    MapRep::from_fn(n, n, |x| x.transpose())
}

/// `a ↦ aᵀ ⊕ (tr(a)/k)·I_pad`: a unital positive map `M_k → M_{k+pad}`.
pub fn embedded_transpose_map(k: usize, pad: usize) -> Result<MapRep> {
    transpose_map(k)?;
    MapRep::from_fn(k, k + pad, |x| {
        let mut out = Matrix::zeros(k + pad, k + pad);
        out.view_mut((0, 0), (k, k)).copy_from(&x.transpose());
        let corner = trace(x) / k as f64;
        for p in k..k + pad {
            out[(p, p)] = corner;
        }
        out
    })
}

/// `X ↦ ((n−1)·tr(X)·I − X) / (n² − n − 1)`.
///
/// Unital, `(n−1)`-positive and not completely positive: the Choi matrix is
/// `((n−1)I − ΩΩ*)/(n²−n−1)` with `Ω = Σ e_i ⊗ e_i`, and a unit vector of
/// Schmidt rank `k` overlaps `Ω` by at most `√k`. For `n = 2` this is
/// `X ↦ tr(X)·I − X`.
pub fn reduction_map(n: usize) -> Result<MapRep> {
    if n < 2 {
        return Err(Error::Domain(format!("reduction map needs n ≥ 2, got {n}")));
    }
    let nf = n as f64;
    let norm = nf * nf - nf - 1.0;
    MapRep::from_fn(n, n, |x| {
        (identity(n) * (trace(x) * (nf - 1.0)) - x).unscale(norm)
    })
}

/// `X ↦ tr(X)/n · I`, the completely depolarizing unital map.
pub fn depolarizing_map(n: usize) -> Result<MapRep> {
    MapRep::from_fn(n, n, |x| identity(n) * (trace(x) / n as f64))
}

/// Random unital CP map `φ(x) = W*(x ⊗ I_r)W` with `W: ℂ^n → ℂ^n ⊗ ℂ^r` a
/// random isometry. Kraus operators `K_t = W_t*` where `W_t[i, j] = W[i·r + t, j]`.
pub fn random_unital_cp(n: usize, r: usize, seed: u64) -> Result<MapRep> {
    if n == 0 || r == 0 {
        return Err(dim_err!("random_unital_cp needs n, r ≥ 1"));
    }
    let w = Sampler::new(seed).isometry(n * r, n);
    let kraus = (0..r)
        .map(|t| Matrix::from_fn(n, n, |i, j| w[(i * r + t, j)]).adjoint())
        .collect();
    MapRep::from_kraus(n, n, kraus)
}

/// `x ↦ x ⊗ I_r`.
pub fn ampliation(x: &Matrix, r: usize) -> Matrix {
    kron(x, &identity(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, is_psd, min_eig_herm, real_matrix};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn identity_map_applies_as_identity() {
        let phi = identity_map(3).unwrap();
        let x = Sampler::new(1).gaussian(3, 3);
        assert!(max_abs_diff(&phi.apply(&x).unwrap(), &x) < 1e-15);
        assert!(phi.is_cp(&tol()).unwrap());
        assert!(phi.amplify(2, &Sampler::new(2).gaussian(6, 6)).is_ok());
    }

    #[test]
    fn transpose_examples() {
        let theta = transpose_map(2).unwrap();
        let ab = real_matrix(2, 2, &[1.0, 9.0, 3.0, 9.0]);
        assert_eq!(theta.apply(&ab).unwrap(), real_matrix(2, 2, &[1.0, 3.0, 9.0, 9.0]));
        let x = real_matrix(2, 2, &[1.0, 3.0, 9.0, 9.0]);
        assert_eq!(theta.apply(&x).unwrap(), real_matrix(2, 2, &[1.0, 9.0, 3.0, 9.0]));
        assert!(theta.is_unital(1e-12));
        assert!(theta.is_star_preserving(20, 3));
        assert!(!theta.is_cp(&tol()).unwrap());
        let y = Sampler::new(4).gaussian(2, 2);
        assert_eq!(theta.apply(&theta.apply(&y).unwrap()).unwrap(), y);
        assert!(matches!(transpose_map(1), Err(Error::Domain(_))));
    }

    #[test]
    fn amplified_transpose_of_entangled_projector() {
        // Σ E_ij ⊗ E_ij on M_2 ⊗ M_2; its partial transpose is the swap.
        let theta = transpose_map(2).unwrap();
        let mut big = Matrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                big += kron(&matrix_unit(2, 2, i, j), &matrix_unit(2, 2, i, j));
            }
        }
        let out = theta.amplify(2, &big).unwrap();
        assert!((min_eig_herm(&out).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(theta.amplify(1, &big.view((0, 0), (2, 2)).into_owned()).unwrap(),
                   theta.apply(&big.view((0, 0), (2, 2)).into_owned()).unwrap());
        assert!(theta.amplify(3, &big).is_err());
    }

    #[test]
    fn unital_checks() {
        assert!(reduction_map(3).unwrap().is_unital(1e-12));
        assert!(!identity_map(2).unwrap().scaled(2.0).is_unital(1e-12));
        for (k, pad) in [(2, 0), (2, 1), (3, 2)] {
            let phi = embedded_transpose_map(k, pad).unwrap();
            assert!(phi.is_unital(1e-12));
            assert_eq!(phi.dim_out(), k + pad);
        }
    }

    #[test]
    fn embedded_transpose_without_padding_is_transpose() {
        let a = embedded_transpose_map(3, 0).unwrap();
        let b = transpose_map(3).unwrap();
        assert_eq!(a.choi(), b.choi());
    }

    #[test]
    fn reduction_examples() {
        let r2 = reduction_map(2).unwrap();
        let x = Matrix::from_row_slice(2, 2, &[c(1., 0.), c(2., 1.), c(3., -1.), c(4., 0.)]);
        let expect = Matrix::from_row_slice(2, 2, &[c(4., 0.), c(-2., -1.), c(-3., 1.), c(1., 0.)]);
        assert!(max_abs_diff(&r2.apply(&x).unwrap(), &expect) < 1e-15);

        // Choi of the n = 3 map is (2I − ΩΩ*)/5, eigenvalues {−1/5, 2/5 (×8)}.
        let r3 = reduction_map(3).unwrap();
        assert!(!r3.is_cp(&tol()).unwrap());
        assert!((min_eig_herm(r3.choi()).unwrap() + 0.2).abs() < 1e-12);
        assert!(r3.is_star_preserving(20, 5));
    }

    #[test]
    fn random_unital_cp_contract() {
        for seed in 0..10 {
            let phi = random_unital_cp(3, 2, seed).unwrap();
            assert!(phi.is_cp(&tol()).unwrap());
            assert!(phi.is_unital(1e-10));
            // tr C = Σ_i tr φ(E_ii) = tr φ(I).
            let direct: C64 = (0..3).map(|i| trace(&phi.apply(&matrix_unit(3, 3, i, i)).unwrap())).sum();
            assert!((trace(phi.choi()) - direct).norm() < 1e-12);
            assert!((trace(phi.choi()).re - 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn choi_is_self_consistent() {
        for phi in [
            transpose_map(3).unwrap(),
            reduction_map(3).unwrap(),
            embedded_transpose_map(2, 2).unwrap(),
            random_unital_cp(2, 3, 7).unwrap(),
        ] {
            let rebuilt = MapRep::from_fn(phi.dim_in(), phi.dim_out(), |x| phi.apply(x).unwrap()).unwrap();
            assert!(max_abs_diff(rebuilt.choi(), phi.choi()) < 1e-12);
        }
    }

    #[test]
    fn kraus_and_choi_application_agree() {
        let mut s = Sampler::new(99);
        for seed in 0..5 {
            let phi = random_unital_cp(4, 3, seed).unwrap();
            for _ in 0..100 {
                let x = s.gaussian(4, 4);
                let via_kraus = phi.apply_kraus(&x).unwrap().unwrap();
                assert!(max_abs_diff(&via_kraus, &phi.apply(&x).unwrap()) < 1e-10);
            }
        }
    }

    #[test]
    fn constructed_maps_are_positive_on_psd_inputs() {
        let mut s = Sampler::new(5);
        let maps = [
            transpose_map(3).unwrap(),
            embedded_transpose_map(3, 1).unwrap(),
            reduction_map(3).unwrap(),
            random_unital_cp(3, 2, 1).unwrap(),
        ];
        for phi in &maps {
            for _ in 0..100 {
                let p = s.psd(3);
                assert!(is_psd(&phi.apply(&p).unwrap(), &tol()).unwrap());
            }
        }
    }

    #[test]
    fn apply_rejects_wrong_shape() {
        let phi = transpose_map(2).unwrap();
        assert!(matches!(phi.apply(&identity(3)), Err(Error::Dimension(_))));
        assert!(MapRep::from_choi(2, 2, identity(3)).is_err());
    }
}
