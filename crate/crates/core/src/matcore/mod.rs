//! Dense complex matrix kernel.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Kronecker products use the
//! row-major convention `(i·rows(B)+k, j·cols(B)+l) ↦ A[i,j]·B[k,l]`; the Choi
//! layout in [`crate::posmaps`] and the dilation layout in
//! [`crate::dilation`] both depend on it.

mod random;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};

pub use random::{
    random_hermitian, random_normal_commuting_pair, random_psd, random_unitary, Sampler,
};

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type Vector = DVector<C64>;

/// Declared floating-point slack for the exact relations of the theory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Absolute bound on `max |A − A*|` entries.
    pub hermitian_tol: f64,
    /// Relative slack on the minimum eigenvalue, scaled by `max(1, ‖A‖)`.
    pub psd_tol: f64,
    /// Convergence threshold for iterative minimizers.
    pub solve_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            hermitian_tol: 1e-10,
            psd_tol: 1e-8,
            solve_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(hermitian_tol: f64, psd_tol: f64, solve_tol: f64) -> Result<Self> {
        let tol = Self {
            hermitian_tol,
            psd_tol,
            solve_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hermitian_tol", self.hermitian_tol),
            ("psd_tol", self.psd_tol),
            ("solve_tol", self.solve_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> Matrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows × cols");
    Matrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn diag(entries: &[C64]) -> Matrix {
    Matrix::from_diagonal(&Vector::from_row_slice(entries))
}

pub fn real_diag(entries: &[f64]) -> Matrix {
    Matrix::from_diagonal(&Vector::from_iterator(
        entries.len(),
        entries.iter().map(|&x| c(x, 0.0)),
    ))
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

/// Matrix unit `E_ij` of size `rows × cols`.
pub fn matrix_unit(rows: usize, cols: usize, i: usize, j: usize) -> Matrix {
    let mut e = Matrix::zeros(rows, cols);
    e[(i, j)] = C64::new(1.0, 0.0);
    e
}

pub fn is_finite(a: &Matrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn require_square(a: &Matrix, what: &str) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(dim_err!("{what} requires a square matrix, got {}×{}", a.nrows(), a.ncols()));
    }
    Ok(a.nrows())
}

fn require_nonempty(a: &Matrix, what: &str) -> Result<()> {
    if a.is_empty() {
        return Err(dim_err!("{what} of an empty matrix"));
    }
    Ok(())
}

/// Singular values in descending order.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    require_nonempty(a, "singular values")?;
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &Matrix) -> Result<f64> {
    Ok(singular_values(a)?[0])
}

/// Largest entrywise modulus of `A − A*`.
pub fn hermitian_deviation(a: &Matrix) -> Result<f64> {
    let n = require_square(a, "hermitian check")?;
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    Ok(dev)
}

pub fn is_hermitian(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    Ok(hermitian_deviation(a)? <= tol.hermitian_tol)
}

/// `(A + A*)/2`.
pub fn hermitian_part(a: &Matrix) -> Matrix {
    (a + a.adjoint()).scale(0.5)
}

fn require_hermitian(a: &Matrix, tol: &Tolerance) -> Result<()> {
    let dev = hermitian_deviation(a)?;
    if dev > tol.hermitian_tol {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (max |A − A*| = {dev:.3e})"
        )));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `t` is the unit eigenvector for `values[t]`.
    pub vectors: Matrix,
}

pub fn eigh(a: &Matrix, tol: &Tolerance) -> Result<HermitianEigen> {
    require_nonempty(a, "eigendecomposition")?;
    require_hermitian(a, tol)?;
    let eig = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&t| eig.eigenvalues[t]).collect();
    let vectors = Matrix::from_columns(
        &order.iter().map(|&t| eig.eigenvectors.column(t).into_owned()).collect::<Vec<_>>(),
    );
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(a: &Matrix, tol: &Tolerance) -> Result<Vec<f64>> {
    require_nonempty(a, "eigenvalues")?;
    require_hermitian(a, tol)?;
    let mut v: Vec<f64> = hermitian_part(a).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Smallest eigenvalue of a Hermitian matrix (default tolerances for the guard).
pub fn min_eig_herm(a: &Matrix) -> Result<f64> {
    min_eig_herm_with(a, &Tolerance::default())
}

pub fn min_eig_herm_with(a: &Matrix, tol: &Tolerance) -> Result<f64> {
    Ok(eigvalsh(a, tol)?[0])
}

/// Minimum eigenvalue divided by `max(1, ‖A‖)`; nonnegative (up to slack) iff PSD.
pub fn psd_margin(a: &Matrix, tol: &Tolerance) -> Result<f64> {
    let vals = eigvalsh(a, tol)?;
    let norm = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(vals[0] / norm.max(1.0))
}

/// `A ⪰ 0` up to the relative slack `psd_tol · max(1, ‖A‖)`.
pub fn is_psd(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    if a.is_empty() {
        return Ok(true);
    }
    Ok(psd_margin(a, tol)? >= -tol.psd_tol)
}

/// Eigenvalues of an arbitrary square matrix via complex Schur form.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<C64>> {
    let n = require_square(a, "eigenvalues")?;
    require_nonempty(a, "eigenvalues")?;
    let t = a.clone().schur().unpack().1;
    let scale = t.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if k + 1 < n && t[(k + 1, k)].norm() > 1e-14 * scale {
            // Undeflated 2×2 block: roots of λ² − tr·λ + det.
            let (p, q, r, s) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k)], t[(k + 1, k + 1)]);
            let half_tr = (p + s) * 0.5;
            let disc = ((p - s) * 0.5).powi(2) + q * r;
            let root = disc.sqrt();
            out.push(half_tr + root);
            out.push(half_tr - root);
            k += 2;
        } else {
            out.push(t[(k, k)]);
            k += 1;
        }
    }
    Ok(out)
}

/// `‖A*A − AA*‖`.
pub fn normality_defect(a: &Matrix) -> Result<f64> {
    require_square(a, "normality check")?;
    let ad = a.adjoint();
    op_norm(&(&ad * a - a * &ad))
}

/// `‖U*U − I‖`.
pub fn unitarity_defect(u: &Matrix) -> Result<f64> {
    let n = require_square(u, "unitarity check")?;
    op_norm(&(u.adjoint() * u - identity(n)))
}

/// `‖XY − YX‖`.
pub fn commutator_norm(x: &Matrix, y: &Matrix) -> Result<f64> {
    if x.shape() != y.shape() {
        return Err(dim_err!("commutator of {:?} and {:?}", x.shape(), y.shape()));
    }
    op_norm(&(x * y - y * x))
}

/// Kronecker product, row-major convention.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = b.shape();
    let mut out = Matrix::zeros(a.nrows() * p, a.ncols() * q);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            out.view_mut((i * p, j * q), (p, q)).copy_from(&b.map(|z| z * aij));
        }
    }
    out
}

/// Assembles a grid of blocks. Blocks in the same grid row must share a row
/// count and blocks in the same grid column must share a column count.
pub fn block_assemble(blocks: &[Vec<Matrix>]) -> Result<Matrix> {
    let k = blocks.len();
    if k == 0 {
        return Err(dim_err!("empty block grid"));
    }
    let width = blocks[0].len();
    if blocks.iter().any(|row| row.len() != width) || width == 0 {
        return Err(dim_err!("ragged block grid"));
    }
    let heights: Vec<usize> = blocks.iter().map(|row| row[0].nrows()).collect();
    let widths: Vec<usize> = blocks[0].iter().map(|b| b.ncols()).collect();
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            if b.nrows() != heights[i] || b.ncols() != widths[j] {
                return Err(dim_err!(
                    "block ({i},{j}) is {}×{}, expected {}×{}",
                    b.nrows(),
                    b.ncols(),
                    heights[i],
                    widths[j]
                ));
            }
        }
    }
    let mut out = Matrix::zeros(heights.iter().sum(), widths.iter().sum());
    let mut r0 = 0;
    for (i, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (j, b) in row.iter().enumerate() {
            out.view_mut((r0, c0), (heights[i], widths[j])).copy_from(b);
            c0 += widths[j];
        }
        r0 += heights[i];
    }
    Ok(out)
}

/// Splits a square matrix into a `k × k` grid of equal square blocks.
pub fn block_extract(a: &Matrix, k: usize) -> Result<Vec<Vec<Matrix>>> {
    let n = require_square(a, "block extraction")?;
    if k == 0 || n % k != 0 {
        return Err(dim_err!("cannot split a {n}×{n} matrix into a {k}×{k} grid"));
    }
    let m = n / k;
    Ok((0..k)
        .map(|i| (0..k).map(|j| a.view((i * m, j * m), (m, m)).into_owned()).collect())
        .collect())
}

/// Principal square root of a PSD matrix (negative eigenvalues clipped to 0).
pub fn psd_sqrt(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let eig = eigh(a, tol)?;
    let roots: Vec<C64> = eig.values.iter().map(|&v| c(v.max(0.0).sqrt(), 0.0)).collect();
    Ok(&eig.vectors * diag(&roots) * eig.vectors.adjoint())
}

pub fn trace(a: &Matrix) -> C64 {
    a.diagonal().iter().sum()
}

/// Largest entrywise modulus of `A − B`.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn op_norm_examples() {
        let skew = real_matrix(2, 2, &[0.0, -6.0, 6.0, 0.0]);
        assert!((op_norm(&skew).unwrap() - 6.0).abs() < 1e-12);
        assert!((op_norm(&identity(5)).unwrap() - 1.0).abs() < 1e-12);
        let r = 10f64.sqrt();
        let d = real_diag(&[2.0 - r, 0.0, 2.0 + r]);
        assert!((op_norm(&d).unwrap() - (2.0 + r)).abs() < 1e-12);
        assert!(matches!(op_norm(&Matrix::zeros(0, 0)), Err(Error::Dimension(_))));
    }

    #[test]
    fn hermitian_examples() {
        assert!(is_hermitian(&real_matrix(2, 2, &[1.0, 3.0, 3.0, 3.0]), &tol()).unwrap());
        assert!(!is_hermitian(&real_matrix(2, 2, &[0.0, -6.0, 6.0, 0.0]), &tol()).unwrap());
        let pauli = Matrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(0., -1.), c(0., 0.)]);
        assert!(is_hermitian(&pauli, &tol()).unwrap());
        assert!(matches!(is_hermitian(&Matrix::zeros(2, 3), &tol()), Err(Error::Dimension(_))));
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&Matrix::zeros(3, 3), &tol()).unwrap());
        assert!(is_psd(&real_matrix(2, 2, &[2.0, 1.0, 1.0, 1.0]), &tol()).unwrap());
        assert!(!is_psd(&real_matrix(2, 2, &[1.0, 2.0, 2.0, 1.0]), &tol()).unwrap());
        let skew = real_matrix(2, 2, &[0.0, -6.0, 6.0, 0.0]);
        assert!(matches!(is_psd(&skew, &tol()), Err(Error::Contract(_))));
    }

    #[test]
    fn min_eig_examples() {
        assert!((min_eig_herm(&identity(4)).unwrap() - 1.0).abs() < 1e-12);
        let a = real_matrix(2, 2, &[1.0, 3.0, 3.0, 3.0]);
        assert!((min_eig_herm(&a).unwrap() - (2.0 - 10f64.sqrt())).abs() < 1e-12);
        assert!(min_eig_herm(&real_diag(&[0.0, 1.0, 3.0])).unwrap().abs() < 1e-15);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        assert_eq!(kron(&real_diag(&[1.0, 2.0]), &identity(2)), real_diag(&[1.0, 1.0, 2.0, 2.0]));
        let b = real_matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let k = kron(&matrix_unit(2, 2, 0, 1), &b);
        assert_eq!(k.view((0, 2), (2, 2)).into_owned(), b);
        assert_eq!(k.view((0, 0), (2, 2)).into_owned(), Matrix::zeros(2, 2));
        assert_eq!(k.view((2, 0), (2, 4)).into_owned(), Matrix::zeros(2, 4));
    }

    #[test]
    fn block_examples() {
        let a = real_matrix(2, 2, &[1.0, 3.0, 3.0, 3.0]);
        assert_eq!(block_assemble(&[vec![a.clone()]]).unwrap(), a);
        let mut s = Sampler::new(3);
        let grid: Vec<Vec<Matrix>> = (0..2).map(|_| (0..2).map(|_| s.gaussian(3, 3)).collect()).collect();
        assert_eq!(block_extract(&block_assemble(&grid).unwrap(), 2).unwrap(), grid);
        let ragged = vec![vec![identity(2), identity(3)], vec![identity(2), identity(2)]];
        assert!(matches!(block_assemble(&ragged), Err(Error::Dimension(_))));
        assert!(block_extract(&identity(5), 2).is_err());
    }

    #[test]
    fn general_eigenvalues_of_rotation() {
        let rot = real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let mut ev = eigenvalues(&rot).unwrap();
        ev.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let p = random_psd(4, 11).unwrap();
        let r = psd_sqrt(&p, &tol()).unwrap();
        assert!(max_abs_diff(&(&r * &r), &p) < 1e-10);
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(1e-10, 0.0, 1e-9).is_err());
        assert!(Tolerance::new(1e-10, 1e-8, 1e-9).is_ok());
    }
}
