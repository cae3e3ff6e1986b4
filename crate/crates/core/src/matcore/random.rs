use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c, diag, Matrix, Vector, C64};
use crate::error::{dim_err, Result};

/// Seeded source of random vectors and matrices.
///
/// Complex Gaussian entries have independent standard normal real and
/// imaginary parts. Every sampler is fully determined by its seed.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn complex(&mut self) -> C64 {
        c(self.normal(), self.normal())
    }

    pub fn gaussian(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.complex())
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vector {
        Vector::from_fn(n, |_, _| self.complex())
    }

    pub fn unit_vector(&mut self, n: usize) -> Vector {
        let v = self.gaussian_vector(n);
        let norm = v.norm();
        v.unscale(norm)
    }

    /// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
    /// `diag(R)` pushed into `Q`.
    pub fn unitary(&mut self, n: usize) -> Matrix {
        let qr = self.gaussian(n, n).qr();
        let (q, r) = (qr.q(), qr.r());
        let phases: Vec<C64> = (0..n)
            .map(|i| {
                let d = r[(i, i)];
                if d.norm() > 0.0 {
                    d / d.norm()
                } else {
                    c(1.0, 0.0)
                }
            })
            .collect();
        q * diag(&phases)
    }

    /// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
    pub fn isometry(&mut self, rows: usize, cols: usize) -> Matrix {
        assert!(rows >= cols, "isometry needs rows ≥ cols");
        self.unitary(rows).columns(0, cols).into_owned()
    }

    pub fn hermitian(&mut self, n: usize) -> Matrix {
        let g = self.gaussian(n, n);
        (&g + g.adjoint()).scale(0.5)
    }

    /// `G*G` for a square Gaussian `G`.
    pub fn psd(&mut self, n: usize) -> Matrix {
        let g = self.gaussian(n, n);
        g.adjoint() * g
    }

    /// `U D U*` with `D` a complex Gaussian diagonal.
    pub fn normal_matrix(&mut self, n: usize) -> Matrix {
        let u = self.unitary(n);
        let d: Vec<C64> = (0..n).map(|_| self.complex()).collect();
        &u * diag(&d) * u.adjoint()
    }

    /// Commuting normal pair `(U D₁ U*, U D₂ U*)` sharing one unitary.
    pub fn normal_commuting_pair(&mut self, n: usize) -> (Matrix, Matrix) {
        let u = self.unitary(n);
        let d1: Vec<C64> = (0..n).map(|_| self.complex()).collect();
        let d2: Vec<C64> = (0..n).map(|_| self.complex()).collect();
        let ud = u.adjoint();
        (&u * diag(&d1) * &ud, &u * diag(&d2) * &ud)
    }

    /// A contraction: Gaussian matrix rescaled to a uniform norm in `[0, 1]`.
    pub fn contraction(&mut self, n: usize) -> Matrix {
        let g = self.gaussian(n, n);
        let norm = super::op_norm(&g).unwrap_or(1.0);
        let target = self.uniform(0.0, 1.0);
        g.scale(target / norm)
    }
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(dim_err!("random matrix size must be ≥ 1"));
    }
    Ok(())
}

pub fn random_unitary(n: usize, seed: u64) -> Result<Matrix> {
    require_positive(n)?;
    Ok(Sampler::new(seed).unitary(n))
}

pub fn random_hermitian(n: usize, seed: u64) -> Result<Matrix> {
    require_positive(n)?;
    Ok(Sampler::new(seed).hermitian(n))
}

pub fn random_psd(n: usize, seed: u64) -> Result<Matrix> {
    require_positive(n)?;
    Ok(Sampler::new(seed).psd(n))
}

pub fn random_normal_commuting_pair(n: usize, seed: u64) -> Result<(Matrix, Matrix)> {
    require_positive(n)?;
    Ok(Sampler::new(seed).normal_commuting_pair(n))
}
