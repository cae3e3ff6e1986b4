//! Searching for violations of k-positivity.
//!
//! `φ` is k-positive iff `⟨v, C v⟩ ≥ 0` for every vector `v ∈ ℂ^n ⊗ ℂ^m` of
//! Schmidt rank at most k, where `C` is the Choi matrix. Writing
//! `v = Σ_t x_t ⊗ y_t`, the objective is a Hermitian quadratic form in the
//! `y`s once the `x`s are fixed and orthonormal (and vice versa), so each
//! half-step is an exact minimum-eigenvector problem of size `k·m` or `k·n`.
//! The search finds violations; it never certifies k-positivity.

use serde::{Deserialize, Serialize};

use super::MapRep;
use crate::error::{Error, Result};
use crate::matcore::{eigh, op_norm, Matrix, Sampler, Tolerance, Vector, C64};

/// A product decomposition `v = Σ_t left_t ⊗ right_t` with `⟨v, C v⟩ = value`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchmidtWitness {
    pub k: usize,
    #[serde(with = "vec_of_vectors")]
    pub left_vectors: Vec<Vector>,
    #[serde(with = "vec_of_vectors")]
    pub right_vectors: Vec<Vector>,
    pub value: f64,
}

impl SchmidtWitness {
    /// `Σ_t left_t ⊗ right_t`.
    pub fn assemble(&self) -> Vector {
        let n = self.left_vectors.first().map_or(0, |v| v.len());
        let m = self.right_vectors.first().map_or(0, |v| v.len());
        let mut v = Vector::zeros(n * m);
        for (x, y) in self.left_vectors.iter().zip(&self.right_vectors) {
            for i in 0..n {
                for a in 0..m {
                    v[i * m + a] += x[i] * y[a];
                }
            }
        }
        v
    }
}

/// `(X, Y)` with columns `x_t`, `y_t`.
struct Factors {
    left: Matrix,
    right: Matrix,
}

/// `L = [x_1 ⊗ I_m, …, x_k ⊗ I_m]`, so that `v = L·vec(y)`.
fn left_lift(left: &Matrix, m: usize) -> Matrix {
    let (n, k) = left.shape();
    let mut l = Matrix::zeros(n * m, k * m);
    for t in 0..k {
        for i in 0..n {
            let xi = left[(i, t)];
            for a in 0..m {
                l[(i * m + a, t * m + a)] = xi;
            }
        }
    }
    l
}

/// `R = [I_n ⊗ y_1, …, I_n ⊗ y_k]`, so that `v = R·vec(x)`.
fn right_lift(right: &Matrix, n: usize) -> Matrix {
    let (m, k) = right.shape();
    let mut r = Matrix::zeros(n * m, k * n);
    for t in 0..k {
        for i in 0..n {
            for a in 0..m {
                r[(i * m + a, t * n + i)] = right[(a, t)];
            }
        }
    }
    r
}

/// Minimum eigenpair of `lift* C lift`, with the eigenvector split into `k` columns.
fn solve_half(choi: &Matrix, lift: &Matrix, k: usize, len: usize) -> Result<(f64, Matrix)> {
    let h = lift.adjoint() * choi * lift;
    let h = (&h + h.adjoint()).scale(0.5);
    let eig = eigh(&h, &Tolerance::default())?;
    let vec = eig.vectors.column(0);
    Ok((eig.values[0], Matrix::from_fn(len, k, |a, t| vec[t * len + a])))
}

/// Moves the triangular factor of `thin_qr(B)` onto the partner matrix so the
/// product `A·Bᵀ` is unchanged and `B` gets orthonormal columns.
fn orthonormalize(b: &Matrix, partner: &Matrix) -> (Matrix, Matrix) {
    let qr = b.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    (q, partner * r.transpose())
}

fn one_restart(phi: &MapRep, k: usize, iters: usize, sampler: &mut Sampler) -> Result<(f64, Factors)> {
    let (n, m) = (phi.dim_in(), phi.dim_out());
    let choi = phi.choi();
    let left = sampler.gaussian(n, k).qr().q();
    let mut f = Factors {
        left,
        right: Matrix::zeros(m, k),
    };
    let mut best = f64::INFINITY;
    for _ in 0..iters.max(1) {
        let (_, right) = solve_half(choi, &left_lift(&f.left, m), k, m)?;
        f.right = right;
        let (right, left) = orthonormalize(&f.right, &f.left);
        f.right = right;
        f.left = left;

        let (value, left) = solve_half(choi, &right_lift(&f.right, n), k, n)?;
        f.left = left;
        let (left, right) = orthonormalize(&f.left, &f.right);
        f.left = left;
        f.right = right;

        let improved = best - value;
        best = best.min(value);
        if improved.abs() <= 1e-14 * (1.0 + value.abs()) {
            break;
        }
    }
    Ok((best, f))
}

fn quadratic_form(choi: &Matrix, v: &Vector) -> f64 {
    (v.adjoint() * choi * v)[(0, 0)].re
}

/// Minimizes `⟨v, C v⟩` over unit vectors of Schmidt rank ≤ k and returns the
/// best product decomposition found. Restart `t` uses seed `seed + t`.
pub fn schmidt_minimize(
    phi: &MapRep,
    k: usize,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<SchmidtWitness> {
    if k == 0 {
        return Err(Error::Domain("Schmidt rank bound k must be ≥ 1".into()));
    }
    let k = k.min(phi.dim_in()).min(phi.dim_out());
    let mut best: Option<(f64, Factors)> = None;
    for t in 0..restarts.max(1) {
        let mut sampler = Sampler::new(seed.wrapping_add(t as u64));
        let (value, f) = one_restart(phi, k, iters, &mut sampler)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, f));
        }
    }
    let (_, f) = best.expect("at least one restart");
    let mut witness = SchmidtWitness {
        k,
        left_vectors: f.left.column_iter().map(|c| c.into_owned()).collect(),
        right_vectors: f.right.column_iter().map(|c| c.into_owned()).collect(),
        value: 0.0,
    };
    let v = witness.assemble();
    let norm = v.norm();
    for x in &mut witness.left_vectors {
        *x /= C64::new(norm, 0.0);
    }
    witness.value = quadratic_form(phi.choi(), &witness.assemble());
    Ok(witness)
}

/// Searches for a Schmidt-rank-≤k vector with `⟨v, C v⟩ < −psd_tol·max(1, ‖C‖)`.
/// `None` is evidence of k-positivity, not a proof. `k` is clamped to
/// `min(n, m)`, where the search becomes an exact CP test.
pub fn k_positivity_falsify(
    phi: &MapRep,
    k: usize,
    restarts: usize,
    iters: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Option<SchmidtWitness>> {
    let witness = schmidt_minimize(phi, k, restarts, iters, seed)?;
    let threshold = tol.psd_tol * op_norm(phi.choi())?.max(1.0);
    Ok((witness.value < -threshold).then_some(witness))
}

mod vec_of_vectors {
    use super::{Vector, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vector], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<[f64; 2]>> = v
            .iter()
            .map(|x| x.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vector>, D::Error> {
        let raw: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|x| Vector::from_iterator(x.len(), x.into_iter().map(|[re, im]| C64::new(re, im))))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{eigvalsh, min_eig_herm};
    use crate::posmaps::{identity_map, random_unital_cp, reduction_map, transpose_map};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn transpose_has_rank_two_witness() {
        let theta = transpose_map(2).unwrap();
        // Oracle: the Choi matrix of the transpose is the swap, spectrum {−1, 1, 1, 1}.
        let spectrum = eigvalsh(theta.choi(), &tol()).unwrap();
        assert!((spectrum[0] + 1.0).abs() < 1e-12 && (spectrum[1] - 1.0).abs() < 1e-12);

        let w = k_positivity_falsify(&theta, 2, 32, 200, 1, &tol()).unwrap().unwrap();
        assert_eq!(w.k, 2);
        assert!((w.value - spectrum[0]).abs() < 1e-8);
        let v = w.assemble();
        assert!((v.norm() - 1.0).abs() < 1e-10);
        assert!((quadratic_form(theta.choi(), &v) - w.value).abs() < 1e-10);
    }

    #[test]
    fn transpose_is_positive() {
        let theta = transpose_map(2).unwrap();
        assert!(k_positivity_falsify(&theta, 1, 32, 200, 1, &tol()).unwrap().is_none());
        let w = schmidt_minimize(&theta, 1, 8, 200, 1).unwrap();
        assert!(w.value > -1e-10);
    }

    #[test]
    fn identity_has_no_witness() {
        for k in 1..=3 {
            assert!(k_positivity_falsify(&identity_map(3).unwrap(), k, 8, 100, 3, &tol())
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn reduction_map_resists_rank_two_search() {
        let phi = reduction_map(3).unwrap();
        assert!(k_positivity_falsify(&phi, 2, 32, 200, 11, &tol()).unwrap().is_none());
        // The full-rank search is the exact CP test and does find a violation.
        let w = k_positivity_falsify(&phi, 3, 8, 200, 11, &tol()).unwrap().unwrap();
        assert!((w.value - min_eig_herm(phi.choi()).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn k_is_clamped_and_zero_rejected() {
        let theta = transpose_map(2).unwrap();
        let w = schmidt_minimize(&theta, 7, 2, 50, 0).unwrap();
        assert_eq!(w.k, 2);
        assert!(matches!(schmidt_minimize(&theta, 0, 2, 50, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn witnesses_replay_independently() {
        for seed in 0..10 {
            let cp = random_unital_cp(3, 2, seed).unwrap();
            let phi = cp.then(&transpose_map(3).unwrap()).unwrap();
            if let Some(w) = k_positivity_falsify(&phi, 2, 4, 100, seed, &tol()).unwrap() {
                let mut v = Vector::zeros(9);
                for (x, y) in w.left_vectors.iter().zip(&w.right_vectors) {
                    v += crate::matcore::kron(&Matrix::from_column_slice(3, 1, x.as_slice()),
                                              &Matrix::from_column_slice(3, 1, y.as_slice()))
                        .column(0);
                }
                let replay = (v.adjoint() * phi.choi() * &v)[(0, 0)].re;
                assert!((replay - w.value).abs() < 1e-10);
                assert!(w.value < -tol().psd_tol);
            }
        }
    }
}
