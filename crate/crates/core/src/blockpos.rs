//! Block-matrix positivity.
//!
//! Executable forms of the 2×2 operator-matrix facts the main inequality is
//! built from: the Cauchy–Schwarz pairing for `(P R; R* Q) ⪰ 0`, the
//! Schur-complement criterion, Choi's lemma for positive maps, and the
//! 4×4 block matrix assembled from two unitaries.

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::matcore::{
    block_assemble, hermitian_part, identity, op_norm, psd_margin, singular_values, Matrix,
    Sampler, Tolerance,
};
use crate::posmaps::MapRep;

/// `A = (P R; R* Q)` with `P: p×p`, `Q: q×q`, `R: p×q`.
#[derive(Debug, Clone)]
pub struct Block2x2 {
    pub p: Matrix,
    pub q: Matrix,
    pub r: Matrix,
}

impl Block2x2 {
    pub fn new(p: Matrix, q: Matrix, r: Matrix) -> Result<Self> {
        if !p.is_square() || !q.is_square() || r.shape() != (p.nrows(), q.nrows()) {
            return Err(dim_err!(
                "block shapes P {:?}, Q {:?}, R {:?} do not fit (P R; R* Q)",
                p.shape(),
                q.shape(),
                r.shape()
            ));
        }
        Ok(Self { p, q, r })
    }

    pub fn assemble(&self) -> Matrix {
        block_assemble(&[
            vec![self.p.clone(), self.r.clone()],
            vec![self.r.adjoint(), self.q.clone()],
        ])
        .expect("shapes validated in new")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block2x2Report {
    pub block_psd: bool,
    pub pairing_ok: bool,
    pub norm_ok: bool,
}

/// Checks `A ⪰ 0`, the sampled pairing `|⟨Rx,y⟩|² ≤ ⟨Px,x⟩⟨Qy,y⟩`, and
/// `‖R‖² ≤ ‖P‖‖Q‖`. When `block_psd` holds the other two must hold as well.
pub fn lemma_2x2_check(blk: &Block2x2, tol: &Tolerance, trials: usize, seed: u64) -> Result<Block2x2Report> {
    let a = blk.assemble();
    let block_psd = psd_margin(&a, tol)? >= -tol.psd_tol;
    let (pn, qn, rn) = (op_norm(&blk.p)?, op_norm(&blk.q)?, op_norm(&blk.r)?);
    let slack = tol.psd_tol * (pn * qn).max(1.0);
    let norm_ok = rn * rn <= pn * qn + slack;

    let mut s = Sampler::new(seed);
    let (p_dim, q_dim) = (blk.p.nrows(), blk.q.nrows());
    let pairing_ok = (0..trials).all(|_| {
        let x = s.unit_vector(q_dim);
        let y = s.unit_vector(p_dim);
        let rxy = (y.adjoint() * &blk.r * &x)[(0, 0)].norm_sqr();
        let pyy = (y.adjoint() * &blk.p * &y)[(0, 0)].re;
        let qxx = (x.adjoint() * &blk.q * &x)[(0, 0)].re;
        rxy <= pyy * qxx + slack
    });
    Ok(Block2x2Report {
        block_psd,
        pairing_ok,
        norm_ok,
    })
}

/// `A = (T S; S* R)` with `R` invertible.
#[derive(Debug, Clone)]
pub struct SchurTriple {
    pub t: Matrix,
    pub s: Matrix,
    pub r: Matrix,
}

impl SchurTriple {
    pub fn new(t: Matrix, s: Matrix, r: Matrix) -> Result<Self> {
        if !t.is_square() || !r.is_square() || s.shape() != (t.nrows(), r.nrows()) {
            return Err(dim_err!(
                "block shapes T {:?}, S {:?}, R {:?} do not fit (T S; S* R)",
                t.shape(),
                s.shape(),
                r.shape()
            ));
        }
        Ok(Self { t, s, r })
    }

    pub fn assemble(&self) -> Matrix {
        block_assemble(&[
            vec![self.t.clone(), self.s.clone()],
            vec![self.s.adjoint(), self.r.clone()],
        ])
        .expect("shapes validated in new")
    }

    /// `T − S R⁻¹ S*`, Hermitian part.
    pub fn complement(&self) -> Result<Matrix> {
        let smallest = *singular_values(&self.r)?.last().expect("nonempty");
        if smallest <= 1e-12 {
            return Err(Error::Precondition(format!(
                "R must be invertible (smallest singular value {smallest:.3e})"
            )));
        }
        let r_inv = self
            .r
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Precondition("R is singular".into()))?;
        Ok(hermitian_part(&(&self.t - &self.s * r_inv * self.s.adjoint())))
    }
}

/// Both routes of the Schur-complement criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    /// `T ⪰ 0 ∧ R ⪰ 0 ∧ T − S R⁻¹ S* ⪰ 0`.
    pub schur_psd: bool,
    /// `(T S; S* R) ⪰ 0` by direct eigencheck.
    pub block_psd: bool,
    /// Smallest distance of any of the tested minimum eigenvalues (relative)
    /// from zero; verdicts are only expected to agree when this is not tiny.
    pub margin: f64,
}

impl SchurReport {
    pub fn agrees(&self) -> bool {
        self.schur_psd == self.block_psd
    }
}

/// Computes both sides of the equivalence `A ⪰ 0 ⇔ T, R ⪰ 0 ∧ T ⪰ S R⁻¹ S*`.
pub fn schur_check(triple: &SchurTriple, tol: &Tolerance) -> Result<SchurReport> {
    let comp = triple.complement()?;
    let margins = [
        psd_margin(&hermitian_part(&triple.t), tol)?,
        psd_margin(&hermitian_part(&triple.r), tol)?,
        psd_margin(&comp, tol)?,
    ];
    let schur_psd = margins.iter().all(|&m| m >= -tol.psd_tol);
    let block_margin = psd_margin(&hermitian_part(&triple.assemble()), tol)?;
    let block_psd = block_margin >= -tol.psd_tol;
    let margin = margins
        .iter()
        .chain(std::iter::once(&block_margin))
        .fold(f64::INFINITY, |m, v| m.min(v.abs()));
    Ok(SchurReport {
        schur_psd,
        block_psd,
        margin,
    })
}

/// Schur-complement positivity verdict. Errors with a contract violation if
/// the direct block eigencheck disagrees away from the PSD boundary.
pub fn schur_positivity(triple: &SchurTriple, tol: &Tolerance) -> Result<bool> {
    let report = schur_check(triple, tol)?;
    if !report.agrees() && report.margin > 1e-6 {
        return Err(Error::Contract(format!(
            "Schur verdict {} disagrees with block verdict {} (margin {:.3e})",
            report.schur_psd, report.block_psd, report.margin
        )));
    }
    Ok(report.schur_psd)
}

/// The `4n × 4n` matrix
///
/// ```text
/// ( a*a      a*b      a*    a*(a*b) )
/// ( b*a      b*b      b*    b*(a*b) )
/// ( a        b        a*a   a*b     )
/// ( (b*a)a   (b*a)b   b*a   b*b     )
/// ```
///
/// which is positive whenever `a` and `b` are unitary.
pub fn prop24_block(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(dim_err!("need equal square a, b; got {:?} and {:?}", a.shape(), b.shape()));
    }
    let (ad, bd) = (a.adjoint(), b.adjoint());
    let ada = &ad * a;
    let adb = &ad * b;
    let bda = &bd * a;
    let bdb = &bd * b;
    block_assemble(&[
        vec![ada.clone(), adb.clone(), ad.clone(), &ad * &adb],
        vec![bda.clone(), bdb.clone(), bd.clone(), &bd * &adb],
        vec![a.clone(), b.clone(), ada, adb],
        vec![&bda * a, &bda * b, bda, bdb],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoiReport {
    /// `(x y; y* x) ⪰ 0`.
    pub premise: bool,
    /// `(φ(x) φ(y); φ(y*) φ(x)) ⪰ 0`.
    pub conclusion: bool,
    /// Minimum eigenvalue of the conclusion block.
    pub conclusion_min_eig: f64,
}

pub fn choi_lemma_verify(phi: &MapRep, x: &Matrix, y: &Matrix, tol: &Tolerance) -> Result<ChoiReport> {
    let n = phi.dim_in();
    if x.shape() != (n, n) || y.shape() != (n, n) {
        return Err(dim_err!(
            "x, y must be {n}×{n}, got {:?} and {:?}",
            x.shape(),
            y.shape()
        ));
    }
    let premise_block = block_assemble(&[vec![x.clone(), y.clone()], vec![y.adjoint(), x.clone()]])?;
    let premise = psd_margin(&hermitian_part(&premise_block), tol)? >= -tol.psd_tol;
    let (px, py, pys) = (phi.apply(x)?, phi.apply(y)?, phi.apply(&y.adjoint())?);
    let conclusion_block = hermitian_part(&block_assemble(&[vec![px.clone(), py], vec![pys, px]])?);
    let eigs = crate::matcore::eigvalsh(&conclusion_block, tol)?;
    let norm = eigs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(ChoiReport {
        premise,
        conclusion: eigs[0] / norm.max(1.0) >= -tol.psd_tol,
        conclusion_min_eig: eigs[0],
    })
}

/// A pair with `(x y; y* x) ⪰ 0` by construction: `x` random PSD and
/// `y = x^{1/2} C x^{1/2}` for a random contraction `C`.
pub fn premise_true_pair(n: usize, sampler: &mut Sampler) -> Result<(Matrix, Matrix)> {
    let x = sampler.psd(n);
    let root = crate::matcore::psd_sqrt(&x, &Tolerance::default())?;
    let contraction = sampler.contraction(n);
    let y = &root * contraction * &root;
    Ok((x, y))
}

/// A random triple with invertible `R`, roughly half of them PSD: a Gram
/// matrix shifted down by a random multiple of the identity.
pub fn random_schur_triple(t_dim: usize, r_dim: usize, sampler: &mut Sampler) -> Result<SchurTriple> {
    let d = t_dim + r_dim;
    let g = sampler.gaussian(d, d);
    let gram = g.adjoint() * &g;
    let smallest = crate::matcore::min_eig_herm(&hermitian_part(&gram))?;
    let shift = smallest * sampler.uniform(0.0, 2.0);
    let a = hermitian_part(&(gram - identity(d).scale(shift)));
    SchurTriple::new(
        a.view((0, 0), (t_dim, t_dim)).into_owned(),
        a.view((0, t_dim), (t_dim, r_dim)).into_owned(),
        a.view((t_dim, t_dim), (r_dim, r_dim)).into_owned(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{is_psd, min_eig_herm, real_diag, Sampler};
    use crate::posmaps::{reduction_map, transpose_map};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn block_2x2_examples() {
        let i2 = identity(2);
        let all = lemma_2x2_check(&Block2x2::new(i2.clone(), i2.clone(), i2.clone()).unwrap(), &tol(), 50, 1).unwrap();
        assert_eq!(all, Block2x2Report { block_psd: true, pairing_ok: true, norm_ok: true });

        let big_r = Block2x2::new(i2.clone(), i2.clone(), i2.scale(2.0)).unwrap();
        let rep = lemma_2x2_check(&big_r, &tol(), 50, 1).unwrap();
        assert!(!rep.block_psd && !rep.norm_ok);

        assert!(Block2x2::new(identity(2), identity(3), identity(2)).is_err());
    }

    #[test]
    fn gram_blocks_pass_all_checks() {
        let mut s = Sampler::new(17);
        for _ in 0..20 {
            let (p, q) = (2, 3);
            let g = s.gaussian(2 * p, p + q);
            let a = g.adjoint() * g;
            // Oracle: direct eigencheck of the Gram matrix.
            assert!(min_eig_herm(&hermitian_part(&a)).unwrap() > -1e-10);
            let blk = Block2x2::new(
                a.view((0, 0), (p, p)).into_owned(),
                a.view((p, p), (q, q)).into_owned(),
                a.view((0, p), (p, q)).into_owned(),
            )
            .unwrap();
            let rep = lemma_2x2_check(&blk, &tol(), 100, 3).unwrap();
            assert!(rep.block_psd && rep.pairing_ok && rep.norm_ok);
        }
    }

    #[test]
    fn schur_examples() {
        let i = identity(2);
        assert!(schur_positivity(&SchurTriple::new(i.clone(), i.clone(), i.clone()).unwrap(), &tol()).unwrap());
        let zero = Matrix::zeros(2, 2);
        assert!(!schur_positivity(&SchurTriple::new(zero.clone(), i.clone(), i.clone()).unwrap(), &tol()).unwrap());
        let singular = SchurTriple::new(i.clone(), i.clone(), zero).unwrap();
        assert!(matches!(schur_positivity(&singular, &tol()), Err(Error::Precondition(_))));
    }

    #[test]
    fn unitary_pair_block_is_schur_positive() {
        // The upper-left 3×3 block is S S* with R = e.
        let mut s = Sampler::new(23);
        for _ in 0..10 {
            let (a, b) = (s.unitary(2), s.unitary(2));
            let big = prop24_block(&a, &b).unwrap();
            let n = 2;
            let triple = SchurTriple::new(
                big.view((0, 0), (3 * n, 3 * n)).into_owned(),
                big.view((0, 3 * n), (3 * n, n)).into_owned(),
                big.view((3 * n, 3 * n), (n, n)).into_owned(),
            )
            .unwrap();
            assert!(schur_positivity(&triple, &tol()).unwrap());
            let ss = &triple.s * triple.s.adjoint();
            assert!(crate::matcore::max_abs_diff(&ss, &triple.t) < 1e-12);
        }
    }

    #[test]
    fn unitary_pair_block_examples() {
        let e = identity(2);
        let big = prop24_block(&e, &e).unwrap();
        let ones = crate::matcore::kron(&Matrix::from_element(4, 4, crate::matcore::c(1.0, 0.0)), &e);
        assert_eq!(big, ones);
        assert!(is_psd(&big, &tol()).unwrap());

        let mut s = Sampler::new(4);
        let (a, b) = (s.unitary(3), s.unitary(3));
        let big = prop24_block(&a, &b).unwrap();
        assert_eq!(big.shape(), (12, 12));
        assert!(min_eig_herm(&hermitian_part(&big)).unwrap() > -1e-10);

        // Non-unitary a: the checker just reports.
        let non_unitary = prop24_block(&real_diag(&[2.0]), &identity(1)).unwrap();
        assert!(!is_psd(&hermitian_part(&non_unitary), &tol()).unwrap());

        assert!(prop24_block(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn choi_check_examples() {
        let theta = transpose_map(2).unwrap();
        let e = identity(2);
        let rep = choi_lemma_verify(&theta, &e, &e, &tol()).unwrap();
        assert!(rep.premise && rep.conclusion);
        let rep = choi_lemma_verify(&theta, &e, &e.scale(2.0), &tol()).unwrap();
        assert!(!rep.premise);
        assert!(choi_lemma_verify(&theta, &identity(3), &e, &tol()).is_err());
    }

    #[test]
    fn premise_true_pairs_give_psd_conclusions() {
        let mut s = Sampler::new(8);
        for phi in [transpose_map(2).unwrap(), reduction_map(2).unwrap()] {
            for _ in 0..200 {
                let (x, y) = premise_true_pair(2, &mut s).unwrap();
                let rep = choi_lemma_verify(&phi, &x, &y, &tol()).unwrap();
                assert!(rep.premise);
                assert!(rep.conclusion, "min eig {}", rep.conclusion_min_eig);
            }
        }
    }

    #[test]
    fn random_triples_agree_away_from_boundary() {
        let mut s = Sampler::new(31);
        let mut seen = [0usize; 2];
        for _ in 0..200 {
            let triple = random_schur_triple(2, 2, &mut s).unwrap();
            let rep = schur_check(&triple, &tol()).unwrap();
            seen[rep.block_psd as usize] += 1;
            if rep.margin > 1e-6 {
                assert!(rep.agrees());
            }
        }
        assert!(seen[0] > 20 && seen[1] > 20, "{seen:?}");
    }
}
