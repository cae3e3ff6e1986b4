//! Randomized verification suites, one [`SuiteReport`] each.
//!
//! Every suite is deterministic in `(trials, seed)`. Trial `t` of a suite
//! draws from its own sampler seeded by `seed + t`, so a failing trial can be
//! replayed alone.

use crate::blockpos::{
    choi_lemma_verify, lemma_2x2_check, premise_true_pair, prop24_block, random_schur_triple,
    schur_check, Block2x2,
};
use crate::dilation::{decomposition_unitarity, russo_dye_decompose, stinespring};
use crate::error::Result;
use crate::gruss::{
    normal_self_sides, fuglede_putnam_check, gruss_suite, unitary_pair_sides, theorem31_suite,
    PairKind, SuiteReport,
};
use crate::matcore::{c, is_psd, max_abs_diff, op_norm, psd_margin, Sampler, Tolerance};
use crate::posmaps::{random_unital_cp, reduction_map, transpose_map, MapRep};

fn trial_sampler(seed: u64, t: usize) -> Sampler {
    Sampler::new(seed.wrapping_add(t as u64))
}

/// The 2-positive maps the bound is exercised on: `reduction_map(3)` and
/// `random_unital_cp(n, r)` for `n ∈ {2,3,4}`, `r ∈ {1,2,3}`.
pub fn two_positive_family(seed: u64) -> Result<Vec<(String, MapRep)>> {
    let mut maps = vec![("reduction_map(3)".to_string(), reduction_map(3)?)];
    for n in 2..=4 {
        for r in 1..=3 {
            let map_seed = seed.wrapping_add(1000 * n as u64 + r as u64);
            maps.push((format!("random_unital_cp({n},{r})"), random_unital_cp(n, r, map_seed)?));
        }
    }
    Ok(maps)
}

/// Grüss bound on arbitrary pairs for each map in [`two_positive_family`].
pub fn gruss_bound_suites(trials: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    two_positive_family(seed)?
        .iter()
        .map(|(name, phi)| gruss_suite(&format!("grüss bound, {name}"), phi, PairKind::Arbitrary, trials, seed))
        .collect()
}

fn unitary_pair_run(name: &str, phi: &MapRep, trials: usize, seed: u64, tol: f64, contractual: bool) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(name, contractual);
    let n = phi.dim_in();
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let (u, v) = (s.unitary(n), s.unitary(n));
        let sides = unitary_pair_sides(phi, &u, &v)?;
        rep.record(sides.lhs <= sides.rhs + tol, sides.rhs - sides.lhs);
    }
    Ok(rep)
}

/// The squared unitary-pair inequality for each 2-positive map.
pub fn unitary_pair_suites(trials: usize, seed: u64, tol: f64) -> Result<Vec<SuiteReport>> {
    two_positive_family(seed)?
        .iter()
        .map(|(name, phi)| unitary_pair_run(&format!("unitary pairs, {name}"), phi, trials, seed, tol, true))
        .collect()
}

/// The same inequality for the transpose map; failures are expected and
/// only counted.
pub fn unitary_pair_transpose_diagnostic(trials: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    unitary_pair_run("unitary pairs, transpose_map(3) (diagnostic)", &transpose_map(3)?, trials, seed, tol, false)
}

/// The unitary-pair block is PSD.
pub fn unitary_block_suite(trials: usize, seed: u64, tol: &Tolerance) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("unitary-pair block positivity", true);
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let n = 2 + t % 3;
        let block = prop24_block(&s.unitary(n), &s.unitary(n))?;
        rep.record(is_psd(&block, tol)?, psd_margin(&block, tol)?);
    }
    Ok(rep)
}

/// Commuting normal pairs under the (positive, not 2-positive) transpose.
pub fn commuting_normal_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = theorem31_suite(&transpose_map(3)?, trials, seed)?;
    rep.name = "commuting normal pairs, transpose_map(3)".into();
    Ok(rep)
}

/// Arbitrary pairs under a CP map.
pub fn cp_arbitrary_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    gruss_suite(
        "arbitrary pairs, random_unital_cp(3,2)",
        &random_unital_cp(3, 2, seed)?,
        PairKind::Arbitrary,
        trials,
        seed,
    )
}

/// `‖φ(aa*) − φ(a)φ(a)*‖ ≤ r(a)²` for random normal `a` under the transpose.
pub fn normal_self_suite(trials: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    let phi = transpose_map(3)?;
    let mut rep = SuiteReport::new("normal a, transpose_map(3)", true);
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let a = if t % 2 == 0 { s.unitary(3) } else { s.normal_matrix(3) };
        let sides = normal_self_sides(&phi, &a)?;
        rep.record(sides.lhs <= sides.rhs + tol, sides.rhs - sides.lhs);
    }
    Ok(rep)
}

pub fn fuglede_putnam_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("commuting normal x: x*y = yx*", true);
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let (x, y) = s.normal_commuting_pair(2 + t % 4);
        let ok = fuglede_putnam_check(&x, &y, 1e-12)?;
        let xd = x.adjoint();
        rep.record(ok, -op_norm(&(&xd * &y - &y * &xd))?);
    }
    Ok(rep)
}

/// Direct block verdict against the Schur-complement verdict, skipping
/// triples within `1e-6` of the PSD boundary.
pub fn schur_suite(trials: usize, seed: u64, tol: &Tolerance) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("Schur complement equivalence", true);
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let triple = random_schur_triple(1 + t % 3, 1 + (t / 3) % 3, &mut s)?;
        let r = schur_check(&triple, tol)?;
        if r.margin <= 1e-6 {
            continue;
        }
        rep.record(r.agrees(), r.margin);
    }
    Ok(rep)
}

/// Gram-built PSD 2×2 blocks satisfy the pairing and norm inequalities.
pub fn block_2x2_suite(trials: usize, seed: u64, tol: &Tolerance) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("PSD 2×2 blocks: pairing and norm", true);
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let (p_dim, q_dim) = (1 + t % 3, 1 + (t / 3) % 3);
        let g = s.gaussian(p_dim + q_dim + 1, p_dim + q_dim);
        let gram = g.adjoint() * &g;
        let blk = Block2x2::new(
            gram.view((0, 0), (p_dim, p_dim)).into_owned(),
            gram.view((p_dim, p_dim), (q_dim, q_dim)).into_owned(),
            gram.view((0, p_dim), (p_dim, q_dim)).into_owned(),
        )?;
        let r = lemma_2x2_check(&blk, tol, 20, seed.wrapping_add(t as u64))?;
        rep.record(r.block_psd && r.pairing_ok && r.norm_ok, 0.0);
    }
    Ok(rep)
}

/// Premise-true pairs give a PSD conclusion block; the margin is the
/// conclusion's minimum eigenvalue.
pub fn choi_suites(trials: usize, seed: u64, tol: &Tolerance) -> Result<Vec<SuiteReport>> {
    let maps = [("transpose_map(3)", transpose_map(3)?), ("reduction_map(3)", reduction_map(3)?)];
    maps.iter()
        .map(|(name, phi)| {
            let mut rep = SuiteReport::new(format!("positive map on (x y; y* x), {name}"), true);
            for t in 0..trials {
                let mut s = trial_sampler(seed, t);
                let (x, y) = premise_true_pair(phi.dim_in(), &mut s)?;
                let r = choi_lemma_verify(phi, &x, &y, tol)?;
                rep.record(r.premise && r.conclusion_min_eig >= -1e-8, r.conclusion_min_eig);
            }
            Ok(rep)
        })
        .collect()
}

/// Isometry and reconstruction for dilations of random unital CP maps; the
/// margin is `−max(‖v*v − I‖, reconstruction error)`.
pub fn stinespring_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("Stinespring isometry and reconstruction", true);
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let (n, r) = (2 + t % 3, 1 + (t / 3) % 3);
        let phi = random_unital_cp(n, r, seed.wrapping_add(t as u64))?;
        let d = stinespring(&phi)?;
        let mut worst = d.isometry_defect()?;
        for _ in 0..20 {
            let x = s.gaussian(n, n);
            worst = worst.max(max_abs_diff(&d.compress(&x)?, &phi.apply(&x)?));
        }
        rep.record(worst <= 1e-10, -worst);
    }
    Ok(rep)
}

/// Two-unitary decompositions at norms 0.1, 1 and 10, plus the zero matrix.
pub fn russo_dye_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("two-unitary decomposition", true);
    let check = |a: &crate::matcore::Matrix, rep: &mut SuiteReport| -> Result<()> {
        let dec = russo_dye_decompose(a)?;
        let worst = decomposition_unitarity(&dec)?.max(max_abs_diff(&dec.reconstruct(), a));
        rep.record(worst <= 1e-10, -worst);
        Ok(())
    };
    for t in 0..trials {
        let mut s = trial_sampler(seed, t);
        let n = 1 + t % 5;
        let g = s.gaussian(n, n);
        let norm = [0.1, 1.0, 10.0][t % 3];
        check(&(&g * c(norm / op_norm(&g)?, 0.0)), &mut rep)?;
    }
    check(&crate::matcore::Matrix::zeros(3, 3), &mut rep)?;
    Ok(rep)
}

/// Every suite at the given size. Relative sizes follow the acceptance
/// budget: the Grüss-bound suites use `trials` pairs per map, the rest are
/// scaled down.
pub fn run_all(trials: usize, seed: u64, tol: &Tolerance) -> Result<Vec<SuiteReport>> {
    let small = trials.div_ceil(5).max(1);
    let tiny = trials.div_ceil(20).max(1);
    let mut out = gruss_bound_suites(trials, seed)?;
    out.extend(unitary_pair_suites(small, seed, tol.psd_tol)?);
    out.push(unitary_pair_transpose_diagnostic(small, seed, tol.psd_tol)?);
    out.push(unitary_block_suite(small, seed, tol)?);
    out.push(commuting_normal_suite(small * 5 / 2, seed)?);
    out.push(cp_arbitrary_suite(small * 5 / 2, seed)?);
    out.push(normal_self_suite(small, seed, tol.psd_tol)?);
    out.push(fuglede_putnam_suite(small, seed)?);
    out.push(schur_suite(small, seed, tol)?);
    out.push(block_2x2_suite(small, seed, tol)?);
    out.extend(choi_suites(small, seed, tol)?);
    out.push(stinespring_suite(tiny, seed)?);
    out.push(russo_dye_suite(small / 2 + 1, seed)?);
    Ok(out)
}
