//! Distance from an operator to the scalars, `inf_λ ‖a − λI‖`.
//!
//! For normal `a` this is the radius of the smallest disk containing the
//! spectrum. Otherwise `f(λ) = ‖a − λI‖` is minimized directly; it is convex
//! and 1-Lipschitz on `ℂ ≅ ℝ²` but not differentiable where the top singular
//! value is repeated.

use super::disk::{smallest_enclosing_disk, Disk};
use crate::error::{dim_err, Result};
use crate::matcore::{c, eigenvalues, identity, normality_defect, op_norm, trace, Matrix, Tolerance, C64};

/// Relative threshold `‖a*a − aa*‖ ≤ 1e-10·‖a‖²` for routing through the spectrum.
pub const NORMALITY_TOL: f64 = 1e-10;

/// `‖a − λI‖` together with a subgradient in `(Re λ, Im λ)` coordinates.
///
/// With `(σ, v)` the top eigenpair of `(a − λ)*(a − λ)` and `u = (a − λ)v/σ`,
/// `dσ = −Re(dλ · u*v)`.
fn value_and_subgradient(a: &Matrix, lambda: C64) -> (f64, [f64; 2]) {
    let n = a.nrows();
    let shifted = a - identity(n) * lambda;
    let gram = shifted.adjoint() * &shifted;
    let eig = ((&gram + gram.adjoint()) * c(0.5, 0.0)).symmetric_eigen();
    let (top, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty");
    let sigma = val.max(0.0).sqrt();
    if sigma == 0.0 {
        return (0.0, [0.0, 0.0]);
    }
    let v = eig.eigenvectors.column(top);
    let w = (v.adjoint() * &shifted * v)[(0, 0)].conj() / sigma;
    (sigma, [-w.re, w.im])
}

fn value(a: &Matrix, lambda: C64) -> f64 {
    op_norm(&(a - identity(a.nrows()) * lambda)).expect("nonempty")
}

/// Ellipsoid cutting-plane minimization of `‖a − λI‖`.
///
/// Starts from the disk `|λ − tr(a)/n| ≤ 2 f(tr(a)/n)`, which contains every
/// minimizer, and stops once the certified gap `f(best) − lower bound` drops
/// below `tol`. Each cut also yields `f(λ*) ≥ f(λ_k) − √(gᵀPg)`.
pub fn minimize_distance_ellipsoid(a: &Matrix, tol: f64) -> Disk {
    let n = a.nrows();
    let seed = trace(a) / n as f64;
    let (f0, _) = value_and_subgradient(a, seed);
    let r0 = 2.0 * f0;
    let mut x = [seed.re, seed.im];
    // P is symmetric 2×2, stored as [p11, p12, p22].
    let mut p = [r0 * r0, 0.0, r0 * r0];
    let mut best = Disk {
        center: seed,
        radius: f0,
    };
    let mut lower = 0.0f64;
    for _ in 0..5000 {
        let lam = C64::new(x[0], x[1]);
        let (f, g) = value_and_subgradient(a, lam);
        if f < best.radius {
            best = Disk {
                center: lam,
                radius: f,
            };
        }
        let pg = [p[0] * g[0] + p[1] * g[1], p[1] * g[0] + p[2] * g[1]];
        let gpg = g[0] * pg[0] + g[1] * pg[1];
        if gpg <= 0.0 {
            break;
        }
        let width = gpg.sqrt();
        lower = lower.max(f - width);
        if best.radius - lower <= tol {
            break;
        }
        let step = [pg[0] / width, pg[1] / width];
        x = [x[0] - step[0] / 3.0, x[1] - step[1] / 3.0];
        let k = 4.0 / 3.0;
        p = [
            k * (p[0] - 2.0 / 3.0 * step[0] * step[0]),
            k * (p[1] - 2.0 / 3.0 * step[0] * step[1]),
            k * (p[2] - 2.0 / 3.0 * step[1] * step[1]),
        ];
    }
    // Report the SVD value at the chosen centre.
    best.radius = value(a, best.center);
    best
}

/// Adaptive grid refinement of `‖a − λI‖`: a 33×33 grid over the square of
/// half-width `2‖a‖` around `tr(a)/n`, shrunk 4× around the argmin until the
/// cell size falls below `tol`.
pub fn minimize_distance_grid(a: &Matrix, tol: f64) -> Disk {
    const POINTS: usize = 33;
    let n = a.nrows();
    let mut center = trace(a) / n as f64;
    let mut half = 2.0 * value(a, C64::new(0.0, 0.0)).max(f64::MIN_POSITIVE);
    let mut best = Disk {
        center,
        radius: value(a, center),
    };
    loop {
        let cell = 2.0 * half / (POINTS - 1) as f64;
        for i in 0..POINTS {
            for j in 0..POINTS {
                let z = center + C64::new(-half + cell * i as f64, -half + cell * j as f64);
                let f = value(a, z);
                if f < best.radius {
                    best = Disk { center: z, radius: f };
                }
            }
        }
        if cell < tol {
            return best;
        }
        center = best.center;
        half /= 4.0;
    }
}

/// `inf_λ ‖a − λI‖` and a minimizing `λ`.
pub fn chebyshev_radius(a: &Matrix, tol: &Tolerance) -> Result<Disk> {
    if !a.is_square() {
        return Err(dim_err!("Chebyshev radius of a non-square {:?} matrix", a.shape()));
    }
    let norm = op_norm(a)?;
    if norm == 0.0 {
        return Ok(Disk::point(C64::new(0.0, 0.0)));
    }
    if normality_defect(a)? <= NORMALITY_TOL * norm * norm {
        return smallest_enclosing_disk(&eigenvalues(a)?);
    }
    Ok(minimize_distance_ellipsoid(a, tol.solve_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{real_matrix, Sampler};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    /// Dense grid over `[−1, 1]²` refined three times around the best point.
    fn grid_oracle(a: &Matrix, center: C64, mut half: f64) -> f64 {
        let mut best = (center, value(a, center));
        for _ in 0..4 {
            let steps = 200;
            let mid = best.0;
            for i in 0..=steps {
                for j in 0..=steps {
                    let z = mid + C64::new(-half + 2.0 * half * i as f64 / steps as f64,
                                           -half + 2.0 * half * j as f64 / steps as f64);
                    let f = value(a, z);
                    if f < best.1 {
                        best = (z, f);
                    }
                }
            }
            half *= 8.0 / steps as f64;
        }
        best.1
    }

    #[test]
    fn example_a_has_radius_sqrt10() {
        let a = real_matrix(2, 2, &[1.0, 3.0, 3.0, 3.0]);
        let d = chebyshev_radius(&a, &tol()).unwrap();
        assert!((d.radius - 10f64.sqrt()).abs() < 1e-9);
        assert!((d.center - c(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn scalar_matrix_has_zero_radius() {
        let lam = c(1.5, -0.25);
        let d = chebyshev_radius(&(identity(3) * lam), &tol()).unwrap();
        assert!(d.radius < 1e-12);
        assert!((d.center - lam).norm() < 1e-12);
        let zero = chebyshev_radius(&Matrix::zeros(2, 2), &tol()).unwrap();
        assert_eq!(zero.radius, 0.0);
    }

    #[test]
    fn jordan_block_matches_grid() {
        let j = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let oracle = grid_oracle(&j, c(0.0, 0.0), 1.0);
        let d = chebyshev_radius(&j, &tol()).unwrap();
        assert!((d.radius - oracle).abs() < 1e-6);
        assert!((d.radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ellipsoid_and_grid_agree() {
        let mut s = Sampler::new(12);
        for n in 2..=4 {
            let a = s.gaussian(n, n);
            let e = minimize_distance_ellipsoid(&a, 1e-10);
            let g = minimize_distance_grid(&a, 1e-9);
            assert!((e.radius - g.radius).abs() < 1e-7, "{} vs {}", e.radius, g.radius);
        }
    }

    #[test]
    fn normal_path_agrees_with_general_solver() {
        let mut s = Sampler::new(5);
        for n in 1..=5 {
            let a = s.normal_matrix(n);
            let via_spectrum = chebyshev_radius(&a, &tol()).unwrap();
            let general = minimize_distance_ellipsoid(&a, 1e-10);
            assert!((via_spectrum.radius - general.radius).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_non_square() {
        assert!(chebyshev_radius(&Matrix::zeros(2, 3), &tol()).is_err());
    }
}
