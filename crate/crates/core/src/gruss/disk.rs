//! Smallest enclosing disk of points in the complex plane.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::C64;

/// A closed disk `{z : |z − center| ≤ radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "DiskDoc", from = "DiskDoc")]
pub struct Disk {
    pub center: C64,
    pub radius: f64,
}

#[derive(Serialize, Deserialize)]
struct DiskDoc {
    center_re: f64,
    center_im: f64,
    radius: f64,
}

impl From<Disk> for DiskDoc {
    fn from(d: Disk) -> Self {
        Self {
            center_re: d.center.re,
            center_im: d.center.im,
            radius: d.radius,
        }
    }
}

impl From<DiskDoc> for Disk {
    fn from(d: DiskDoc) -> Self {
        Disk {
            center: C64::new(d.center_re, d.center_im),
            radius: d.radius,
        }
    }
}

impl Disk {
    pub fn point(z: C64) -> Self {
        Self {
            center: z,
            radius: 0.0,
        }
    }

    fn diameter(p: C64, q: C64) -> Self {
        Self {
            center: (p + q) * 0.5,
            radius: (p - q).norm() * 0.5,
        }
    }

    /// Circumscribed disk; falls back to the widest pair for (near-)collinear input.
    fn circumscribed(a: C64, b: C64, c: C64) -> Self {
        let (ab, ac) = (b - a, c - a);
        let d = 2.0 * (ab.re * ac.im - ab.im * ac.re);
        let scale = ab.norm_sqr().max(ac.norm_sqr());
        if d.abs() <= 1e-14 * scale {
            return [Self::diameter(a, b), Self::diameter(a, c), Self::diameter(b, c)]
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .expect("three candidates");
        }
        let (ab2, ac2) = (ab.norm_sqr(), ac.norm_sqr());
        let ux = (ac.im * ab2 - ab.im * ac2) / d;
        let uy = (ab.re * ac2 - ac.re * ab2) / d;
        let offset = C64::new(ux, uy);
        Self {
            center: a + offset,
            radius: offset.norm(),
        }
    }

    /// Membership with a small relative slack for rounding.
    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-14 * (1.0 + self.center.norm())
    }
}

fn from_boundary(boundary: &[C64]) -> Option<Disk> {
    match *boundary {
        [] => None,
        [p] => Some(Disk::point(p)),
        [p, q] => Some(Disk::diameter(p, q)),
        [p, q, r] => Some(Disk::circumscribed(p, q, r)),
        _ => unreachable!("at most three boundary points"),
    }
}

/// Move-to-front Welzl recursion over the first `len` points.
fn welzl(points: &mut Vec<C64>, len: usize, boundary: &mut Vec<C64>) -> Option<Disk> {
    let mut disk = from_boundary(boundary);
    if boundary.len() == 3 {
        return disk;
    }
    for i in 0..len {
        let p = points[i];
        if disk.is_some_and(|d| d.contains(p)) {
            continue;
        }
        boundary.push(p);
        disk = welzl(points, i, boundary);
        boundary.pop();
        let moved = points.remove(i);
        points.insert(0, moved);
    }
    disk
}

/// Minimal-radius disk covering all points (randomized incremental, fixed seed).
pub fn smallest_enclosing_disk(points: &[C64]) -> Result<Disk> {
    if points.is_empty() {
        return Err(Error::Domain("enclosing disk of an empty point set".into()));
    }
    if points.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Domain("enclosing disk of non-finite points".into()));
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let len = pts.len();
    Ok(welzl(&mut pts, len, &mut Vec::with_capacity(3)).expect("nonempty input"))
}
