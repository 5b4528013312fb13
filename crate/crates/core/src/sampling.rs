//! Seeded random states for property checks and the verification suites.
//!
//! All generators take a `ChaCha8Rng`, so a seed fixes every sample on any
//! platform.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution, StandardNormal};

use crate::esd::{classify_bell_point, DynamicalClass};
use crate::state::{BellPoint, ConePoint, XStateParams};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn simplex4<R: Rng>(rng: &mut R) -> [f64; 4] {
    Dirichlet::new([1.0; 4]).expect("valid concentration").sample(rng)
}

/// Uniform point of the tetrahedron, as a convex combination of the four
/// Bell vertices.
pub fn tetrahedron_point<R: Rng>(rng: &mut R) -> BellPoint {
    let w = simplex4(rng);
    let verts = [
        BellPoint::vertex_a(),
        BellPoint::vertex_b(),
        BellPoint::vertex_c(),
        BellPoint::vertex_d(),
    ];
    let mut c = [0.0; 3];
    for (wi, v) in w.iter().zip(verts) {
        for (ci, vi) in c.iter_mut().zip(v.coords()) {
            *ci += wi * vi;
        }
    }
    BellPoint::new(c[0], c[1], c[2]).expect("convex combination of vertices")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `x3 < 0`, the pyramids around A and B.
    Ab,
    /// `x3 ≥ 0`, the pyramids around C and D.
    Cd,
}

/// Uniform ESD point of one branch, by rejection.
pub fn esd_point<R: Rng>(rng: &mut R, branch: Branch) -> BellPoint {
    loop {
        let p = tetrahedron_point(rng);
        let on_branch = match branch {
            Branch::Ab => p.x3() < 0.0,
            Branch::Cd => p.x3() >= 0.0,
        };
        if on_branch && classify_bell_point(&p) == DynamicalClass::Esd {
            return p;
        }
    }
}

/// Physical X-state with unit trace: Dirichlet populations and real
/// coherences bounded by the geometric means of their populations.
pub fn xstate<R: Rng>(rng: &mut R) -> XStateParams {
    let [p00, p01, p10, p11] = simplex4(rng);
    let outer = rng.random_range(-1.0..=1.0) * (p00 * p11).sqrt();
    let inner = rng.random_range(-1.0..=1.0) * (p01 * p10).sqrt();
    XStateParams {
        x0: 1.0,
        x1: 2.0 * (inner + outer),
        x2: 2.0 * (inner - outer),
        x3: p00 - p01 - p10 + p11,
        x4: p00 - p01 + p10 - p11,
        x5: p00 + p01 - p10 - p11,
    }
}

/// `(x0, x1, k)` with `x0 ∈ [0.05, 3]`, `0 < |x1| ≤ x0` and `k ∈ (0, 3]`.
pub fn nondiagonal<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    let x0 = rng.random_range(0.05..=3.0);
    let mut u = 0.0;
    while u == 0.0 {
        u = rng.random_range(-1.0..=1.0);
    }
    let k = 3.0 - rng.random_range(0.0..3.0);
    (x0, u * x0, k)
}

/// Tetrahedron point scaled by `x0 ∈ [0.05, 5]`.
pub fn cone_point<R: Rng>(rng: &mut R) -> ConePoint {
    let p = tetrahedron_point(rng);
    let x0 = rng.random_range(0.05..=5.0);
    let [x1, x2, x3] = p.coords();
    ConePoint::new(x0, x0 * x1, x0 * x2, x0 * x3).expect("scaled tetrahedron point")
}

/// Random element of SL(2,C): Gaussian entries divided by `√det`.
pub fn sl2c<R: Rng>(rng: &mut R) -> Matrix2<Complex64> {
    loop {
        let m = Matrix2::from_fn(|_, _| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        let det = m.determinant();
        if det.norm() > 1e-3 {
            return m / det.sqrt();
        }
    }
}
