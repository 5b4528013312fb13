//! Long-time entanglement fate of Lorentz representatives: separable,
//! sudden death (ESD) or asymptotic death (EAD).
//!
//! Bell points with `x3 < 0` (pyramids around vertices A and B) die in
//! finite time iff they lie strictly above the quadratic surface
//! `x3 = ¼(x1 + x2)² − 1`. Points with `x3 ≥ 0` (pyramids around C and D)
//! always die in finite time except the vertices C and D themselves.
//! Boundaries are open: surface points and the vertices are EAD, points on
//! the octahedron are separable.

use std::fmt;

use serde::Serialize;

use crate::entanglement::check_representative;
use crate::error::Result;
use crate::lorentz::normalize_cone_point;
use crate::state::{is_separable_bell, BellPoint, ConePoint, BOUNDARY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DynamicalClass {
    Separable,
    #[serde(rename = "ESD")]
    Esd,
    #[serde(rename = "EAD")]
    Ead,
}

impl fmt::Display for DynamicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DynamicalClass::Separable => "Separable",
            DynamicalClass::Esd => "ESD",
            DynamicalClass::Ead => "EAD",
        })
    }
}

/// `Q = ¼(x1 + x2)² − x3 − 1`; zero on the quadratic surface, negative
/// above it.
pub fn quadratic_surface(p: &BellPoint) -> f64 {
    0.25 * (p.x1() + p.x2()).powi(2) - p.x3() - 1.0
}

/// `P = −1 + |x1| + |x2| − x3`, the Peres–Horodecki plane of the x3 < 0
/// pyramids.
pub fn peres_horodecki_plane(p: &BellPoint) -> f64 {
    -1.0 + p.x1().abs() + p.x2().abs() - p.x3()
}

pub fn classify_bell_point(p: &BellPoint) -> DynamicalClass {
    if is_separable_bell(p) {
        return DynamicalClass::Separable;
    }
    let ead = if p.x3() < 0.0 {
        quadratic_surface(p) >= -BOUNDARY_TOL
    } else {
        (p.x1() - p.x2()).abs() >= 2.0 - BOUNDARY_TOL
    };
    if ead {
        DynamicalClass::Ead
    } else {
        DynamicalClass::Esd
    }
}

/// Classifies the unnormalized diagonal representative by its normalized
/// point, which is equivalent to testing the cone surfaces
/// `X0 = |X1| + |X2| + |X3|` and `X0 + X3 = (X1 + X2)²/(4X0)`.
pub fn classify_cone_point(c: &ConePoint) -> Result<DynamicalClass> {
    Ok(classify_bell_point(&normalize_cone_point(c)?))
}

/// Non-diagonal representatives with any coherence die in finite time:
/// the condition `X1² < 2kX0 + X0²` follows from `X0 ≥ |X1|`.
pub fn classify_nondiagonal(x0: f64, x1: f64, k: f64) -> Result<DynamicalClass> {
    check_representative(x0, x1, k)?;
    Ok(if x1 == 0.0 {
        DynamicalClass::Separable
    } else if x1 * x1 < 2.0 * k * x0 + x0 * x0 {
        DynamicalClass::Esd
    } else {
        DynamicalClass::Ead
    })
}

/// Distances of a Bell point to the separability boundary (`d_p`), to the
/// quadratic surface measured perpendicular to the Peres–Horodecki plane
/// (`d_1`), and to the planes `|x1 − x2| = 2` (`d_2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distances {
    pub d_p: f64,
    pub d_1: f64,
    pub d_2: f64,
}

pub fn distances(p: &BellPoint) -> Distances {
    let [x1, x2, x3] = p.coords();
    Distances {
        d_p: (-1.0 + x1.abs() + x2.abs() + x3.abs()).max(0.0),
        d_1: 1.0 + x3 - 0.25 * (x1 + x2).powi(2),
        d_2: 2.0 - x1.abs() - x2.abs(),
    }
}
