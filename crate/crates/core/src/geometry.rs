//! Point clouds of the boundary surfaces of the Bell tetrahedron.
//!
//! Surfaces are graphs over a uniform `(x1, x2)` grid on `[−1, 1]²` with
//! `x3` solved from the defining equation; the `|x1 − x2| = 2` planes are
//! vertical and use an `(x1, x3)` grid instead. Points outside the
//! tetrahedron are dropped. The 4D cone surfaces are emitted on the
//! `X0 = 1` slice, where they coincide with the octahedron and the
//! quadratic surface.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format::fmt12;
use crate::state::in_tetrahedron;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Surface {
    Tetrahedron,
    Octahedron,
    Quadratic,
    CdPlanes,
    ConeSeparable,
    ConeEad,
}

impl Surface {
    pub const ALL: [Surface; 6] = [
        Surface::Tetrahedron,
        Surface::Octahedron,
        Surface::Quadratic,
        Surface::CdPlanes,
        Surface::ConeSeparable,
        Surface::ConeEad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Surface::Tetrahedron => "tetrahedron",
            Surface::Octahedron => "octahedron",
            Surface::Quadratic => "quadratic",
            Surface::CdPlanes => "cd_planes",
            Surface::ConeSeparable => "cone_separable",
            Surface::ConeEad => "cone_ead",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Surface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Surface::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown surface '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub surface: Surface,
}

impl SurfacePoint {
    pub fn coords(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

/// `n` uniform values `−1 + 2i/(n − 1)`.
pub fn grid_axis(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { 1.0 } else { -1.0 + 2.0 * i as f64 / last })
        .collect()
}

// sums are formed as `x1 + x2` so the swap x1 ↔ x2 maps points bit-exactly
fn tetrahedron_faces(x1: f64, x2: f64) -> Vec<f64> {
    vec![1.0 - (x1 + x2), (x1 - x2) - 1.0, (x2 - x1) - 1.0, 1.0 + (x1 + x2)]
}

fn octahedron_faces(x1: f64, x2: f64) -> Vec<f64> {
    let h = 1.0 - (x1.abs() + x2.abs());
    if h < 0.0 {
        Vec::new()
    } else if h == 0.0 {
        vec![0.0]
    } else {
        vec![h, -h]
    }
}

fn quadratic(x1: f64, x2: f64) -> Vec<f64> {
    vec![0.25 * (x1 + x2) * (x1 + x2) - 1.0]
}

/// Points of `which` on a grid with `resolution` values per axis.
pub fn sample_surface(which: Surface, resolution: usize) -> Result<Vec<SurfacePoint>> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution must be at least 2, got {resolution}")));
    }
    let axis = grid_axis(resolution);
    let mut raw = Vec::new();
    for &a in &axis {
        for &b in &axis {
            match which {
                Surface::CdPlanes => {
                    // (x1, x3) = (a, b); x2 = x1 ∓ 2
                    raw.push([a, a - 2.0, b]);
                    raw.push([a, a + 2.0, b]);
                }
                _ => {
                    let heights = match which {
                        Surface::Tetrahedron => tetrahedron_faces(a, b),
                        Surface::Octahedron | Surface::ConeSeparable => octahedron_faces(a, b),
                        Surface::Quadratic | Surface::ConeEad => quadratic(a, b),
                        Surface::CdPlanes => unreachable!(),
                    };
                    raw.extend(heights.into_iter().map(|h| [a, b, h]));
                }
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    Ok(raw
        .into_iter()
        .filter(|&[x1, x2, x3]| in_tetrahedron(x1, x2, x3))
        .filter(|p| seen.insert(p.map(f64::to_bits)))
        .map(|[x1, x2, x3]| SurfacePoint {
            x1,
            x2,
            x3,
            surface: which,
        })
        .collect())
}

/// `x1,x2,x3,surface_name` CSV.
pub fn surface_csv(points: &[SurfacePoint]) -> String {
    let mut out = String::from("x1,x2,x3,surface_name\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt12(p.x1),
            fmt12(p.x2),
            fmt12(p.x3),
            p.surface
        ));
    }
    out
}
