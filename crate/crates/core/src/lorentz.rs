//! SL(2,C)⊗SL(2,C) normal form of a two-qubit state.
//!
//! Local filters `ρ → (M1⊗M2)ρ(M1⊗M2)†` act on the Pauli matrix as
//! `R → L1 R L2ᵀ` with proper orthochronous Lorentz transforms. The squared
//! Lorentz singular values are the eigenvalues of `N = ηRᵀηR`,
//! `η = diag(1, −1, −1, −1)`. A diagonalizable `N` gives the diagonal
//! representative; a Jordan block on the leading eigenvalue gives the
//! non-diagonal one; a vanishing spectrum is the apex.
//!
//! Canonical form: each spatial singular value stays on the coordinate axis
//! its eigenvector overlaps most, and its sign is that of the image vector
//! along the same axis. The sign of `X1·X2·X3` then matches `det R`; if it
//! does not, the least aligned value is flipped. X-states keep their axis
//! structure under this rule.

use nalgebra::{DMatrix, Matrix4, Schur, SymmetricEigen, Vector4, SVD};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{density_from_r, BellPoint, ConePoint, RMatrix};

/// Eigenvalues closer than this (relative to the largest) form one cluster.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Relative singular value of `N − λI` counted as zero.
pub const RANK_TOL: f64 = 1e-9;
/// Relative singular value of `N − λI` counted as a genuine Jordan coupling.
pub const JORDAN_TOL: f64 = 1e-6;
/// Largest eigenvalue, relative to `R_00²`, treated as the apex.
pub const APEX_TOL: f64 = 1e-9;
/// Relative gap below which the two leading eigenvalues may be a split
/// Jordan pair.
pub const NEAR_DEFECTIVE_GAP: f64 = 1e-3;
/// `vᵀηv/|v|²` below which the leading eigenvector counts as lightlike.
pub const LIGHTLIKE_TOL: f64 = 1e-4;
/// Leading value below which a cone point cannot be normalized.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormalFormClass {
    Diagonal,
    NonDiagonal,
    Apex,
}

/// Lorentz singular values `x0 ≥ |x_i|` of the input, not rescaled.
///
/// For the non-diagonal class `x0 = x3`, `x1 = −x2 ≥ 0` and `k` is the
/// class-canonical value 1; the magnitude of `k` is not an invariant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalForm {
    pub class: NormalFormClass,
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub k: f64,
}

impl NormalForm {
    fn apex() -> Self {
        Self {
            class: NormalFormClass::Apex,
            x0: 0.0,
            x1: 0.0,
            x2: 0.0,
            x3: 0.0,
            k: 0.0,
        }
    }

    pub fn values(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// Singular values divided by `x0`; `None` at the apex.
    pub fn normalized(&self) -> Option<[f64; 4]> {
        (self.x0 > DEGENERATE_TOL).then(|| self.values().map(|v| v / self.x0))
    }

    /// The diagonal representative as a cone point.
    pub fn cone_point(&self) -> Option<ConePoint> {
        match self.class {
            NormalFormClass::Diagonal => ConePoint::new(self.x0, self.x1, self.x2, self.x3).ok(),
            _ => None,
        }
    }

    /// Representative Pauli matrix (`diag` or the Jordan form with `k`).
    pub fn representative(&self) -> RMatrix {
        match self.class {
            NormalFormClass::NonDiagonal => RMatrix::from_rows([
                [self.x0 + self.k, 0.0, 0.0, -self.k],
                [0.0, self.x1, 0.0, 0.0],
                [0.0, 0.0, self.x2, 0.0],
                [self.k, 0.0, 0.0, self.x3 - self.k],
            ])
            .expect("finite"),
            _ => RMatrix::diagonal(self.x0, self.x1, self.x2, self.x3),
        }
    }
}

/// `(x1/x0, x2/x0, x3/x0)`.
pub fn normalize_cone_point(c: &ConePoint) -> Result<BellPoint> {
    let x0 = c.x0();
    if x0 <= DEGENERATE_TOL {
        return Err(Error::DegenerateApex(x0));
    }
    let [x1, x2, x3] = c.spatial();
    BellPoint::new(x1 / x0, x2 / x0, x3 / x0)
}

fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

fn eta_dot(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

struct Cluster {
    value: f64,
    multiplicity: usize,
    /// Euclidean orthonormal basis of the eigenspace, one column per vector.
    basis: Vec<Vector4<f64>>,
}

impl Cluster {
    fn projection(&self, v: &Vector4<f64>) -> Vector4<f64> {
        self.basis.iter().map(|b| b * b.dot(v)).sum()
    }
}

fn axis(j: usize) -> Vector4<f64> {
    let mut e = Vector4::zeros();
    e[j] = 1.0;
    e
}

/// Eigenvalues of `N`, descending, from its real Schur form.
fn lorentz_spectrum(n: &Matrix4<f64>, scale: f64) -> Result<[f64; 4]> {
    let eig = Schur::new(*n).complex_eigenvalues();
    let mut vals = [0.0; 4];
    for (k, z) in eig.iter().enumerate() {
        // a perturbed Jordan pair may split into a close conjugate pair;
        // both members keep the same real part and land in one cluster
        if z.im.abs() > NEAR_DEFECTIVE_GAP * scale {
            return Err(Error::InvalidState(format!(
                "complex Lorentz spectrum {} + {}i",
                z.re, z.im
            )));
        }
        if z.re < -CLUSTER_TOL * scale {
            return Err(Error::InvalidState(format!("negative squared singular value {}", z.re)));
        }
        vals[k] = z.re.max(0.0);
    }
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Groups the spectrum and tests each group for defectiveness. Returns the
/// clusters and whether the leading one carries a Jordan block.
fn analyse(n: &Matrix4<f64>, vals: &[f64; 4]) -> Result<(Vec<Cluster>, bool)> {
    let top = vals[0];
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &v in vals {
        match groups.last_mut() {
            Some(g) if g.last().unwrap() - v <= CLUSTER_TOL * top => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    // a Jordan pair perturbed by rounding splits by about √ε into two real
    // values whose eigenvectors are both nearly lightlike; a genuine
    // leading eigenvalue has a timelike eigenvector
    if groups.len() >= 2
        && groups[0].len() == 1
        && groups[1].len() == 1
        && groups[0][0] - groups[1][0] <= NEAR_DEFECTIVE_GAP * top
    {
        let v = null_vector(&(n - Matrix4::identity() * groups[0][0]));
        if eta_dot(&v, &v) / v.norm_squared() < LIGHTLIKE_TOL {
            let second = groups.remove(1);
            groups[0].extend(second);
        }
    }
    let mut clusters = Vec::new();
    let mut defective_top = false;
    for (gi, g) in groups.iter().enumerate() {
        let value = g.iter().sum::<f64>() / g.len() as f64;
        let m = g.len();
        let shifted = (n - Matrix4::identity() * value) / top;
        let svd = SVD::new(shifted, false, true);
        let v_t = svd.v_t.expect("right singular vectors");
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let null_dim = order
            .iter()
            .take_while(|&&i| svd.singular_values[i] <= RANK_TOL)
            .count();
        if null_dim < m {
            let coupling = svd.singular_values[order[m - 1]];
            if coupling < JORDAN_TOL {
                return Err(Error::ClassificationAmbiguous(format!(
                    "eigenvalue {value:e} of multiplicity {m}: rank gap {coupling:e} between tolerances"
                )));
            }
            if gi != 0 {
                return Err(Error::ClassificationAmbiguous(format!(
                    "Jordan block on non-leading eigenvalue {value:e}"
                )));
            }
            defective_top = true;
        }
        let basis = order
            .iter()
            .take(m.min(null_dim.max(1)))
            .map(|&i| v_t.row(i).transpose())
            .collect();
        clusters.push(Cluster {
            value,
            multiplicity: m,
            basis,
        });
    }
    Ok((clusters, defective_top))
}

/// Right singular vector of the smallest singular value.
fn null_vector(m: &Matrix4<f64>) -> Vector4<f64> {
    let svd = SVD::new(*m, false, true);
    let v_t = svd.v_t.expect("right singular vectors");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("four singular values");
    v_t.row(imin).transpose()
}

/// All permutations of `[1, 2, 3]`, identity first.
const PERMUTATIONS: [[usize; 3]; 6] = [
    [1, 2, 3],
    [1, 3, 2],
    [2, 1, 3],
    [2, 3, 1],
    [3, 1, 2],
    [3, 2, 1],
];

/// Returns `η`-orthonormal eigenvectors of `N`, one per axis, and the
/// squared singular value attached to each axis.
fn axis_frame(clusters: &[Cluster]) -> Result<([Vector4<f64>; 4], [f64; 4])> {
    // slot s → cluster index; slot 0 is the timelike direction of cluster 0
    let slots: Vec<usize> = clusters
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| std::iter::repeat_n(ci, c.multiplicity))
        .collect();
    let score = |perm: &[usize; 3]| -> f64 {
        (0..3)
            .map(|s| clusters[slots[s + 1]].projection(&axis(perm[s])).norm_squared())
            .sum()
    };
    let mut best = PERMUTATIONS[0];
    let mut best_score = score(&best);
    for perm in &PERMUTATIONS[1..] {
        let sc = score(perm);
        if sc > best_score + 1e-12 {
            best = *perm;
            best_score = sc;
        }
    }
    let mut slot_axis = [0usize; 4];
    slot_axis[1..].copy_from_slice(&best);

    let mut frame = [Vector4::zeros(); 4];
    let mut squared = [0.0; 4];
    for (ci, cluster) in clusters.iter().enumerate() {
        let axes: Vec<usize> = (0..4).filter(|&s| slots[s] == ci).map(|s| slot_axis[s]).collect();
        let mut chosen: Vec<Vector4<f64>> = Vec::new();
        for &ax in &axes {
            let timelike = ax == 0;
            let mut candidates = vec![cluster.projection(&axis(ax))];
            if timelike {
                candidates.push(most_timelike(cluster));
            }
            candidates.extend(cluster.basis.iter().copied());
            let v = candidates
                .into_iter()
                .find_map(|c| eta_orthonormalize(c, &chosen, timelike))
                .ok_or_else(|| {
                    Error::ClassificationAmbiguous(format!(
                        "no {} eigenvector for axis {ax}",
                        if timelike { "timelike" } else { "spacelike" }
                    ))
                })?;
            // orient along the assigned axis (future-directed for axis 0)
            let v = if v[ax] < 0.0 { -v } else { v };
            chosen.push(v);
            frame[ax] = v;
            squared[ax] = cluster.value;
        }
    }
    Ok((frame, squared))
}

/// Vector of the eigenspace with the largest `η`-norm per Euclidean norm.
fn most_timelike(cluster: &Cluster) -> Vector4<f64> {
    let m = cluster.basis.len();
    let b = DMatrix::from_fn(4, m, |i, j| cluster.basis[j][i]);
    let eta4 = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[1.0, -1.0, -1.0, -1.0]));
    let g = b.transpose() * eta4 * &b;
    let eig = SymmetricEigen::new(g);
    let (imax, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty eigenspace");
    let coeffs = eig.eigenvectors.column(imax);
    (0..m).map(|j| cluster.basis[j] * coeffs[j]).sum()
}

/// `η`-Gram–Schmidt of `v` against `chosen`, normalized to `η`-norm ±1 with
/// the sign demanded by `timelike`; `None` when the residual is degenerate.
fn eta_orthonormalize(v: Vector4<f64>, chosen: &[Vector4<f64>], timelike: bool) -> Option<Vector4<f64>> {
    let norm0 = v.norm();
    if norm0 < 1e-8 {
        return None;
    }
    let mut w = v / norm0;
    for c in chosen {
        let cc = eta_dot(c, c);
        w -= c * (eta_dot(&w, c) / cc);
    }
    let q = eta_dot(&w, &w);
    let ok = if timelike { q > 1e-8 } else { q < -1e-8 };
    ok.then(|| w / q.abs().sqrt())
}

/// Class label and Lorentz singular values of the state with Pauli matrix `r`.
pub fn lorentz_normal_form(r: &RMatrix) -> Result<NormalForm> {
    let rho = density_from_r(r);
    let rho = crate::state::DensityMatrix::from_raw(rho.entries().to_owned(), true);
    rho.check_physical()
        .map_err(|e| Error::InvalidState(e.to_string()))?;

    let rm = r.entries();
    let trace = rm[(0, 0)];
    let n = eta() * rm.transpose() * eta() * rm;
    let vals = lorentz_spectrum(&n, trace * trace)?;
    if vals[0] <= APEX_TOL * trace * trace {
        return Ok(NormalForm::apex());
    }
    let (clusters, defective) = analyse(&n, &vals)?;

    if defective {
        let x0 = clusters[0].value.sqrt();
        let rest: Vec<f64> = clusters[1..]
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity))
            .collect();
        let x1 = match rest.as_slice() {
            [] => x0,
            [a, b] if (a - b).abs() <= CLUSTER_TOL * vals[0] => (0.5 * (a + b)).sqrt(),
            _ => {
                return Err(Error::ClassificationAmbiguous(
                    "defective spectrum without the paired spatial values".into(),
                ))
            }
        };
        return Ok(NormalForm {
            class: NormalFormClass::NonDiagonal,
            x0,
            x1,
            x2: -x1,
            x3: x0,
            k: 1.0,
        });
    }

    let (frame, squared) = axis_frame(&clusters)?;
    let mut x = [0.0; 4];
    let mut alignment = [0.0; 4];
    for ax in 0..4 {
        let image = rm * frame[ax];
        let mag = squared[ax].sqrt();
        let along = image[ax];
        alignment[ax] = along.abs() / image.norm().max(f64::MIN_POSITIVE);
        x[ax] = if ax == 0 {
            if along < 0.0 {
                return Err(Error::InvalidState("Pauli matrix reverses the time direction".into()));
            }
            mag
        } else if along < 0.0 {
            -mag
        } else {
            mag
        };
    }
    let det = rm.determinant();
    let product: f64 = x[1] * x[2] * x[3];
    let det_scale = trace.powi(4);
    if det.abs() > 1e-12 * det_scale && product != 0.0 && det.signum() != product.signum() {
        let weakest = (1..4)
            .rev()
            .min_by(|&a, &b| alignment[a].total_cmp(&alignment[b]))
            .expect("three spatial axes");
        x[weakest] = -x[weakest];
    }
    Ok(NormalForm {
        class: NormalFormClass::Diagonal,
        x0: x[0],
        x1: x[1],
        x2: x[2],
        x3: x[3],
        k: 0.0,
    })
}
