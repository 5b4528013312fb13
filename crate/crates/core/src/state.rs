//! Two-qubit state representations.
//!
//! A state is held either as a 4×4 density matrix or as its real Pauli
//! coefficient matrix `R`, with `ρ = ¼ Σ R_ij σ_i⊗σ_j`. Bell-diagonal states
//! are points `(x1, x2, x3)` of the tetrahedron spanned by the four Bell
//! states, and X-states carry the six entries of an `R` matrix whose only
//! nonzero elements are the diagonal and the `(0,3)`/`(3,0)` corners.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix4 = Matrix4<Complex64>;

/// Hermiticity tolerance on `|ρ_ij − conj(ρ_ji)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|Tr ρ − 1|` for normalized states.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Slack on the closed tetrahedron and octahedron boundaries.
pub const BOUNDARY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli matrix `σ_i`, with `σ_0` the identity.
pub fn pauli(i: usize) -> Matrix2<Complex64> {
    match i {
        0 => Matrix2::new(ONE, ZERO, ZERO, ONE),
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {i} out of range"),
    }
}

/// `σ_i ⊗ σ_j` in the computational basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn pauli_product(i: usize, j: usize) -> CMatrix4 {
    let k = pauli(i).kronecker(&pauli(j));
    CMatrix4::from_fn(|r, c| k[(r, c)])
}

fn pauli_basis() -> &'static [[CMatrix4; 4]; 4] {
    use std::sync::OnceLock;
    static BASIS: OnceLock<[[CMatrix4; 4]; 4]> = OnceLock::new();
    BASIS.get_or_init(|| std::array::from_fn(|i| std::array::from_fn(|j| pauli_product(i, j))))
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix4) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix4) -> [f64; 4] {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut ev = [0.0; 4];
    for (k, v) in eig.eigenvalues.iter().enumerate() {
        ev[k] = *v;
    }
    ev.sort_by(f64::total_cmp);
    ev
}

/// Two-qubit density matrix.
///
/// Normalized states have unit trace. Unnormalized states (non-diagonal
/// Lorentz representatives, scaled cone points) only require a positive
/// trace. Constructors validate Hermiticity, trace and positivity;
/// [`density_from_r`] is total and skips the positivity check, use
/// [`DensityMatrix::check_physical`] when it matters.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix4,
    unnormalized: bool,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix4) -> Result<Self> {
        let rho = Self::from_raw(entries, false);
        rho.check_physical()?;
        Ok(rho)
    }

    pub fn new_unnormalized(entries: CMatrix4) -> Result<Self> {
        let rho = Self::from_raw(entries, true);
        rho.check_physical()?;
        Ok(rho)
    }

    /// Wraps a matrix without validation.
    pub fn from_raw(entries: CMatrix4, unnormalized: bool) -> Self {
        Self {
            entries,
            unnormalized,
        }
    }

    pub fn maximally_mixed() -> Self {
        Self::from_raw(CMatrix4::identity().scale(0.25), false)
    }

    /// Projector onto the (not necessarily normalized) pure state `psi`.
    pub fn from_pure(psi: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let m = CMatrix4::from_fn(|i, j| psi[i] * psi[j].conj());
        if (norm - 1.0).abs() <= TRACE_TOL {
            Self::new(m)
        } else {
            Self::new_unnormalized(m)
        }
    }

    pub fn entries(&self) -> &CMatrix4 {
        &self.entries
    }

    pub fn is_unnormalized(&self) -> bool {
        self.unnormalized
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.entries)
    }

    /// Entrywise complex conjugate `ρ*`.
    pub fn conjugate(&self) -> CMatrix4 {
        self.entries.map(|z| z.conj())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_raw(self.entries.scale(c), self.unnormalized || c != 1.0)
    }

    /// Checks finiteness, Hermiticity, trace and positivity.
    pub fn check_physical(&self) -> Result<()> {
        if self.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = self.entries.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let dev = hermitian_deviation(&self.entries);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.trace();
        if self.unnormalized {
            if tr <= 0.0 {
                return Err(Error::NonPositiveTrace(tr));
            }
        } else if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace(tr));
        }
        let min = self.eigenvalues()[0];
        if min < -POSITIVITY_TOL * tr.max(1.0) {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }
}

/// Real Pauli-coefficient matrix `R_ij = Tr[ρ σ_i⊗σ_j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrix {
    entries: Matrix4<f64>,
}

impl RMatrix {
    pub fn new(entries: Matrix4<f64>) -> Result<Self> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn diagonal(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self {
            entries: Matrix4::from_diagonal(&nalgebra::Vector4::new(x0, x1, x2, x3)),
        }
    }

    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn trace_component(&self) -> f64 {
        self.entries[(0, 0)]
    }

    /// The X-state parameters, when every entry outside the X pattern
    /// vanishes to `tol`.
    pub fn as_xstate(&self, tol: f64) -> Option<XStateParams> {
        let m = &self.entries;
        for i in 0..4 {
            for j in 0..4 {
                let in_pattern = i == j || (i, j) == (0, 3) || (i, j) == (3, 0);
                if !in_pattern && m[(i, j)].abs() > tol {
                    return None;
                }
            }
        }
        Some(XStateParams {
            x0: m[(0, 0)],
            x1: m[(1, 1)],
            x2: m[(2, 2)],
            x3: m[(3, 3)],
            x4: m[(0, 3)],
            x5: m[(3, 0)],
        })
    }
}

/// `ρ = ¼ Σ_ij R_ij σ_i⊗σ_j`.
///
/// Total: the result is Hermitian for every real `R` but is only a physical
/// state when positive. It is flagged unnormalized whenever `R_00 ≠ 1`.
pub fn density_from_r(r: &RMatrix) -> DensityMatrix {
    let basis = pauli_basis();
    let mut rho = CMatrix4::zeros();
    for (i, row) in basis.iter().enumerate() {
        for (j, sigma) in row.iter().enumerate() {
            let c = r.entries[(i, j)];
            if c != 0.0 {
                rho += sigma.scale(0.25 * c);
            }
        }
    }
    let unnormalized = (r.trace_component() - 1.0).abs() > TRACE_TOL;
    DensityMatrix::from_raw(rho, unnormalized)
}

/// `R_ij = Tr[ρ (σ_i⊗σ_j)]`.
pub fn r_from_density(rho: &DensityMatrix) -> RMatrix {
    let basis = pauli_basis();
    let m = rho.entries();
    let entries = Matrix4::from_fn(|i, j| {
        // Tr[ρ P] = Σ_ab ρ_ab P_ba
        let p = &basis[i][j];
        let mut acc = ZERO;
        for a in 0..4 {
            for b in 0..4 {
                acc += m[(a, b)] * p[(b, a)];
            }
        }
        acc.re
    });
    RMatrix { entries }
}

/// True when all four Bell-diagonal eigenvalue forms are nonnegative.
pub fn in_tetrahedron(x1: f64, x2: f64, x3: f64) -> bool {
    [x1, x2, x3].iter().all(|v| v.is_finite())
        && eigenvalue_forms(x1, x2, x3)
            .iter()
            .all(|&l| l >= -BOUNDARY_TOL)
}

/// Eigenvalues of the Bell-diagonal state with coordinates `(x1, x2, x3)`.
pub fn eigenvalue_forms(x1: f64, x2: f64, x3: f64) -> [f64; 4] {
    [
        0.25 * (1.0 - x1 - x2 - x3),
        0.25 * (1.0 - x1 + x2 + x3),
        0.25 * (1.0 + x1 - x2 + x3),
        0.25 * (1.0 + x1 + x2 - x3),
    ]
}

/// Normalized Bell-diagonal state, a point of the closed tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellPoint {
    x1: f64,
    x2: f64,
    x3: f64,
}

impl BellPoint {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        if ![x1, x2, x3].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !in_tetrahedron(x1, x2, x3) {
            return Err(Error::TetrahedronViolation(x1, x2, x3));
        }
        Ok(Self { x1, x2, x3 })
    }

    pub fn origin() -> Self {
        Self::from_unchecked(0.0, 0.0, 0.0)
    }

    /// Bell vertex of `|Φ⟩`-type state at `(1, 1, −1)`.
    pub fn vertex_a() -> Self {
        Self::from_unchecked(1.0, 1.0, -1.0)
    }

    /// The singlet, `(−1, −1, −1)`.
    pub fn vertex_b() -> Self {
        Self::from_unchecked(-1.0, -1.0, -1.0)
    }

    pub fn vertex_c() -> Self {
        Self::from_unchecked(1.0, -1.0, 1.0)
    }

    pub fn vertex_d() -> Self {
        Self::from_unchecked(-1.0, 1.0, 1.0)
    }

    fn from_unchecked(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn x3(&self) -> f64 {
        self.x3
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn eigenvalue_forms(&self) -> [f64; 4] {
        eigenvalue_forms(self.x1, self.x2, self.x3)
    }

    /// `|x1| + |x2| + |x3|`.
    pub fn l1_norm(&self) -> f64 {
        self.x1.abs() + self.x2.abs() + self.x3.abs()
    }

    pub fn to_xstate(&self) -> XStateParams {
        XStateParams {
            x0: 1.0,
            x1: self.x1,
            x2: self.x2,
            x3: self.x3,
            x4: 0.0,
            x5: 0.0,
        }
    }
}

/// `ρ = ¼(σ0⊗σ0 + Σ x_i σ_i⊗σ_i)`.
pub fn bell_point_to_density(p: &BellPoint) -> DensityMatrix {
    density_from_r(&RMatrix::diagonal(1.0, p.x1, p.x2, p.x3))
}

/// Closed octahedron test `|x1| + |x2| + |x3| ≤ 1`.
pub fn is_separable_bell(p: &BellPoint) -> bool {
    p.l1_norm() <= 1.0 + BOUNDARY_TOL
}

/// Entries of an X-state `R` matrix: diagonal `x0..x3`, `R_03 = x4`,
/// `R_30 = x5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XStateParams {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub x5: f64,
}

impl XStateParams {
    pub fn from_array(x: [f64; 6]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            x0: x[0],
            x1: x[1],
            x2: x[2],
            x3: x[3],
            x4: x[4],
            x5: x[5],
        })
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.x0, self.x1, self.x2, self.x3, self.x4, self.x5]
    }

    pub fn to_rmatrix(&self) -> RMatrix {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.x0;
        m[(1, 1)] = self.x1;
        m[(2, 2)] = self.x2;
        m[(3, 3)] = self.x3;
        m[(0, 3)] = self.x4;
        m[(3, 0)] = self.x5;
        RMatrix { entries: m }
    }

    pub fn to_density(&self) -> DensityMatrix {
        density_from_r(&self.to_rmatrix())
    }

    /// Diagonal populations `ρ_00,00, ρ_01,01, ρ_10,10, ρ_11,11` and the
    /// two real coherences `ρ_00,11`, `ρ_01,10`.
    pub fn density_entries(&self) -> ([f64; 4], f64, f64) {
        let Self {
            x0,
            x1,
            x2,
            x3,
            x4,
            x5,
        } = *self;
        (
            [
                0.25 * (x0 + x3 + x4 + x5),
                0.25 * (x0 - x3 - x4 + x5),
                0.25 * (x0 - x3 + x4 - x5),
                0.25 * (x0 + x3 - x4 - x5),
            ],
            0.25 * (x1 - x2),
            0.25 * (x1 + x2),
        )
    }

    /// Positive semidefiniteness of the induced density matrix, to
    /// [`POSITIVITY_TOL`].
    pub fn is_physical(&self) -> bool {
        let (p, c_outer, c_inner) = self.density_entries();
        let tol = POSITIVITY_TOL * self.x0.abs().max(1.0);
        p.iter().all(|&v| v >= -tol)
            && p[0] * p[3] - c_outer * c_outer >= -tol
            && p[1] * p[2] - c_inner * c_inner >= -tol
    }
}

/// Unnormalized diagonal Lorentz representative `diag(x0, x1, x2, x3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConePoint {
    x0: f64,
    x1: f64,
    x2: f64,
    x3: f64,
}

impl ConePoint {
    /// Requires `x0 > 0` and `x0 ≥ |x_i|`. Apex points (`x0 = 0`) are
    /// rejected by [`crate::lorentz::normalize_cone_point`] instead.
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Result<Self> {
        if ![x0, x1, x2, x3].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if x0 < 0.0 {
            return Err(Error::InvalidState(format!("cone point with x0 = {x0} < 0")));
        }
        let m = x1.abs().max(x2.abs()).max(x3.abs());
        if m > x0 * (1.0 + BOUNDARY_TOL) {
            return Err(Error::InvalidState(format!(
                "cone point violates x0 >= |x_i| ({x0} < {m})"
            )));
        }
        Ok(Self { x0, x1, x2, x3 })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(c * self.x0, c * self.x1, c * self.x2, c * self.x3)
    }

    pub fn to_xstate(&self) -> XStateParams {
        XStateParams {
            x0: self.x0,
            x1: self.x1,
            x2: self.x2,
            x3: self.x3,
            x4: 0.0,
            x5: 0.0,
        }
    }
}

/// On-disk state description:
/// `{"kind": "density"|"rmatrix"|"bell_point"|"xstate", "data": ...}`.
///
/// Density entries are `[re, im]` pairs. The optional `"unnormalized": true`
/// relaxes the unit-trace requirement to a positive trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(flatten)]
    pub state: StateData,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unnormalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum StateData {
    Density([[[f64; 2]; 4]; 4]),
    Rmatrix([[f64; 4]; 4]),
    BellPoint([f64; 3]),
    Xstate([f64; 6]),
}

/// A parsed and validated state.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Density(DensityMatrix),
    R(RMatrix),
    Bell(BellPoint),
    X(XStateParams),
}

impl State {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &StateFile) -> Result<Self> {
        let unnormalized = file.unnormalized;
        let check = |rho: DensityMatrix| -> Result<DensityMatrix> {
            let rho = DensityMatrix::from_raw(rho.entries().to_owned(), unnormalized);
            rho.check_physical()?;
            Ok(rho)
        };
        match &file.state {
            StateData::Density(rows) => {
                if rows.iter().flatten().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite);
                }
                let m = CMatrix4::from_fn(|i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
                Ok(State::Density(check(DensityMatrix::from_raw(m, unnormalized))?))
            }
            StateData::Rmatrix(rows) => {
                let r = RMatrix::from_rows(*rows)?;
                check(density_from_r(&r))?;
                Ok(State::R(r))
            }
            StateData::BellPoint([x1, x2, x3]) => Ok(State::Bell(BellPoint::new(*x1, *x2, *x3)?)),
            StateData::Xstate(x) => {
                let xs = XStateParams::from_array(*x)?;
                check(xs.to_density())?;
                Ok(State::X(xs))
            }
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Density(rho) => rho.clone(),
            State::R(r) => density_from_r(r),
            State::Bell(p) => bell_point_to_density(p),
            State::X(x) => x.to_density(),
        }
    }

    pub fn to_rmatrix(&self) -> RMatrix {
        match self {
            State::Density(rho) => r_from_density(rho),
            State::R(r) => *r,
            State::Bell(p) => p.to_xstate().to_rmatrix(),
            State::X(x) => x.to_rmatrix(),
        }
    }

    /// X-state parameters when the state has the X sparsity pattern.
    pub fn as_xstate(&self) -> Option<XStateParams> {
        match self {
            State::Bell(p) => Some(p.to_xstate()),
            State::X(x) => Some(*x),
            _ => self.to_rmatrix().as_xstate(1e-14),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn singlet() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure([c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]).unwrap()
    }

    fn max_diff(a: &CMatrix4, b: &CMatrix4) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn pauli_entries_are_pinned() {
        let s1 = pauli(1);
        let s2 = pauli(2);
        let s3 = pauli(3);
        assert_eq!(s1[(0, 1)], c(1.0, 0.0));
        assert_eq!(s1[(1, 0)], c(1.0, 0.0));
        assert_eq!(s2[(0, 1)], c(0.0, -1.0));
        assert_eq!(s2[(1, 0)], c(0.0, 1.0));
        assert_eq!(s2[(0, 0)], c(0.0, 0.0));
        assert_eq!(s3[(0, 0)], c(1.0, 0.0));
        assert_eq!(s3[(1, 1)], c(-1.0, 0.0));
        assert_eq!(pauli(0), Matrix2::identity());
    }

    #[test]
    fn identity_component_is_maximally_mixed() {
        let rho = density_from_r(&RMatrix::diagonal(1.0, 0.0, 0.0, 0.0));
        assert!(max_diff(rho.entries(), &CMatrix4::identity().scale(0.25)) < 1e-15);
        assert!(!rho.is_unnormalized());
    }

    #[test]
    fn singlet_has_minus_one_correlations() {
        let rho = density_from_r(&RMatrix::diagonal(1.0, -1.0, -1.0, -1.0));
        assert!(max_diff(rho.entries(), singlet().entries()) < 1e-15);
        let r = r_from_density(&singlet());
        assert!((r.entries() - Matrix4::from_diagonal(&[1.0, -1.0, -1.0, -1.0].into())).abs().max() < 1e-15);
    }

    #[test]
    fn conclusions_matrix_gives_x_shaped_density() {
        let x = XStateParams::from_array([1.0, -0.25, -0.25, -0.5, -0.24, -0.24]).unwrap();
        let rho = x.to_density();
        let m = rho.entries();
        assert!(hermitian_deviation(m) < 1e-15);
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-15);
        // populations by hand: (1 ± x3 ± x4 ± x5)/4
        assert_abs_diff_eq!(m[(0, 0)].re, (1.0 - 0.5 - 0.48) / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 1)].re, 1.5 / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(2, 2)].re, 1.5 / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(3, 3)].re, (1.0 - 0.5 + 0.48) / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 2)].re, -0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 3)].re, 0.0, epsilon = 1e-15);
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert_eq!(m[(i, j)], c(0.0, 0.0));
        }
        rho.check_physical().unwrap();
        let (p, outer, inner) = x.density_entries();
        for k in 0..4 {
            assert_abs_diff_eq!(p[k], m[(k, k)].re, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(outer, m[(0, 3)].re, epsilon = 1e-15);
        assert_abs_diff_eq!(inner, m[(1, 2)].re, epsilon = 1e-15);
    }

    #[test]
    fn maximally_mixed_r_matrix() {
        let r = r_from_density(&DensityMatrix::maximally_mixed());
        assert!((r.entries() - RMatrix::diagonal(1.0, 0.0, 0.0, 0.0).entries()).abs().max() < 1e-15);
    }

    #[test]
    fn bell_vertices_are_pure_bell_states() {
        for p in [BellPoint::vertex_a(), BellPoint::vertex_b(), BellPoint::vertex_c(), BellPoint::vertex_d()] {
            let ev = bell_point_to_density(&p).eigenvalues();
            assert_abs_diff_eq!(ev[3], 1.0, epsilon = 1e-12);
            for v in &ev[..3] {
                assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
            }
            assert!(!is_separable_bell(&p));
        }
        let rho = bell_point_to_density(&BellPoint::vertex_b());
        assert!(max_diff(rho.entries(), singlet().entries()) < 1e-15);
    }

    #[test]
    fn tetrahedron_membership() {
        assert!(!in_tetrahedron(1.2, 0.0, 0.0));
        assert!(in_tetrahedron(1.0, -1.0, 1.0));
        assert!(in_tetrahedron(0.8, -0.8, 0.8));
        assert!(!in_tetrahedron(1.0, 1.0, 1.0));
        assert!(!in_tetrahedron(f64::NAN, 0.0, 0.0));
        assert!(matches!(
            BellPoint::new(0.9, 0.9, 0.9),
            Err(Error::TetrahedronViolation(..))
        ));
    }

    #[test]
    fn octahedron_membership() {
        assert!(is_separable_bell(&BellPoint::origin()));
        assert!(is_separable_bell(&BellPoint::new(0.5, 0.5, 0.0).unwrap()));
        assert!(!is_separable_bell(&BellPoint::new(-0.5, -0.7, -0.3).unwrap()));
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = CMatrix4::identity().scale(0.25);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
        let m = CMatrix4::identity().scale(0.5);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotUnitTrace(_))));
        assert!(DensityMatrix::new_unnormalized(m).is_ok());
        let m = CMatrix4::from_diagonal(&[c(0.6, 0.0), c(0.6, 0.0), c(0.0, 0.0), c(-0.2, 0.0)].into());
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive(_))));
        let m = CMatrix4::identity().scale(-0.25);
        assert!(matches!(DensityMatrix::new_unnormalized(m), Err(Error::NonPositiveTrace(_))));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let text = r#"{"kind":"rmatrix","data":[[1,0,0,-0.24],[0,-0.25,0,0],[0,0,-0.25,0],[-0.24,0,0,-0.5]]}"#;
        let state = State::from_json(text).unwrap();
        let x = state.as_xstate().unwrap();
        assert_eq!(x.to_array(), [1.0, -0.25, -0.25, -0.5, -0.24, -0.24]);

        let text = r#"{"kind":"bell_point","data":[-0.5,-0.7,-0.3]}"#;
        assert!(matches!(State::from_json(text).unwrap(), State::Bell(_)));

        let text = r#"{"kind":"density","data":[[[0.25,0],[0,0],[0,0],[0,0]],[[0,0],[0.25,0],[0,0],[0,0]],[[0,0],[0,0],[0.25,0],[0,0]],[[0,0],[0,0],[0,0],[0.25,0]]]}"#;
        assert!(matches!(State::from_json(text).unwrap(), State::Density(_)));

        let text = r#"{"kind":"xstate","data":[2,0,0,0,0,0],"unnormalized":true}"#;
        assert!(State::from_json(text).is_ok());
        let text = r#"{"kind":"xstate","data":[2,0,0,0,0,0]}"#;
        assert!(matches!(State::from_json(text), Err(Error::NotUnitTrace(_))));

        for bad in [
            r#"{"kind":"bell_point","data":[NaN,0,0]}"#,
            r#"{"kind":"bell_point","data":[1e999,0,0]}"#,
            r#"{"kind":"bell_point","data":[0,0]}"#,
            r#"{"kind":"spinor","data":[0,0,0]}"#,
        ] {
            assert!(matches!(State::from_json(bad), Err(Error::Parse(_))), "{bad}");
        }

        let file = StateFile {
            state: StateData::Xstate([1.0, -0.25, -0.25, -0.5, -0.24, -0.24]),
            unnormalized: false,
        };
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(text, r#"{"kind":"xstate","data":[1.0,-0.25,-0.25,-0.5,-0.24,-0.24]}"#);
    }
}
