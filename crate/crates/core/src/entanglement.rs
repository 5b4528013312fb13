//! Concurrence: the general Wootters formula and closed forms for evolved
//! Bell-diagonal states and non-diagonal representatives.
//!
//! Functions suffixed `_raw` return the value before truncation at zero, so
//! root finders can see the sign change at the death time.

use nalgebra::{SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::dynamics::{evolve_entries, Tau};
use crate::error::{Error, Result};
use crate::spectrum::{char_poly, companion_roots};
use crate::state::{hermitian_deviation, BellPoint, CMatrix4, DensityMatrix, XStateParams};

/// Largest tolerated imaginary part of a spin-flip eigenvalue.
pub const SPECTRUM_IMAG_TOL: f64 = 1e-9;
/// Most negative spin-flip eigenvalue clamped to zero.
pub const SPECTRUM_NEG_TOL: f64 = 1e-10;

/// `σ2⊗σ2`, real in the computational basis.
fn spin_flip() -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// Square roots of the eigenvalues of `ρ(σ2⊗σ2)ρ*(σ2⊗σ2)`, descending.
///
/// With `ρ = W W†` the eigenvalues are the squared singular values of the
/// symmetric matrix `Wᵀ(σ2⊗σ2)W`, which avoids the ill-conditioned roots of
/// the product's characteristic polynomial at degenerate spectra.
pub fn spin_flip_roots(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let m = rho.entries();
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = rho.trace().abs().max(1.0);
    let dev = hermitian_deviation(m);
    if dev > SPECTRUM_IMAG_TOL * scale {
        return Err(Error::SpectrumNotReal { re: 0.0, im: dev });
    }
    let eig = SymmetricEigen::new((m + m.adjoint()).scale(0.5));
    let mut w = eig.eigenvectors;
    for (k, &d) in eig.eigenvalues.iter().enumerate() {
        if d < -SPECTRUM_NEG_TOL * scale {
            return Err(Error::SpectrumNegative(d));
        }
        let root = d.max(0.0).sqrt();
        for i in 0..4 {
            w[(i, k)] *= root;
        }
    }
    let t = w.transpose() * spin_flip() * w;
    let sv = SVD::new(t, false, false).singular_values;
    let mut roots = [sv[0], sv[1], sv[2], sv[3]];
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// `2√λ_max − Σ√λ_i` before truncation.
pub fn wootters_concurrence_raw(rho: &DensityMatrix) -> Result<f64> {
    let r = spin_flip_roots(rho)?;
    let raw = r[0] - r[1] - r[2] - r[3];
    debug_assert!(
        x_block_concurrence_raw(rho.entries())
            .is_none_or(|x| (x.max(0.0) - raw.max(0.0)).abs() <= 1e-6 * rho.trace().abs().max(1.0)),
        "X-block and general concurrence disagree"
    );
    Ok(raw)
}

/// Wootters concurrence `max{0, 2√λ_max − Σ√λ_i}`.
///
/// Homogeneous of degree one, so unnormalized states give the concurrence
/// scaled by their trace.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(wootters_concurrence_raw(rho)?.max(0.0))
}

/// Same quantity from the companion-matrix roots of the characteristic
/// polynomial of `ρ(σ2⊗σ2)ρ*(σ2⊗σ2)`.
///
/// Independent of [`spin_flip_roots`], but clustered eigenvalues (pure or
/// low-rank states) are resolved only to about `ε^{1/m}` and may be
/// rejected as non-real.
pub fn wootters_concurrence_companion(rho: &DensityMatrix) -> Result<f64> {
    let sf = spin_flip();
    let product = rho.entries() * sf * rho.conjugate() * sf;
    let coeffs = char_poly(&product);
    let scale = rho.trace().abs().max(1.0);
    for c in &coeffs {
        if c.im.abs() > SPECTRUM_IMAG_TOL * scale.powi(8) {
            return Err(Error::SpectrumNotReal { re: c.re, im: c.im });
        }
    }
    let roots = companion_roots(coeffs.map(|c| c.re));
    let tol_im = SPECTRUM_IMAG_TOL * scale * scale;
    let tol_neg = SPECTRUM_NEG_TOL * scale * scale;
    let mut sqrt = [0.0; 4];
    for (k, z) in roots.iter().enumerate() {
        if z.im.abs() > tol_im {
            return Err(Error::SpectrumNotReal { re: z.re, im: z.im });
        }
        if z.re < -tol_neg {
            return Err(Error::SpectrumNegative(z.re));
        }
        sqrt[k] = z.re.max(0.0).sqrt();
    }
    sqrt.sort_by(|a, b| b.total_cmp(a));
    Ok((sqrt[0] - sqrt[1] - sqrt[2] - sqrt[3]).max(0.0))
}

/// Concurrence of an X-shaped matrix from its two 2×2 blocks,
/// `2 max(|ρ_03| − √(ρ_11 ρ_22), |ρ_12| − √(ρ_00 ρ_33))`, or `None` when
/// entries outside the X pattern are nonzero.
pub fn x_block_concurrence_raw(m: &CMatrix4) -> Option<f64> {
    for i in 0..4 {
        for j in 0..4 {
            let in_x = i == j || i + j == 3;
            if !in_x && m[(i, j)].norm() > 1e-14 {
                return None;
            }
        }
    }
    let p = |k: usize| m[(k, k)].re.max(0.0);
    let outer = m[(0, 3)].norm() - (p(1) * p(2)).sqrt();
    let inner = m[(1, 2)].norm() - (p(0) * p(3)).sqrt();
    Some(2.0 * outer.max(inner))
}

/// Raw X-state concurrence straight from the parameters.
pub fn xstate_concurrence_raw(x: &XStateParams) -> f64 {
    let (p, outer, inner) = x.density_entries();
    let p = p.map(|v| v.max(0.0));
    2.0 * (outer.abs() - (p[1] * p[2]).sqrt()).max(inner.abs() - (p[0] * p[3]).sqrt())
}

/// Raw concurrence of the X-state `init` evolved to `τ`, from the directly
/// propagated populations.
pub fn evolved_xstate_concurrence_raw(init: &XStateParams, tau: Tau) -> f64 {
    let (p, outer, inner) = evolve_entries(init, tau);
    let p = p.map(|v| v.max(0.0));
    2.0 * (outer.abs() - (p[1] * p[2]).sqrt()).max(inner.abs() - (p[0] * p[3]).sqrt())
}

/// Raw closed-form concurrence of an evolved Bell point with `x3 < 0`:
/// `½(e^{−τ}|X1+X2| − e^{−2τ}√(1+X3)·√(1 − 4e^τ + 4e^{2τ} + X3))`.
pub fn concurrence_c1_raw(p: &BellPoint, tau: Tau) -> Result<f64> {
    if p.x3() >= 0.0 {
        return Err(Error::WrongBranch(p.x3()));
    }
    let d = (-tau.value()).exp();
    // e^{−2τ}√((2e^τ − 1)² + X3) = e^{−τ}√((2 − e^{−τ})² + X3 e^{−2τ})
    let tail = ((1.0 + p.x3()).max(0.0) * ((2.0 - d).powi(2) + p.x3() * d * d)).sqrt();
    Ok(0.5 * d * ((p.x1() + p.x2()).abs() - tail))
}

pub fn concurrence_c1(p: &BellPoint, tau: Tau) -> Result<f64> {
    Ok(concurrence_c1_raw(p, tau)?.max(0.0))
}

/// Raw closed-form concurrence of an evolved Bell point with `x3 ≥ 0`:
/// `½(e^{−τ}|X1−X2| + e^{−2τ}(1 − 2e^τ + X3))`.
pub fn concurrence_c2_raw(p: &BellPoint, tau: Tau) -> Result<f64> {
    if p.x3() < 0.0 {
        return Err(Error::WrongBranch(p.x3()));
    }
    let d = (-tau.value()).exp();
    Ok(0.5 * d * ((p.x1() - p.x2()).abs() - 2.0 + d * (1.0 + p.x3())))
}

pub fn concurrence_c2(p: &BellPoint, tau: Tau) -> Result<f64> {
    Ok(concurrence_c2_raw(p, tau)?.max(0.0))
}

/// C1 or C2 according to the sign of `x3` (zero goes to C2).
pub fn bell_concurrence_raw(p: &BellPoint, tau: Tau) -> f64 {
    if p.x3() < 0.0 {
        concurrence_c1_raw(p, tau)
    } else {
        concurrence_c2_raw(p, tau)
    }
    .expect("branch chosen by the sign of x3")
}

pub fn bell_concurrence(p: &BellPoint, tau: Tau) -> f64 {
    bell_concurrence_raw(p, tau).max(0.0)
}

pub(crate) fn check_representative(x0: f64, x1: f64, k: f64) -> Result<()> {
    if ![x0, x1, k].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x0 < x1.abs() {
        return Err(Error::InvalidRepresentative(format!("x0 = {x0} < |x1| = {}", x1.abs())));
    }
    if k <= 0.0 {
        return Err(Error::InvalidRepresentative(format!("k = {k} must be positive")));
    }
    Ok(())
}

/// X-state parameters of the non-diagonal representative
/// `[[X0+k,0,0,−k],[0,X1,0,0],[0,0,−X1,0],[k,0,0,X0−k]]`.
pub fn nondiagonal_xstate(x0: f64, x1: f64, k: f64) -> Result<XStateParams> {
    check_representative(x0, x1, k)?;
    XStateParams::from_array([x0 + k, x1, -x1, x0 - k, -k, k])
}

/// Raw concurrence of the evolved non-diagonal representative:
/// `e^{−τ}|X1| − e^{−2τ}√(X0(e^τ − 1))·√(−X0 + e^τ(2k + X0))`.
pub fn concurrence_nondiagonal_raw(x0: f64, x1: f64, k: f64, tau: Tau) -> Result<f64> {
    check_representative(x0, x1, k)?;
    let d = (-tau.value()).exp();
    // pull e^{τ/2} out of each root
    let tail = (x0 * -(-tau.value()).exp_m1()).sqrt() * (2.0 * k + x0 - x0 * d).sqrt();
    Ok(d * (x1.abs() - tail))
}

pub fn concurrence_nondiagonal(x0: f64, x1: f64, k: f64, tau: Tau) -> Result<f64> {
    Ok(concurrence_nondiagonal_raw(x0, x1, k, tau)?.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_bell_point, evolve_xstate};
    use crate::state::{bell_point_to_density, RMatrix, density_from_r};
    use approx::assert_abs_diff_eq;

    fn tau(v: f64) -> Tau {
        Tau::new(v).unwrap()
    }

    fn alpha() -> BellPoint {
        BellPoint::new(-0.5, -0.7, -0.3).unwrap()
    }

    #[test]
    fn pure_and_mixed_extremes() {
        let singlet = bell_point_to_density(&BellPoint::vertex_b());
        assert_abs_diff_eq!(wootters_concurrence(&singlet).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(wootters_concurrence(&DensityMatrix::maximally_mixed()).unwrap(), 0.0);
        for v in [BellPoint::vertex_a(), BellPoint::vertex_c(), BellPoint::vertex_d()] {
            assert_abs_diff_eq!(wootters_concurrence(&bell_point_to_density(&v)).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn alpha_initial_concurrence() {
        let c = wootters_concurrence(&bell_point_to_density(&alpha())).unwrap();
        assert_abs_diff_eq!(c, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_c1(&alpha(), Tau::ZERO).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn singlet_decays_exponentially() {
        for t in [0.0, 0.3, 1.0, 4.0, 30.0] {
            let c = concurrence_c1(&BellPoint::vertex_b(), tau(t)).unwrap();
            assert_abs_diff_eq!(c, (-t).exp(), epsilon = 1e-15);
        }
    }

    #[test]
    fn alpha_dies_near_0_6237() {
        assert!(concurrence_c1(&alpha(), tau(0.6237)).unwrap() < 1e-4);
        assert!(concurrence_c1_raw(&alpha(), tau(0.62)).unwrap() > 0.0);
        assert!(concurrence_c1_raw(&alpha(), tau(0.63)).unwrap() < 0.0);
    }

    #[test]
    fn c2_examples() {
        assert_abs_diff_eq!(concurrence_c2(&BellPoint::vertex_c(), Tau::ZERO).unwrap(), 1.0, epsilon = 1e-15);
        let p = BellPoint::new(0.8, -0.8, 0.8).unwrap();
        assert_abs_diff_eq!(concurrence_c2_raw(&p, tau(4.5f64.ln())).unwrap(), 0.0, epsilon = 1e-10);
        for t in [0.0, 0.7, 3.0] {
            assert_eq!(concurrence_c2(&BellPoint::origin(), tau(t)).unwrap(), 0.0);
        }
    }

    #[test]
    fn branches_are_strict() {
        assert!(matches!(concurrence_c1(&BellPoint::origin(), Tau::ZERO), Err(Error::WrongBranch(_))));
        assert!(matches!(concurrence_c2(&alpha(), Tau::ZERO), Err(Error::WrongBranch(_))));
    }

    #[test]
    fn nondiagonal_examples() {
        assert_abs_diff_eq!(concurrence_nondiagonal(1.0, 0.8, 0.5, Tau::ZERO).unwrap(), 0.8, epsilon = 1e-15);
        for k in [0.1, 0.5, 3.0] {
            assert_eq!(concurrence_nondiagonal(1.0, 0.0, k, tau(0.4)).unwrap(), 0.0);
        }
        assert!(concurrence_nondiagonal(1.0, 0.8, 0.5, tau(0.5859)).unwrap() < 1e-4);
        assert!(matches!(concurrence_nondiagonal(0.5, 0.8, 0.5, Tau::ZERO), Err(Error::InvalidRepresentative(_))));
        assert!(matches!(concurrence_nondiagonal(1.0, 0.8, 0.0, Tau::ZERO), Err(Error::InvalidRepresentative(_))));
    }

    #[test]
    fn nondiagonal_formula_matches_wootters() {
        for &(x0, x1, k) in &[(1.0, 0.8, 0.5), (2.0, -1.5, 0.1), (0.7, 0.7, 2.0)] {
            let init = nondiagonal_xstate(x0, x1, k).unwrap();
            for t in [0.0, 0.2, 0.5, 1.0] {
                let evolved = evolve_xstate(&init, tau(t));
                let w = wootters_concurrence(&evolved.to_density()).unwrap();
                let f = concurrence_nondiagonal(x0, x1, k, tau(t)).unwrap();
                assert_abs_diff_eq!(w, f, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn singlet_evolved_concurrence_is_exact() {
        let singlet = BellPoint::vertex_a().to_xstate();
        for t in [0.0, 0.3, 2.0, 10.0, 40.0] {
            let c = evolved_xstate_concurrence_raw(&singlet, tau(t));
            assert!((c - (-t).exp()).abs() <= 1e-15 * (-t).exp().max(1e-300) * 4.0, "{t}: {c}");
        }
    }

    #[test]
    fn closed_forms_match_wootters_on_evolved_points() {
        let points = [
            alpha(),
            BellPoint::new(0.8, -0.8, 0.8).unwrap(),
            BellPoint::new(-0.2, -0.6, -0.5).unwrap(),
            BellPoint::new(0.1, -0.6, 0.4).unwrap(),
            BellPoint::new(0.9, 0.7, -0.65).unwrap(),
        ];
        for p in points {
            for t in [0.0, 0.1, 0.5, 1.3, 4.0] {
                let rho = evolve_bell_point(&p, tau(t)).to_density();
                let w = wootters_concurrence(&rho).unwrap();
                assert_abs_diff_eq!(w, bell_concurrence(&p, tau(t)), epsilon = 1e-9);
                assert_abs_diff_eq!(w, xstate_concurrence_raw(&evolve_bell_point(&p, tau(t))).max(0.0), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn companion_route_agrees_on_generic_state() {
        // full-rank X-state plus a small generic perturbation
        let mut r = XStateParams::from_array([1.0, -0.6, -0.5, -0.3, 0.1, -0.05]).unwrap().to_rmatrix().entries().to_owned();
        r[(1, 2)] = 0.05;
        r[(2, 1)] = -0.04;
        r[(0, 1)] = 0.03;
        let rho = density_from_r(&RMatrix::new(r).unwrap());
        rho.check_physical().unwrap();
        let a = wootters_concurrence(&rho).unwrap();
        let b = wootters_concurrence_companion(&rho).unwrap();
        assert!(a > 0.0);
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }

    #[test]
    fn scaling_covariance() {
        let rho = bell_point_to_density(&alpha());
        let c = wootters_concurrence(&rho).unwrap();
        for s in [0.1, 3.0, 42.0] {
            assert_abs_diff_eq!(wootters_concurrence(&rho.scaled(s)).unwrap(), s * c, epsilon = 1e-9 * s);
        }
    }

    #[test]
    fn rejects_unphysical_input() {
        let m = CMatrix4::from_diagonal(&[0.6, 0.6, 0.0, -0.2].map(|v| Complex64::new(v, 0.0)).into());
        let rho = DensityMatrix::from_raw(m, false);
        assert!(matches!(wootters_concurrence(&rho), Err(Error::SpectrumNegative(_))));
        let mut m = CMatrix4::identity().scale(0.25);
        m[(0, 1)] = Complex64::new(0.0, 0.1);
        let rho = DensityMatrix::from_raw(m, false);
        assert!(matches!(wootters_concurrence(&rho), Err(Error::SpectrumNotReal { .. })));
    }
}
