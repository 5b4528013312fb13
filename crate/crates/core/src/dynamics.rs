//! Closed-form amplitude-damping evolution of X-states.
//!
//! Time is the dimensionless product `τ = γt`. Each qubit decays to the
//! ground state `|1⟩` of the lowering operator `σ = [[0,0],[1,0]]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{BellPoint, XStateParams};

/// Dimensionless time `τ = γt`, finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Tau(f64);

impl Tau {
    pub const ZERO: Tau = Tau(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidTau(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// X-state parameters at time `τ`.
///
/// `x0` is conserved, `x1,2` decay as `e^{−τ}`, `x4,5` relax to `−x0`, and
/// `x3 = e^{−2τ}{X0(e^τ − 1)² + X3 − (X4 + X5)(e^τ − 1)}`.
pub fn evolve_xstate(init: &XStateParams, tau: Tau) -> XStateParams {
    let t = tau.value();
    if t == 0.0 {
        return *init;
    }
    let decay = (-t).exp();
    // e^τ − 1 and e^{−τ} − 1 without cancellation for small τ
    let grow_m1 = t.exp_m1();
    let decay_m1 = (-t).exp_m1();
    let XStateParams {
        x0,
        x1,
        x2,
        x3,
        x4,
        x5,
    } = *init;
    XStateParams {
        x0,
        x1: x1 * decay,
        x2: x2 * decay,
        x3: decay * decay * (x0 * grow_m1 * grow_m1 + x3 - (x4 + x5) * grow_m1),
        x4: x0 * decay_m1 + x4 * decay,
        x5: x0 * decay_m1 + x5 * decay,
    }
}

/// Populations and coherences of the evolved X-state, propagated directly
/// rather than recovered from [`evolve_xstate`]. Vanishing populations stay
/// exactly zero, which keeps `√(ρ_ii ρ_jj)` free of rounding noise.
pub fn evolve_entries(init: &XStateParams, tau: Tau) -> ([f64; 4], f64, f64) {
    let ([p0, p1, p2, p3], outer, inner) = init.density_entries();
    let t = tau.value();
    let decay = (-t).exp();
    let loss = -(-t).exp_m1();
    (
        [
            p0 * decay * decay,
            decay * (p1 + p0 * loss),
            decay * (p2 + p0 * loss),
            p3 + (p1 + p2) * loss + p0 * loss * loss,
        ],
        outer * decay,
        inner * decay,
    )
}

/// Evolution of the Bell-diagonal state `(1, x1, x2, x3, 0, 0)`.
pub fn evolve_bell_point(p: &BellPoint, tau: Tau) -> XStateParams {
    evolve_xstate(&p.to_xstate(), tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_params(got: XStateParams, want: [f64; 6], tol: f64) {
        for (g, w) in got.to_array().iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = tol);
        }
    }

    #[test]
    fn direct_entries_match_parameter_evolution() {
        let init = XStateParams::from_array([1.0, 0.3, -0.2, 0.1, 0.25, -0.15]).unwrap();
        for t in [0.0, 0.01, 0.7, 3.0, 12.0] {
            let tau = Tau::new(t).unwrap();
            let (p, o, i) = evolve_entries(&init, tau);
            let (q, o2, i2) = evolve_xstate(&init, tau).density_entries();
            for (a, b) in p.iter().zip(q) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
            }
            assert_abs_diff_eq!(o, o2, epsilon = 1e-15);
            assert_abs_diff_eq!(i, i2, epsilon = 1e-15);
        }
    }

    #[test]
    fn tau_rejects_negative_and_nan() {
        assert!(Tau::new(-1e-9).is_err());
        assert!(Tau::new(f64::NAN).is_err());
        assert!(Tau::new(f64::INFINITY).is_err());
        assert_eq!(Tau::new(0.0).unwrap(), Tau::ZERO);
    }

    #[test]
    fn singlet_at_ln2() {
        let init = XStateParams::from_array([1.0, -1.0, -1.0, -1.0, 0.0, 0.0]).unwrap();
        let got = evolve_xstate(&init, Tau::new(2f64.ln()).unwrap());
        assert_params(got, [1.0, -0.5, -0.5, 0.0, -0.5, -0.5], 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        let init = XStateParams::from_array([1.0, -0.25, -0.25, -0.5, -0.24, -0.24]).unwrap();
        assert_eq!(evolve_xstate(&init, Tau::ZERO), init);
        let p = BellPoint::new(-0.5, -0.7, -0.3).unwrap();
        assert_params(evolve_bell_point(&p, Tau::ZERO), [1.0, -0.5, -0.7, -0.3, 0.0, 0.0], 0.0);
    }

    #[test]
    fn maximally_mixed_at_unit_time() {
        let e = std::f64::consts::E;
        let want = [1.0, 0.0, 0.0, (e - 1.0).powi(2) / (e * e), 1.0 / e - 1.0, 1.0 / e - 1.0];
        let got = evolve_bell_point(&BellPoint::origin(), Tau::new(1.0).unwrap());
        assert_params(got, want, 1e-15);
        assert_abs_diff_eq!(got.x3, 0.399576400, epsilon = 1e-9);
        assert_abs_diff_eq!(got.x4, -0.632120559, epsilon = 1e-9);
    }

    #[test]
    fn singlet_relaxes_to_ground_state() {
        let got = evolve_bell_point(&BellPoint::vertex_b(), Tau::new(40.0).unwrap());
        assert_params(got, [1.0, 0.0, 0.0, 1.0, -1.0, -1.0], 1e-15);
        let (p, _, _) = got.density_entries();
        assert_abs_diff_eq!(p[3], 1.0, epsilon = 1e-15);
    }
}
