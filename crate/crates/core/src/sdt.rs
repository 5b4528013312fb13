//! Sudden-death time τ* = γt*.
//!
//! Three independent routes: the closed coordinate forms, the same times
//! rewritten through the distances of [`crate::esd::distances`], and a
//! bracketing + bisection search on a raw concurrence curve.

use serde::Serialize;

use crate::dynamics::Tau;
use crate::entanglement::check_representative;
use crate::error::{Error, Result};
use crate::esd::{classify_bell_point, classify_nondiagonal, distances, DynamicalClass};
use crate::lorentz::normalize_cone_point;
use crate::state::{BellPoint, ConePoint};

/// Horizon of the numeric search. Raw concurrences decay like `e^{−τ}`, so
/// a root beyond it would need initial values below double resolution.
pub const NUMERIC_TAU_MAX: f64 = 60.0;
/// Uniform samples used to bracket the first sign change.
pub const SCAN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdtResult {
    pub class: DynamicalClass,
    /// Present iff `class` is ESD.
    pub tau_star: Option<f64>,
}

impl SdtResult {
    fn esd(tau_star: f64) -> Self {
        assert!(tau_star.is_finite() && tau_star >= 0.0, "death time {tau_star}");
        Self {
            class: DynamicalClass::Esd,
            tau_star: Some(tau_star),
        }
    }

    fn without_death(class: DynamicalClass) -> Self {
        debug_assert_ne!(class, DynamicalClass::Esd);
        Self {
            class,
            tau_star: None,
        }
    }
}

/// Death time from the coordinates.
///
/// For `x3 < 0`: `τ* = ln[−(1 + X3)/(√((X1 + X2)² − 4X3) − 2)]`.
/// For `x3 ≥ 0`: the root `y = e^τ` of `y|X1 − X2| + 1 − 2y + X3 = 0`,
/// `τ* = ln[(1 + X3)/(2 − |X1 − X2|)]`.
pub fn sdt_closed_form(p: &BellPoint) -> SdtResult {
    let class = classify_bell_point(p);
    if class != DynamicalClass::Esd {
        return SdtResult::without_death(class);
    }
    let [x1, x2, x3] = p.coords();
    if x3 < 0.0 {
        let a = (x1 + x2).powi(2) - 4.0 * x3;
        let root = a.sqrt();
        let numerator = -(1.0 + x3);
        // √a − 2 = (a − 4)/(√a + 2)
        let denominator = (a - 4.0) / (root + 2.0);
        assert!(numerator < 0.0 && denominator < 0.0, "ESD point {p:?} outside the log domain");
        // ratio − 1 = (1 − X3 − √a)/(√a − 2)
        SdtResult::esd(((1.0 - x3 - root) / denominator).ln_1p())
    } else {
        let gap = 2.0 - (x1 - x2).abs();
        assert!(gap > 0.0, "ESD point {p:?} on the |x1 − x2| = 2 planes");
        SdtResult::esd(((x3 - 1.0 + (x1 - x2).abs()) / gap).ln_1p())
    }
}

/// `ln[(½D_P − 1 + √(1 − D_P − D_1))/(√(1 − D_1) − 1)]`, evaluated without
/// cancellation as `ln(1 + D_P²/(4D_1)) + ln(1 + D_P(1/(u+v) + ½)/(v + 1 − ½D_P))`
/// with `u = √(1 − D_1)`, `v = √(1 − D_P − D_1)`.
pub fn sdt_from_plane_and_surface(d_p: f64, d_1: f64) -> f64 {
    let u = (1.0 - d_1).sqrt();
    let v = (1.0 - d_p - d_1).max(0.0).sqrt();
    (0.25 * d_p * d_p / d_1).ln_1p() + (d_p * (1.0 / (u + v) + 0.5) / (v + 1.0 - 0.5 * d_p)).ln_1p()
}

/// `ln[D_P/D_2 + 1]`.
pub fn sdt_from_plane_and_cd(d_p: f64, d_2: f64) -> f64 {
    (d_p / d_2).ln_1p()
}

/// Death time from the distances to the separability boundary and to the
/// EAD boundary of the point's branch.
pub fn sdt_geometric(p: &BellPoint) -> Result<SdtResult> {
    if classify_bell_point(p) != DynamicalClass::Esd {
        return Err(Error::NotEsd);
    }
    let d = distances(p);
    let tau = if p.x3() < 0.0 {
        sdt_from_plane_and_surface(d.d_p, d.d_1)
    } else {
        sdt_from_plane_and_cd(d.d_p, d.d_2)
    };
    Ok(SdtResult::esd(tau))
}

/// Death time of a non-diagonal representative: `τ* = ln y` with `y ≥ 1`
/// the admissible root of
/// `(X1² − X0(2k + X0))y² + 2X0(k + X0)y − X0² = 0`.
pub fn sdt_nondiagonal(x0: f64, x1: f64, k: f64) -> Result<SdtResult> {
    check_representative(x0, x1, k)?;
    let class = classify_nondiagonal(x0, x1, k)?;
    if class != DynamicalClass::Esd {
        return Ok(SdtResult::without_death(class));
    }
    let a = x1 * x1 - x0 * (2.0 * k + x0);
    assert!(a < 0.0, "leading coefficient {a} must be negative");
    // discriminant = 4X0²(k² + X1²); roots X0((k + X0) ∓ r)/|a|
    let r = k.hypot(x1);
    let upper = x0 * (k + x0 + r) / -a;
    let lower = x0 * (k + x0 - r) / -a;
    assert!(upper >= 1.0 && lower < 1.0, "roots {lower}, {upper} do not straddle y = 1");
    // upper − 1 = X1²(X0/(r + k) + 1)/|a|
    let excess = x1 * x1 * (x0 / (r + k) + 1.0) / -a;
    Ok(SdtResult::esd(excess.ln_1p()))
}

/// Death time of a diagonal cone representative; depends only on the
/// normalized point.
pub fn sdt_cone(c: &ConePoint) -> Result<SdtResult> {
    Ok(sdt_closed_form(&normalize_cone_point(c)?))
}

/// First zero of `raw_concurrence` on `(0, τ_max]`.
///
/// Scans [`SCAN_SAMPLES`] uniform samples for the first nonpositive value,
/// then bisects the bracket down to adjacent floating-point numbers. No sign
/// change is reported as EAD, which requires `τ_max ≥ 60`.
pub fn sdt_numeric<F>(raw_concurrence: F, tau_max: Tau) -> Result<SdtResult>
where
    F: Fn(f64) -> f64,
{
    let c0 = raw_concurrence(0.0);
    if c0.is_nan() || c0 <= 0.0 {
        return Err(Error::NoInitialEntanglement(c0));
    }
    let t_max = tau_max.value();
    let dt = t_max / SCAN_SAMPLES as f64;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=SCAN_SAMPLES {
        let t = if k == SCAN_SAMPLES { t_max } else { k as f64 * dt };
        if raw_concurrence(t) <= 0.0 {
            hi = Some(t);
            break;
        }
        lo = t;
    }
    let Some(mut hi) = hi else {
        if t_max < NUMERIC_TAU_MAX {
            return Err(Error::InvalidArgument(format!(
                "no sign change up to tau = {t_max}; EAD needs a horizon of at least {NUMERIC_TAU_MAX}"
            )));
        }
        return Ok(SdtResult::without_death(DynamicalClass::Ead));
    };
    for _ in 0..2000 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if raw_concurrence(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SdtResult::esd(lo + 0.5 * (hi - lo)))
}
