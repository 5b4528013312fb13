//! Brute-force integration of the two-qubit amplitude-damping master
//! equation.
//!
//! Serves as the independent oracle for the closed-form evolution and
//! concurrence formulas: it knows nothing about X-states or Bell points and
//! works on arbitrary 4×4 density matrices.

use num_complex::Complex64;

use crate::entanglement::{wootters_concurrence, wootters_concurrence_raw, x_block_concurrence_raw};
use crate::error::{Error, Result};
use crate::format::fmt12;
use crate::state::{hermitian_deviation, CMatrix4, DensityMatrix};
use crate::dynamics::Tau;

/// Largest accepted integration step in τ.
pub const MAX_STEP: f64 = 1e-2;

/// Fixed-step classical RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { step: 1e-3 }
    }
}

impl IntegratorConfig {
    pub fn with_step(step: f64) -> Result<Self> {
        let cfg = Self { step };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.step > 0.0 && self.step <= MAX_STEP {
            Ok(())
        } else {
            Err(Error::StepTooLarge(self.step))
        }
    }
}

// Basis index a = 2·q1 + q2; bit value 0 is the excited level.
const QUBIT_MASKS: [usize; 2] = [0b10, 0b01];

fn rhs_matrix(rho: &CMatrix4) -> CMatrix4 {
    let mut out = CMatrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for mask in QUBIT_MASKS {
                let a_ground = a & mask != 0;
                let b_ground = b & mask != 0;
                // σρσ†: both indices must come from the excited level
                if a_ground && b_ground {
                    acc += rho[(a ^ mask, b ^ mask)];
                }
                // −½{σ†σ, ρ}: σ†σ projects on the excited level
                let weight = f64::from(u8::from(!a_ground)) + f64::from(u8::from(!b_ground));
                acc -= rho[(a, b)] * (0.5 * weight);
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// `dρ/dτ = ½ Σ_n (2σ⁽ⁿ⁾ρσ⁽ⁿ⁾† − σ⁽ⁿ⁾†σ⁽ⁿ⁾ρ − ρσ⁽ⁿ⁾†σ⁽ⁿ⁾)` with
/// `σ⁽¹⁾ = σ⊗1`, `σ⁽²⁾ = 1⊗σ`.
pub fn lindblad_rhs(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_raw(rhs_matrix(rho.entries()), true)
}

fn rk4_step(rho: &CMatrix4, h: f64) -> CMatrix4 {
    let k1 = rhs_matrix(rho);
    let k2 = rhs_matrix(&(rho + k1.scale(0.5 * h)));
    let k3 = rhs_matrix(&(rho + k2.scale(0.5 * h)));
    let k4 = rhs_matrix(&(rho + k3.scale(h)));
    rho + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0)
}

/// Diagnostics collected along an integration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntegrationStats {
    pub steps: usize,
    /// Largest Hermiticity deviation seen before symmetrization.
    pub max_hermitian_deviation: f64,
}

struct Stepper {
    rho: CMatrix4,
    tau: f64,
    h: f64,
    stats: IntegrationStats,
}

impl Stepper {
    fn step(&mut self, h: f64) {
        let next = rk4_step(&self.rho, h);
        let dev = hermitian_deviation(&next);
        self.stats.max_hermitian_deviation = self.stats.max_hermitian_deviation.max(dev);
        self.rho = (next + next.adjoint()).scale(0.5);
        self.stats.steps += 1;
    }

    /// Advances to `target`, landing exactly on it with a final partial step.
    fn advance_to(&mut self, target: f64) {
        let span = target - self.tau;
        if span <= 0.0 {
            return;
        }
        let full = (span / self.h).floor() as usize;
        for _ in 0..full {
            self.step(self.h);
        }
        let rest = span - full as f64 * self.h;
        if rest > 1e-15 {
            self.step(rest);
        }
        self.tau = target;
    }
}

/// Integrates `rho0` to time `tau`.
pub fn integrate(rho0: &DensityMatrix, tau: Tau, cfg: IntegratorConfig) -> Result<DensityMatrix> {
    Ok(integrate_with_stats(rho0, tau, cfg)?.0)
}

pub fn integrate_with_stats(
    rho0: &DensityMatrix,
    tau: Tau,
    cfg: IntegratorConfig,
) -> Result<(DensityMatrix, IntegrationStats)> {
    cfg.validate()?;
    let mut stepper = Stepper {
        rho: *rho0.entries(),
        tau: 0.0,
        h: cfg.step,
        stats: IntegrationStats::default(),
    };
    stepper.advance_to(tau.value());
    Ok((
        DensityMatrix::from_raw(stepper.rho, rho0.is_unnormalized()),
        stepper.stats,
    ))
}

/// States at each of the nondecreasing times `taus`, from one trajectory.
pub fn integrate_checkpoints(
    rho0: &DensityMatrix,
    taus: &[Tau],
    cfg: IntegratorConfig,
) -> Result<Vec<DensityMatrix>> {
    cfg.validate()?;
    if taus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("checkpoint times must be nondecreasing".into()));
    }
    let mut stepper = Stepper {
        rho: *rho0.entries(),
        tau: 0.0,
        h: cfg.step,
        stats: IntegrationStats::default(),
    };
    let mut out = Vec::with_capacity(taus.len());
    for t in taus {
        stepper.advance_to(t.value());
        out.push(DensityMatrix::from_raw(stepper.rho, rho0.is_unnormalized()));
    }
    Ok(out)
}

/// Uniform grid `0, τ_max/(n−1), …, τ_max`.
pub fn uniform_grid(tau_max: Tau, samples: usize) -> Result<Vec<Tau>> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    let dt = tau_max.value() / (samples - 1) as f64;
    (0..samples)
        .map(|k| {
            if k + 1 == samples {
                Ok(tau_max)
            } else {
                Tau::new(k as f64 * dt)
            }
        })
        .collect()
}

/// Concurrence of the integrated state on a uniform τ grid.
pub fn concurrence_trajectory(
    rho0: &DensityMatrix,
    tau_max: Tau,
    samples: usize,
    cfg: IntegratorConfig,
) -> Result<Vec<(f64, f64)>> {
    let grid = uniform_grid(tau_max, samples)?;
    let states = integrate_checkpoints(rho0, &grid, cfg)?;
    grid.iter()
        .zip(&states)
        .map(|(t, rho)| Ok((t.value(), wootters_concurrence(rho)?)))
        .collect()
}

/// Untruncated concurrence of the integrated state on a uniform τ grid.
///
/// X-shaped states stay X-shaped under the integrator, and for them the
/// block formula keeps its sign down to values far below what the general
/// spectral route resolves.
pub fn raw_concurrence_trajectory(
    rho0: &DensityMatrix,
    tau_max: Tau,
    samples: usize,
    cfg: IntegratorConfig,
) -> Result<Vec<(f64, f64)>> {
    let grid = uniform_grid(tau_max, samples)?;
    let states = integrate_checkpoints(rho0, &grid, cfg)?;
    grid.iter()
        .zip(&states)
        .map(|(t, rho)| {
            let raw = match x_block_concurrence_raw(rho.entries()) {
                Some(c) => c,
                None => wootters_concurrence_raw(rho)?,
            };
            Ok((t.value(), raw))
        })
        .collect()
}

/// `tau,concurrence` CSV with twelve significant digits.
pub fn trajectory_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("tau,concurrence\n");
    for (t, c) in rows {
        out.push_str(&fmt12(*t));
        out.push(',');
        out.push_str(&fmt12(*c));
        out.push('\n');
    }
    out
}
