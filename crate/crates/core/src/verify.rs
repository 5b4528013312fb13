//! Seeded self-checks of the analytic layer against the integrator, of the
//! death-time formulas against each other, and of the classifier against
//! the closed-form concurrence.
//!
//! Samples are drawn sequentially from one ChaCha8 stream per suite and
//! evaluated in parallel; results are collected in sample order, so a
//! report depends only on the seed and the counts.

use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::dynamics::{evolve_xstate, Tau};
use crate::entanglement::{
    bell_concurrence_raw, concurrence_nondiagonal_raw, evolved_xstate_concurrence_raw, wootters_concurrence,
};
use crate::error::Result;
use crate::esd::{classify_bell_point, DynamicalClass};
use crate::format::fmt_sig;
use crate::lindblad::{integrate_checkpoints, IntegratorConfig};
use crate::sampling::{self, Branch};
use crate::sdt::{sdt_closed_form, sdt_geometric, sdt_nondiagonal, sdt_numeric, NUMERIC_TAU_MAX};
use crate::state::{is_separable_bell, BellPoint};

pub const ORACLE_TAUS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
pub const STATE_TOL: f64 = 1e-7;
pub const CONCURRENCE_TOL: f64 = 1e-6;
pub const SDT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub oracle_states: usize,
    pub esd_points: usize,
    pub nondiagonal: usize,
    pub partition_points: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Self {
            oracle_states: 1_000,
            esd_points: 10_000,
            nondiagonal: 1_000,
            partition_points: 100_000,
        }
    }
}

impl Counts {
    /// The same count for every suite.
    pub fn uniform(n: usize) -> Self {
        Self {
            oracle_states: n,
            esd_points: n,
            nondiagonal: n,
            partition_points: n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub metrics: Vec<(&'static str, f64)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn line(&self) -> String {
        let mut s = format!("suite={} checked={} failures={}", self.name, self.checked, self.failures);
        for (k, v) in &self.metrics {
            s.push_str(&format!(" {k}={}", fmt_sig(*v, 3)));
        }
        s.push_str(if self.passed() { " status=pass" } else { " status=FAIL" });
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("generator=ChaCha8 seed={}\n", self.seed);
        for s in &self.suites {
            out.push_str(&s.line());
            out.push('\n');
        }
        out.push_str(if self.passed() { "overall=pass\n" } else { "overall=FAIL\n" });
        out
    }
}

fn stream(seed: u64, suite: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Closed-form X-state evolution and concurrence against RK4 and Wootters.
pub fn oracle_suite(seed: u64, states: usize) -> SuiteReport {
    let mut rng = stream(seed, 1);
    let samples: Vec<_> = (0..states).map(|_| sampling::xstate(&mut rng)).collect();
    let taus: Vec<Tau> = ORACLE_TAUS.iter().map(|&t| Tau::new(t).expect("positive")).collect();
    let per_state: Vec<Option<(f64, f64)>> = samples
        .par_iter()
        .map(|x| {
            let oracle = integrate_checkpoints(&x.to_density(), &taus, IntegratorConfig::default()).ok()?;
            let mut state_diff: f64 = 0.0;
            let mut conc_diff: f64 = 0.0;
            for (tau, rho) in taus.iter().zip(&oracle) {
                let analytic = evolve_xstate(x, *tau);
                let diff = (analytic.to_density().entries() - rho.entries()).map(|z| z.norm()).max();
                state_diff = state_diff.max(diff);
                let closed = evolved_xstate_concurrence_raw(x, *tau).max(0.0);
                conc_diff = conc_diff.max((closed - wootters_concurrence(rho).ok()?).abs());
            }
            Some((state_diff, conc_diff))
        })
        .collect();
    let mut failures = 0;
    let (mut max_state, mut max_conc) = (0.0f64, 0.0f64);
    for r in per_state {
        match r {
            Some((s, c)) => {
                max_state = max_state.max(s);
                max_conc = max_conc.max(c);
                if s > STATE_TOL || c > CONCURRENCE_TOL {
                    failures += 1;
                }
            }
            None => failures += 1,
        }
    }
    SuiteReport {
        name: "oracle_equivalence",
        checked: states,
        failures,
        metrics: vec![("max_state_diff", max_state), ("max_concurrence_diff", max_conc)],
    }
}

fn horizon() -> Tau {
    Tau::new(NUMERIC_TAU_MAX).expect("positive")
}

/// Largest pairwise relative gap between the three death-time routes.
pub fn bell_sdt_gap(p: &BellPoint) -> Result<f64> {
    let closed = sdt_closed_form(p).tau_star.ok_or(crate::Error::NotEsd)?;
    let geometric = sdt_geometric(p)?.tau_star.ok_or(crate::Error::NotEsd)?;
    let numeric = sdt_numeric(|t| bell_concurrence_raw(p, Tau::new(t).expect("scan time")), horizon())?
        .tau_star
        .ok_or(crate::Error::NotEsd)?;
    Ok(relative_gap(closed, geometric)
        .max(relative_gap(closed, numeric))
        .max(relative_gap(geometric, numeric)))
}

/// Relative gap between the closed non-diagonal death time and bisection.
pub fn nondiagonal_sdt_gap(x0: f64, x1: f64, k: f64) -> Result<f64> {
    let closed = sdt_nondiagonal(x0, x1, k)?.tau_star.ok_or(crate::Error::NotEsd)?;
    let numeric = sdt_numeric(
        |t| concurrence_nondiagonal_raw(x0, x1, k, Tau::new(t).expect("scan time")).expect("valid representative"),
        horizon(),
    )?
    .tau_star
    .ok_or(crate::Error::NotEsd)?;
    if !(closed.is_finite() && closed > 0.0) {
        return Err(crate::Error::NotEsd);
    }
    Ok(relative_gap(closed, numeric))
}

/// Closed, geometric and bisected death times on random ESD points of both
/// branches and on random non-diagonal representatives.
pub fn formula_suite(seed: u64, esd_points: usize, nondiagonal: usize) -> SuiteReport {
    let mut rng = stream(seed, 2);
    let points: Vec<BellPoint> = (0..esd_points)
        .map(|i| sampling::esd_point(&mut rng, if i % 2 == 0 { Branch::Ab } else { Branch::Cd }))
        .collect();
    let reps: Vec<_> = (0..nondiagonal).map(|_| sampling::nondiagonal(&mut rng)).collect();
    let bell: Vec<Option<f64>> = points.par_iter().map(|p| bell_sdt_gap(p).ok()).collect();
    let nd: Vec<Option<f64>> = reps
        .par_iter()
        .map(|&(x0, x1, k)| nondiagonal_sdt_gap(x0, x1, k).ok())
        .collect();
    let tally = |gaps: &[Option<f64>]| {
        gaps.iter().fold((0usize, 0.0f64), |(fail, worst), g| match g {
            Some(v) => (fail + usize::from(*v > SDT_REL_TOL), worst.max(*v)),
            None => (fail + 1, worst),
        })
    };
    let (bell_fail, bell_worst) = tally(&bell);
    let (nd_fail, nd_worst) = tally(&nd);
    SuiteReport {
        name: "formula_equivalence",
        checked: esd_points + nondiagonal,
        failures: bell_fail + nd_fail,
        metrics: vec![("max_rel_gap_bell", bell_worst), ("max_rel_gap_nondiagonal", nd_worst)],
    }
}

/// Class implied by the closed-form concurrence: entangled at τ = 0, and
/// still entangled at the numeric horizon for EAD.
pub fn class_from_concurrence(p: &BellPoint) -> DynamicalClass {
    let start = bell_concurrence_raw(p, Tau::ZERO);
    if start <= 0.0 {
        DynamicalClass::Separable
    } else if bell_concurrence_raw(p, horizon()) > 0.0 {
        DynamicalClass::Ead
    } else {
        DynamicalClass::Esd
    }
}

/// Whether `p` is within `tol` of vertex C or D.
pub fn near_c_or_d(p: &BellPoint, tol: f64) -> bool {
    [BellPoint::vertex_c(), BellPoint::vertex_d()].iter().any(|v| {
        v.coords()
            .iter()
            .zip(p.coords())
            .all(|(a, b)| (a - b).abs() <= tol)
    })
}

/// Classifier against the concurrence limits on uniform tetrahedron
/// samples; EAD with `x3 ≥ 0` is allowed only at C and D.
pub fn partition_suite(seed: u64, points: usize) -> SuiteReport {
    let mut rng = stream(seed, 3);
    let samples: Vec<BellPoint> = (0..points).map(|_| sampling::tetrahedron_point(&mut rng)).collect();
    let verdicts: Vec<(DynamicalClass, bool)> = samples
        .par_iter()
        .map(|p| {
            let class = classify_bell_point(p);
            let separable_ok = (class == DynamicalClass::Separable) == is_separable_bell(p);
            let limit_ok = class == class_from_concurrence(p);
            let cd_ok = !(p.x3() >= 0.0 && class == DynamicalClass::Ead) || near_c_or_d(p, 1e-12);
            (class, separable_ok && limit_ok && cd_ok)
        })
        .collect();
    let count = |c| verdicts.iter().filter(|(v, _)| *v == c).count() as f64;
    SuiteReport {
        name: "partition",
        checked: points,
        failures: verdicts.iter().filter(|(_, ok)| !ok).count(),
        metrics: vec![
            ("separable", count(DynamicalClass::Separable)),
            ("esd", count(DynamicalClass::Esd)),
            ("ead", count(DynamicalClass::Ead)),
        ],
    }
}

pub fn run(seed: u64, counts: Counts) -> VerifyReport {
    VerifyReport {
        seed,
        suites: vec![
            oracle_suite(seed, counts.oracle_states),
            formula_suite(seed, counts.esd_points, counts.nondiagonal),
            partition_suite(seed, counts.partition_points),
        ],
    }
}
