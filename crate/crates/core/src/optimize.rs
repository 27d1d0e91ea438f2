//! Optimal violation: closed forms for the best measurement frame, the
//! fixed-axis strategy, a polar-angle-only CHSH expression, and numeric
//! maximization of S under any subset of the three defining constraints.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::{self, DegenerateGeometry, DEGENERACY_TOL};
use crate::quantum::{
    bloch_vector, chsh_vector, correlation_matrix, Concurrence, MeasurementVector,
};
use crate::solvers::{golden_section_max, multistart_maximize, LocalSearch, MultiStartOutcome};
use crate::vec3::Vec3;

/// Default number of multi-start seeds for constrained searches.
pub const DEFAULT_STARTS: usize = 32;

/// Objective value reported for parameter points whose constrained
/// vectors are undefined; far below any attainable S.
const DEGENERATE_PENALTY: f64 = -1e3;

/// Which of the three defining conditions a search enforces exactly.
///
/// `qt`: the joint outcome Q=1, T=1 never occurs. `qs`: S=1 forces Q=1.
/// `rt`: R=1 forces T=1. All three together are the full scenario; none
/// is the unconstrained CHSH maximization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintSubset {
    pub qt: bool,
    pub qs: bool,
    pub rt: bool,
}

impl ConstraintSubset {
    pub const NONE: ConstraintSubset = ConstraintSubset {
        qt: false,
        qs: false,
        rt: false,
    };

    pub const ALL: ConstraintSubset = ConstraintSubset {
        qt: true,
        qs: true,
        rt: true,
    };

    pub fn new(qt: bool, qs: bool, rt: bool) -> Self {
        ConstraintSubset { qt, qs, rt }
    }

    pub fn active_count(self) -> usize {
        self.qt as usize + self.qs as usize + self.rt as usize
    }

    pub fn is_subset_of(self, other: ConstraintSubset) -> bool {
        (!self.qt || other.qt) && (!self.qs || other.qs) && (!self.rt || other.rt)
    }

    /// All eight subsets, ordered by how many conditions are active.
    pub fn enumerate() -> [ConstraintSubset; 8] {
        [
            Self::NONE,
            Self::new(true, false, false),
            Self::new(false, true, false),
            Self::new(false, false, true),
            Self::new(true, true, false),
            Self::new(true, false, true),
            Self::new(false, true, true),
            Self::ALL,
        ]
    }

    /// Canonical label: `none`, `all`, or the active conditions joined
    /// by commas in q,t / q,s / r,t order.
    pub fn label(self) -> &'static str {
        match (self.qt, self.qs, self.rt) {
            (false, false, false) => "none",
            (true, false, false) => "qt",
            (false, true, false) => "qs",
            (false, false, true) => "rt",
            (true, true, false) => "qt,qs",
            (true, false, true) => "qt,rt",
            (false, true, true) => "qs,rt",
            (true, true, true) => "all",
        }
    }
}

impl fmt::Display for ConstraintSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ConstraintSubset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "none" => return Ok(Self::NONE),
            "all" => return Ok(Self::ALL),
            _ => {}
        }
        let mut subset = Self::NONE;
        for part in s.split(',') {
            match part.trim() {
                "qt" => subset.qt = true,
                "qs" => subset.qs = true,
                "rt" => subset.rt = true,
                other => {
                    return Err(format!(
                        "unknown constraint `{other}` (expected none, qt, qs, rt, or a \
                         comma-separated combination, or all)"
                    ))
                }
            }
        }
        Ok(subset)
    }
}

/// Outcome of a numeric maximization of S (or w for the polar-angle
/// search).
///
/// `multistart_spread` is max minus min over the values the individual
/// starts settled at; zero spread means every start found the same
/// optimum. `degenerate` marks boundary concurrences (0 or 1) where the
/// scenario itself carries no violation.
#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub subset: ConstraintSubset,
    pub best_value: f64,
    pub argmax: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub multistart_spread: f64,
    pub degenerate: bool,
}

// ---- closed forms for the optimal frame ----

/// Largest violation probability attainable at this concurrence:
/// C^2 (1 - C) / (2 - C)^2. Vanishes at both C = 0 and C = 1.
pub fn w_opt_closed(c: Concurrence) -> f64 {
    let cv = c.value();
    cv * cv * (1.0 - cv) / ((2.0 - cv) * (2.0 - cv))
}

/// Polar angle of the optimal q: arccos(-sqrt((1-C)/(1+C))), in
/// [pi/2, pi]. The separable limit C -> 0 gives pi (q along -z).
/// Substituted into the focal lengths this angle makes tau = C.
pub fn theta_opt(c: Concurrence) -> f64 {
    let cv = c.value();
    (-((1.0 - cv) / (1.0 + cv)).sqrt()).acos()
}

/// Optimal measurement direction at azimuth `phi`:
/// (sqrt(2C) cos phi, sqrt(2C) sin phi, -sqrt(1-C)) / sqrt(1+C).
/// The violation it yields does not depend on phi.
pub fn q_opt(c: Concurrence, phi: f64) -> MeasurementVector {
    let cv = c.value();
    let planar = (2.0 * cv / (1.0 + cv)).sqrt();
    let v = Vec3::new(
        planar * phi.cos(),
        planar * phi.sin(),
        -((1.0 - cv) / (1.0 + cv)).sqrt(),
    );
    MeasurementVector::new(v).expect("unit by construction")
}

/// Frame built on the optimal q. Self-dual: t coincides with q and s
/// with r, so only two distinct directions are measured.
pub fn optimal_frame(c: Concurrence, phi: f64) -> Result<frame::MeasurementFrame> {
    if let Some(kind) = boundary_degeneracy(c) {
        return Err(Error::DegenerateGeometry(kind));
    }
    frame::build_frame(q_opt(c, phi), c)
}

/// Concurrence maximizing `w_opt_closed`: 3 - sqrt(5).
pub fn optimal_concurrence() -> f64 {
    3.0 - 5f64.sqrt()
}

/// The two length ratios of the optimal frame, plus the lengths
/// themselves.
///
/// `twominus_tau_over_tau` = (2 - C)/C for every concurrence, and the
/// identity tau/xi = (2 - tau)/tau makes the two ratios equal. At
/// C = 3 - sqrt(5) both are the golden ratio.
#[derive(Clone, Copy, Debug)]
pub struct GoldenRatioReport {
    pub tau_over_xi: f64,
    pub twominus_tau_over_tau: f64,
    pub xi: f64,
    pub tau: f64,
}

pub fn golden_ratio_report(c: Concurrence) -> Result<GoldenRatioReport> {
    if let Some(kind) = boundary_degeneracy(c) {
        return Err(Error::DegenerateGeometry(kind));
    }
    let lengths = frame::lengths(q_opt(c, 0.0), c)?;
    Ok(GoldenRatioReport {
        tau_over_xi: lengths.tau / lengths.xi,
        twominus_tau_over_tau: (2.0 - lengths.tau) / lengths.tau,
        xi: lengths.xi,
        tau: lengths.tau,
    })
}

// ---- fixed measurement axis ----

/// Violation probability when q is pinned to the x axis:
/// (C^2 - C^4) / (4 - 2 C^2).
pub fn w_fixed_q_x(c: Concurrence) -> f64 {
    let c2 = c.squared();
    (c2 - c2 * c2) / (4.0 - 2.0 * c2)
}

/// Where and by how much the fixed-axis strategy falls short of the
/// optimum.
#[derive(Clone, Copy, Debug)]
pub struct FixedAxisGap {
    pub concurrence: f64,
    pub gap: f64,
}

/// Maximum of w_opt_closed - w_fixed_q_x over the concurrence range.
/// The gap vanishes at both endpoints and has a single interior peak.
pub fn fixed_q_gap_max() -> FixedAxisGap {
    let gap = |cv: f64| {
        let c = Concurrence::new(cv).expect("interior of valid range");
        w_opt_closed(c) - w_fixed_q_x(c)
    };
    let (concurrence, value) = golden_section_max(gap, 0.2, 0.98, 1e-10);
    FixedAxisGap {
        concurrence,
        gap: value,
    }
}

// ---- polar-angle closed form ----

/// CHSH value of the constructed frame as a function of the polar angle
/// of q alone (azimuth drops out). Degenerate lines (sin theta = 0, or a
/// separable state) give exactly 2.
pub fn chsh_theta_closed(theta: f64, c: Concurrence) -> f64 {
    let c2 = c.squared();
    let (sin, cos) = theta.sin_cos();
    if c.value() < DEGENERACY_TOL || sin.abs() < 1e-15 {
        return 2.0;
    }
    let d = c.bloch_z();
    let weight = c2 * cos * cos + sin * sin;
    let inner = (2.0 - c2 - c2 * c2) * cos + 2.0 * d;
    let chord = 2.0 - c2 + 2.0 * d * cos;
    2.0 / weight * (c2 + d * sin * sin * inner / chord)
}

/// Superseded algebraic form of the same expression. It does not
/// reproduce the vector pipeline; it is kept only so the verification
/// report can quantify its deviation instead of silently dropping it.
pub(crate) fn chsh_theta_closed_uncorrected(theta: f64, c: Concurrence) -> f64 {
    let c2 = c.squared();
    let (sin, cos) = theta.sin_cos();
    if c.value() < DEGENERACY_TOL || sin.abs() < 1e-15 {
        return 2.0;
    }
    let d = c.bloch_z();
    let weight = c2 * cos * cos + sin * sin;
    let inner = (2.0 - c2 - c2 * c2) * cos + 2.0 * d;
    let shifted = (2.0 - c2) * cos + 2.0 * (1.0 + c2).sqrt();
    let chord = (c2 * sin * sin + shifted * shifted).sqrt();
    2.0 / weight * (c2 + 2.0 * d * sin * sin * inner / chord)
}

// ---- numeric searches ----

/// Maximizes w over the polar angle of q with azimuth fixed at zero,
/// bracketing on [pi/2, pi] and refining by golden section to 1e-10.
/// Probabilities come from the operator route, so the result is an
/// independent check on `w_opt_closed` and `theta_opt`.
pub fn optimize_hardy_numeric(c: Concurrence) -> Result<OptimizationResult> {
    if let Some(kind) = boundary_degeneracy(c) {
        return Err(Error::DegenerateGeometry(kind));
    }
    let evals = Cell::new(0usize);
    let w_of_theta = |theta: f64| {
        evals.set(evals.get() + 1);
        let q = MeasurementVector::from_angles(theta, 0.0);
        frame::violation_probability(q, c).unwrap_or(f64::NEG_INFINITY)
    };
    let (theta, w) = golden_section_max(w_of_theta, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 1e-10);
    Ok(OptimizationResult {
        subset: ConstraintSubset::ALL,
        best_value: w,
        argmax: vec![theta],
        iterations: evals.get(),
        converged: true,
        multistart_spread: 0.0,
        degenerate: false,
    })
}

/// Maximizes S over the measurement vectors left free by `subset`;
/// constrained vectors are rebuilt from the free ones at every step.
///
/// Free vectors in q, r, s, t order contribute two angles each, except
/// the globally pinned azimuth of q (counter-rotating the two sides
/// leaves S unchanged, so one azimuth is redundant). Deterministic for a
/// fixed (starts, seed).
pub fn optimize_constrained(
    c: Concurrence,
    subset: ConstraintSubset,
    starts: usize,
    seed: u64,
) -> OptimizationResult {
    let k = correlation_matrix(c);
    let objective = |params: &[f64]| match vectors_from_params(params, c, subset) {
        Some((q, r, s, t)) => chsh_vector(q, r, s, t, &k),
        None => DEGENERATE_PENALTY,
    };

    let dim = 1 + 2 * (3 - subset.active_count());
    let mut lo = vec![0.0; dim];
    let mut hi = vec![std::f64::consts::PI; dim];
    for i in (1..dim).step_by(2) {
        // Azimuth slots.
        lo[i + 1] = -std::f64::consts::PI;
        hi[i + 1] = std::f64::consts::PI;
    }

    let outcome: MultiStartOutcome =
        multistart_maximize(&objective, &lo, &hi, starts.max(1), seed, LocalSearch::default());

    let result = OptimizationResult {
        subset,
        best_value: outcome.best.value,
        argmax: outcome.best.x,
        iterations: outcome.total_iterations,
        converged: outcome.best.converged,
        multistart_spread: outcome.spread,
        degenerate: boundary_degeneracy(c).is_some(),
    };
    debug_assert!(result.best_value <= 2.0 * std::f64::consts::SQRT_2 + 1e-9);
    result
}

/// Optimal S when exactly the qt and qs conditions are enforced:
/// 2 (C^2 + sqrt(1 - C^2)). Equals 2 at both endpoints and peaks at 2.5
/// for C = sqrt(3)/2.
pub fn two_constraint_closed(c: Concurrence) -> f64 {
    2.0 * (c.squared() + c.bloch_z())
}

fn boundary_degeneracy(c: Concurrence) -> Option<DegenerateGeometry> {
    if c.value() <= DEGENERACY_TOL {
        Some(DegenerateGeometry::Separable)
    } else if c.value() >= 1.0 - DEGENERACY_TOL {
        Some(DegenerateGeometry::MaximallyEntangled)
    } else {
        None
    }
}

/// Rebuilds (q, r, s, t) from the packed angle parameters. Returns None
/// when a constrained vector is undefined at this point (possible only
/// for boundary concurrences).
fn vectors_from_params(
    params: &[f64],
    c: Concurrence,
    subset: ConstraintSubset,
) -> Option<(
    MeasurementVector,
    MeasurementVector,
    MeasurementVector,
    MeasurementVector,
)> {
    let q = MeasurementVector::from_angles(params[0], 0.0);
    let mut i = 1;
    let mut next_free = |free: bool| {
        if free {
            let v = MeasurementVector::from_angles(params[i], params[i + 1]);
            i += 2;
            Some(v)
        } else {
            None
        }
    };
    let r_angles = next_free(!subset.rt);
    let s_angles = next_free(!subset.qs);
    let t_angles = next_free(!subset.qt);
    debug_assert_eq!(i, params.len());

    let t = match t_angles {
        Some(v) => v,
        None => frame::derive_t(q, c).ok()?,
    };
    let s = match s_angles {
        Some(v) => v,
        None => frame::derive_s(q, c).ok()?,
    };
    let r = match r_angles {
        Some(v) => v,
        None => r_certain_of(t, c)?,
    };
    Some((q, r, s, t))
}

/// Direction whose +1 outcome makes T=1 certain, for a given t: the
/// normalization of Kt - a. For the canonical chain t(q) this is exactly
/// the constructed r.
fn r_certain_of(t: MeasurementVector, c: Concurrence) -> Option<MeasurementVector> {
    let v = correlation_matrix(c).apply(t.vec()) - bloch_vector(c);
    MeasurementVector::normalized(v)
}

// ---- small-parameter expansions ----

/// One remainder-bound verdict: `fitted` is the largest ratio of the
/// actual remainder to its leading power observed on the sample grid,
/// and the bound holds while fitted <= cap.
#[derive(Clone, Copy, Debug)]
pub struct TaylorBound {
    pub fitted: f64,
    pub cap: f64,
}

impl TaylorBound {
    pub fn holds(&self) -> bool {
        self.fitted <= self.cap
    }
}

/// Remainder bounds for the four expansions: both strategies grow as
/// C^2/4 from the separable end and fall off linearly in eps = 1 - C at
/// the maximally entangled end (slope -4 for the optimum, -9/2 for the
/// fixed axis).
#[derive(Clone, Copy, Debug)]
pub struct TaylorReport {
    /// |w_opt - C^2/4| / C^4
    pub small_c_optimal: TaylorBound,
    /// |w_fixed - C^2/4| / C^4
    pub small_c_fixed_axis: TaylorBound,
    /// |w_opt(1-eps) - (eps - 4 eps^2)| / eps^3
    pub near_one_optimal: TaylorBound,
    /// |w_fixed(1-eps) - (eps - 9/2 eps^2)| / eps^3
    pub near_one_fixed_axis: TaylorBound,
}

impl TaylorReport {
    pub fn all_hold(&self) -> bool {
        self.small_c_optimal.holds()
            && self.small_c_fixed_axis.holds()
            && self.near_one_optimal.holds()
            && self.near_one_fixed_axis.holds()
    }
}

/// Measures the expansion remainders on grids (0, c_small] and
/// (0, eps]. Both arguments must lie in (0, 0.05].
pub fn taylor_checks(c_small: f64, eps: f64) -> Result<TaylorReport> {
    for (what, value) in [("c_small", c_small), ("eps", eps)] {
        if !(value > 0.0 && value <= 0.05) {
            return Err(Error::OutOfRange {
                what,
                value,
                range: "(0, 0.05]",
            });
        }
    }
    const GRID: usize = 50;
    let mut report = TaylorReport {
        small_c_optimal: TaylorBound {
            fitted: 0.0,
            cap: 0.08,
        },
        small_c_fixed_axis: TaylorBound {
            fitted: 0.0,
            cap: 0.15,
        },
        near_one_optimal: TaylorBound {
            fitted: 0.0,
            cap: 9.0,
        },
        near_one_fixed_axis: TaylorBound {
            fitted: 0.0,
            cap: 14.0,
        },
    };
    for i in 1..=GRID {
        let cv = c_small * i as f64 / GRID as f64;
        let c = Concurrence::new(cv)?;
        let quadratic = cv * cv / 4.0;
        let quartic = cv * cv * cv * cv;
        let r_opt = (w_opt_closed(c) - quadratic).abs() / quartic;
        let r_fix = (w_fixed_q_x(c) - quadratic).abs() / quartic;
        report.small_c_optimal.fitted = report.small_c_optimal.fitted.max(r_opt);
        report.small_c_fixed_axis.fitted = report.small_c_fixed_axis.fitted.max(r_fix);

        let e = eps * i as f64 / GRID as f64;
        let c = Concurrence::new(1.0 - e)?;
        let cubic = e * e * e;
        let r_opt = (w_opt_closed(c) - (e - 4.0 * e * e)).abs() / cubic;
        let r_fix = (w_fixed_q_x(c) - (e - 4.5 * e * e)).abs() / cubic;
        report.near_one_optimal.fitted = report.near_one_optimal.fitted.max(r_opt);
        report.near_one_fixed_axis.fitted = report.near_one_fixed_axis.fitted.max(r_fix);
    }
    Ok(report)
}
