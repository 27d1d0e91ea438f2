//! Two-qubit state algebra and the projector-level oracle.
//!
//! The state of concurrence `C`, written in its Schmidt basis with the
//! ordering |00>, |01>, |10>, |11> and the convention sigma_z|0> = +|0>, is
//!
//! ```text
//! psi = sqrt((1 + d)/2) |00>  -  sqrt((1 - d)/2) |11>,    d = sqrt(1 - C^2).
//! ```
//!
//! Both one-party Bloch vectors equal a = (0, 0, d) and the two-party
//! correlation matrix is K = diag(-C, C, 1). Every probability in this
//! module is computed from explicit 4x4 projector algebra; the rest of the
//! crate treats those numbers as ground truth when validating its closed
//! forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Probability below which a conditioning event counts as null.
pub const NULL_EVENT_TOL: f64 = 1e-12;
/// Acceptance window around 1 for the norm of a measurement axis.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Entanglement of the two-qubit pure state; 0 is separable, 1 maximally
/// entangled.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Concurrence(f64);

impl Concurrence {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Concurrence(value))
        } else {
            Err(Error::ConcurrenceOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn squared(self) -> f64 {
        self.0 * self.0
    }

    /// z-component sqrt(1 - C^2) shared by both one-party Bloch vectors.
    pub fn bloch_z(self) -> f64 {
        (1.0 - self.0 * self.0).sqrt()
    }
}

/// Unit direction on the Bloch sphere defining a +/-1-valued spin
/// measurement along it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementVector(Vec3);

impl MeasurementVector {
    /// Accepts `v` as-is when its norm is within [`UNIT_NORM_TOL`] of 1.
    pub fn new(v: Vec3) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() <= UNIT_NORM_TOL {
            Ok(MeasurementVector(v))
        } else {
            Err(Error::NonUnitVector { norm })
        }
    }

    /// Rescales `v` to unit length; `None` when the norm is too small for
    /// the direction to be meaningful.
    pub fn normalized(v: Vec3) -> Option<Self> {
        let norm = v.norm();
        if norm <= 1e-12 {
            None
        } else {
            Some(MeasurementVector(v * (1.0 / norm)))
        }
    }

    /// Spherical angles: theta from +z, phi from +x in the xy plane.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        MeasurementVector(Vec3::new(st * cp, st * sp, ct))
    }

    pub fn x_axis() -> Self {
        MeasurementVector(Vec3::X)
    }

    pub fn z_axis() -> Self {
        MeasurementVector(Vec3::Z)
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    /// Polar angle from +z.
    pub fn theta(self) -> f64 {
        self.0.z.clamp(-1.0, 1.0).acos()
    }

    /// Azimuth from +x; 0 for axis-parallel directions.
    pub fn phi(self) -> f64 {
        if self.0.x == 0.0 && self.0.y == 0.0 {
            0.0
        } else {
            self.0.y.atan2(self.0.x)
        }
    }
}

/// One binary measurement outcome, valued +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Pair of outcomes, `a` for subsystem A and `b` for subsystem B.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutcomePair {
    pub a: Outcome,
    pub b: Outcome,
}

impl OutcomePair {
    pub const PLUS_PLUS: OutcomePair = OutcomePair {
        a: Outcome::Plus,
        b: Outcome::Plus,
    };

    pub fn new(a: Outcome, b: Outcome) -> Self {
        OutcomePair { a, b }
    }
}

/// Which subsystem a measurement acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A single-party measurement event: axis, subsystem, observed outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub side: Side,
    pub axis: MeasurementVector,
    pub outcome: Outcome,
}

impl Measurement {
    pub fn new(side: Side, axis: MeasurementVector, outcome: Outcome) -> Self {
        Measurement { side, axis, outcome }
    }
}

/// Pure two-qubit state as four complex amplitudes over |00>, |01>, |10>,
/// |11>. Normalized by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    amps: [Complex64; 4],
}

impl StateVector {
    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Real expectation <psi| M |psi> of a Hermitian 4x4 operator.
    fn expectation(&self, m: &Mat4) -> f64 {
        let mv = m.apply(&self.amps);
        self.amps
            .iter()
            .zip(mv.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

/// Schmidt-basis state of the given concurrence.
pub fn build_state(c: Concurrence) -> StateVector {
    let d = c.bloch_z();
    let zero = Complex64::new(0.0, 0.0);
    StateVector {
        amps: [
            Complex64::new(((1.0 + d) / 2.0).sqrt(), 0.0),
            zero,
            zero,
            Complex64::new(-(((1.0 - d) / 2.0).sqrt()), 0.0),
        ],
    }
}

/// One-party Bloch vector (0, 0, sqrt(1 - C^2)), identical for both
/// subsystems of the Schmidt-basis state.
pub fn bloch_vector(c: Concurrence) -> Vec3 {
    Vec3::new(0.0, 0.0, c.bloch_z())
}

/// Diagonal two-party correlation matrix K = diag(-C, C, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationMatrix {
    c: f64,
}

impl CorrelationMatrix {
    pub fn diagonal(self) -> [f64; 3] {
        [-self.c, self.c, 1.0]
    }

    /// K v. The Bloch vector is an eigenvector: K a = a.
    pub fn apply(self, v: Vec3) -> Vec3 {
        Vec3::new(-self.c * v.x, self.c * v.y, v.z)
    }
}

pub fn correlation_matrix(c: Concurrence) -> CorrelationMatrix {
    CorrelationMatrix { c: c.value() }
}

/// Probability of observing `outcomes` when measuring `axis_a` on A and
/// `axis_b` on B.
pub fn joint_probability(
    state: &StateVector,
    axis_a: MeasurementVector,
    axis_b: MeasurementVector,
    outcomes: OutcomePair,
) -> f64 {
    let pa = projector(axis_a.vec(), outcomes.a);
    let pb = projector(axis_b.vec(), outcomes.b);
    state.expectation(&kron(&pa, &pb))
}

/// Probability of `target` given `given`.
///
/// For measurements on opposite subsystems this is the joint probability
/// over the conditioning marginal. When both act on the same subsystem the
/// state update rule for projective measurements applies, which reduces to
/// 1 for self-conditioning.
pub fn conditional_probability(
    state: &StateVector,
    given: Measurement,
    target: Measurement,
) -> Result<f64> {
    let pg = projector(given.axis.vec(), given.outcome);
    let marginal = state.expectation(&one_sided(given.side, &pg));
    if marginal <= NULL_EVENT_TOL {
        return Err(Error::ConditioningOnNullEvent {
            marginal,
            threshold: NULL_EVENT_TOL,
        });
    }
    let pt = projector(target.axis.vec(), target.outcome);
    let numerator = if given.side == target.side {
        // Sandwich P_g P_t P_g keeps the number a genuine sequential
        // probability even for non-commuting same-side axes.
        let sandwich = mat2_mul(&pg, &mat2_mul(&pt, &pg));
        state.expectation(&one_sided(given.side, &sandwich))
    } else {
        let (pa, pb) = match given.side {
            Side::A => (&pg, &pt),
            Side::B => (&pt, &pg),
        };
        state.expectation(&kron(pa, pb))
    };
    Ok(numerator / marginal)
}

/// CHSH combination <QS> - <QT> + <RS> + <RT> evaluated through 4x4
/// operator expectations. This is the oracle route.
pub fn chsh_operator(
    state: &StateVector,
    q: MeasurementVector,
    r: MeasurementVector,
    s: MeasurementVector,
    t: MeasurementVector,
) -> f64 {
    let e = |a: MeasurementVector, b: MeasurementVector| {
        state.expectation(&kron(&pauli_dot(a.vec()), &pauli_dot(b.vec())))
    };
    e(q, s) - e(q, t) + e(r, s) + e(r, t)
}

/// Same CHSH combination through the correlation matrix:
/// S = q . K(s - t) + r . K(s + t).
pub fn chsh_vector(
    q: MeasurementVector,
    r: MeasurementVector,
    s: MeasurementVector,
    t: MeasurementVector,
    k: &CorrelationMatrix,
) -> f64 {
    let sv = s.vec();
    let tv = t.vec();
    q.vec().dot(k.apply(sv - tv)) + r.vec().dot(k.apply(sv + tv))
}

// ---- fixed-size complex operator algebra ----

type Mat2 = [[Complex64; 2]; 2];

struct Mat4([[Complex64; 4]; 4]);

impl Mat4 {
    fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (row, o) in self.0.iter().zip(out.iter_mut()) {
            *o = row.iter().zip(v.iter()).map(|(m, x)| m * x).sum();
        }
        out
    }
}

/// v . sigma for a real direction v.
fn pauli_dot(v: Vec3) -> Mat2 {
    [
        [Complex64::new(v.z, 0.0), Complex64::new(v.x, -v.y)],
        [Complex64::new(v.x, v.y), Complex64::new(-v.z, 0.0)],
    ]
}

/// Projector (1 + sign * v . sigma) / 2 onto the `outcome` eigenspace.
fn projector(v: Vec3, outcome: Outcome) -> Mat2 {
    let sign = outcome.sign();
    let m = pauli_dot(v);
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            out[i][j] = (Complex64::new(id, 0.0) + sign * m[i][j]) * 0.5;
        }
    }
    out
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    Mat4(out)
}

/// m acting on one subsystem, identity on the other.
fn one_sided(side: Side, m: &Mat2) -> Mat4 {
    let id: Mat2 = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    match side {
        Side::A => kron(m, &id),
        Side::B => kron(&id, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Concurrence {
        Concurrence::new(v).unwrap()
    }

    #[test]
    fn concurrence_rejects_out_of_range() {
        assert!(Concurrence::new(-0.1).is_err());
        assert!(Concurrence::new(1.0 + 1e-9).is_err());
        assert!(Concurrence::new(f64::NAN).is_err());
        assert!(Concurrence::new(0.0).is_ok());
        assert!(Concurrence::new(1.0).is_ok());
    }

    #[test]
    fn measurement_vector_enforces_unit_norm() {
        assert!(MeasurementVector::new(Vec3::new(1.0, 1.0, 1.0)).is_err());
        let v = MeasurementVector::normalized(Vec3::new(1.0, 1.0, 1.0)).unwrap();
        assert!((v.vec().norm() - 1.0).abs() < 1e-15);
        assert!(MeasurementVector::normalized(Vec3::ZERO).is_none());
        let w = MeasurementVector::from_angles(2.0, 0.7);
        assert!((w.vec().norm() - 1.0).abs() < 1e-15);
        assert!((w.theta() - 2.0).abs() < 1e-15);
        assert!((w.phi() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn state_amplitudes_at_c_06() {
        // sqrt(0.9) and -sqrt(0.1), the Schmidt coefficients at C = 0.6.
        let psi = build_state(c(0.6));
        let a = psi.amplitudes();
        assert!((a[0].re - 0.9486832980505138).abs() < 1e-15);
        assert!((a[3].re - (-0.31622776601683794)).abs() < 1e-15);
        assert_eq!(a[1], Complex64::new(0.0, 0.0));
        assert_eq!(a[2], Complex64::new(0.0, 0.0));
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn state_extremes() {
        let sep = build_state(c(0.0));
        assert!((sep.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert_eq!(sep.amplitudes()[3], Complex64::new(0.0, 0.0));
        let bell = build_state(c(1.0));
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((bell.amplitudes()[0].re - inv_sqrt2).abs() < 1e-15);
        assert!((bell.amplitudes()[3].re + inv_sqrt2).abs() < 1e-15);
    }

    #[test]
    fn bloch_vector_matches_operator_moments() {
        for &cv in &[0.0, 0.3, 0.8, 1.0] {
            let cc = c(cv);
            let psi = build_state(cc);
            let a = bloch_vector(cc);
            // <sigma_i (x) 1> via +/- projector difference on side A.
            for (axis, expect) in [
                (MeasurementVector::x_axis(), a.x),
                (MeasurementVector::new(Vec3::new(0.0, 1.0, 0.0)).unwrap(), a.y),
                (MeasurementVector::z_axis(), a.z),
            ] {
                let p_plus = joint_probability(
                    &psi,
                    axis,
                    MeasurementVector::z_axis(),
                    OutcomePair::new(Outcome::Plus, Outcome::Plus),
                ) + joint_probability(
                    &psi,
                    axis,
                    MeasurementVector::z_axis(),
                    OutcomePair::new(Outcome::Plus, Outcome::Minus),
                );
                let moment = 2.0 * p_plus - 1.0;
                assert!(
                    (moment - expect).abs() < 1e-14,
                    "C={cv}: moment {moment} vs bloch {expect}"
                );
            }
        }
        assert!((bloch_vector(c(0.8)).z - 0.6).abs() < 1e-15);
    }

    #[test]
    fn correlation_matrix_matches_operator_moments() {
        let axes = [
            MeasurementVector::x_axis(),
            MeasurementVector::new(Vec3::new(0.0, 1.0, 0.0)).unwrap(),
            MeasurementVector::z_axis(),
        ];
        for &cv in &[0.0, 0.45, 1.0] {
            let cc = c(cv);
            let psi = build_state(cc);
            let k = correlation_matrix(cc);
            for (i, &axis) in axes.iter().enumerate() {
                let moment = chsh_operator(&psi, axis, axis, axis, axis) / 2.0;
                assert!(
                    (moment - k.diagonal()[i]).abs() < 1e-14,
                    "C={cv}, axis {i}"
                );
            }
        }
    }

    #[test]
    fn correlation_matrix_fixes_bloch_vector() {
        let cc = c(0.37);
        let k = correlation_matrix(cc);
        let a = bloch_vector(cc);
        assert_eq!(k.apply(a), a);
    }

    #[test]
    fn joint_probability_zz_and_normalization() {
        let psi = build_state(c(0.6));
        let z = MeasurementVector::z_axis();
        // pr(+,+) along z twice is (1 + d)/2 = 0.9 at C = 0.6.
        assert!((joint_probability(&psi, z, z, OutcomePair::PLUS_PLUS) - 0.9).abs() < 1e-15);

        let va = MeasurementVector::from_angles(1.1, 0.4);
        let vb = MeasurementVector::from_angles(2.4, -1.9);
        let mut total = 0.0;
        for oa in [Outcome::Plus, Outcome::Minus] {
            for ob in [Outcome::Plus, Outcome::Minus] {
                let p = joint_probability(&psi, va, vb, OutcomePair::new(oa, ob));
                assert!(p >= -1e-15 && p <= 1.0 + 1e-15);
                total += p;
            }
        }
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn conditional_self_conditioning_is_one() {
        let psi = build_state(c(0.6));
        let axis = MeasurementVector::from_angles(0.9, 0.2);
        let m = Measurement::new(Side::A, axis, Outcome::Plus);
        assert!((conditional_probability(&psi, m, m).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn conditional_null_event_is_an_error() {
        // Separable state |00>: z outcome Minus on A never occurs.
        let psi = build_state(c(0.0));
        let given = Measurement::new(Side::A, MeasurementVector::z_axis(), Outcome::Minus);
        let target = Measurement::new(Side::B, MeasurementVector::x_axis(), Outcome::Plus);
        match conditional_probability(&psi, given, target) {
            Err(Error::ConditioningOnNullEvent { .. }) => {}
            other => panic!("expected null-event error, got {other:?}"),
        }
    }

    #[test]
    fn chsh_routes_agree_on_a_fixed_frame() {
        let cc = c(0.6);
        let psi = build_state(cc);
        let k = correlation_matrix(cc);
        let q = MeasurementVector::from_angles(2.0943951023931953, 0.0);
        let r = MeasurementVector::from_angles(2.76, 0.31);
        let s = MeasurementVector::from_angles(1.2, -0.7);
        let t = MeasurementVector::from_angles(0.4, 2.2);
        let s_op = chsh_operator(&psi, q, r, s, t);
        let s_vec = chsh_vector(q, r, s, t, &k);
        assert!((s_op - s_vec).abs() < 1e-13, "{s_op} vs {s_vec}");
    }

    #[test]
    fn tsirelson_value_at_maximal_entanglement() {
        // For K = diag(-1, 1, 1) the bound 2 sqrt(2) is reached with
        // q = x, r = z, s and t the diagonals of the xz plane.
        let cc = c(1.0);
        let psi = build_state(cc);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let q = MeasurementVector::x_axis();
        let r = MeasurementVector::z_axis();
        let s = MeasurementVector::new(Vec3::new(-inv_sqrt2, 0.0, inv_sqrt2)).unwrap();
        let t = MeasurementVector::new(Vec3::new(inv_sqrt2, 0.0, inv_sqrt2)).unwrap();
        let s_val = chsh_operator(&psi, q, r, s, t);
        assert!((s_val - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-14);
    }
}
