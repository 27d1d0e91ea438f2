//! The constrained measurement frame.
//!
//! Starting from a free direction q on the A side, three conditions pin
//! the remaining settings:
//!
//! ```text
//! pr(Q=1, T=1) = 0   =>  t = -(Kq + a) / |Kq + a|
//! pr(Q=1 | S=1) = 1  =>  s =  (Kq - a) / |Kq - a|
//! pr(T=1 | R=1) = 1  =>  r =  (Kt - a) / |Kt - a|  =  q - (2/(2 - tau)) (q + a)
//! ```
//!
//! with K = diag(-C, C, 1) and a = (0, 0, sqrt(1 - C^2)). The images
//! sk = Ks and tk = Kt land on the ellipsoid x^2/C^2 + y^2/C^2 + z^2 = 1
//! at distances xi and tau from the lower focus -a, measured along +q and
//! -q respectively. The exact norm identities
//!
//! ```text
//! |Kq - a| = 1 - sqrt(1 - C^2) q_z        |Kq + a| = 1 + sqrt(1 - C^2) q_z
//! ```
//!
//! make xi = C^2/|Kq - a| and tau = C^2/|Kq + a| cheap scalars, and give
//! the closed forms sk = xi q - a and tk = -tau q - a.

use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{
    self, build_state, correlation_matrix, joint_probability, Concurrence, Measurement,
    MeasurementVector, Outcome, OutcomePair, Side,
};
use crate::vec3::Vec3;

/// Norm below which a derived direction no longer points anywhere.
pub const DIRECTION_TOL: f64 = 1e-12;
/// Window around the extreme parameter values that counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Inputs for which the construction exists only as a limit with w = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegenerateGeometry {
    /// C = 0: no entanglement, no violation.
    Separable,
    /// C = 1: the Bloch vector vanishes and all chords collapse.
    MaximallyEntangled,
    /// q parallel to +/-z: the frame folds onto the symmetry axis.
    AxisAligned,
}

impl fmt::Display for DegenerateGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegenerateGeometry::Separable => write!(f, "separable state (C = 0)"),
            DegenerateGeometry::MaximallyEntangled => write!(f, "maximally entangled state (C = 1)"),
            DegenerateGeometry::AxisAligned => write!(f, "measurement axis parallel to z"),
        }
    }
}

/// `Some(kind)` when (q, C) sits on a boundary where w vanishes
/// identically: C in {0, 1} or q parallel to +/-z.
pub fn classify_degeneracy(q: MeasurementVector, c: Concurrence) -> Option<DegenerateGeometry> {
    if c.value() <= DEGENERACY_TOL {
        Some(DegenerateGeometry::Separable)
    } else if c.value() >= 1.0 - DEGENERACY_TOL {
        Some(DegenerateGeometry::MaximallyEntangled)
    } else if q.vec().z.abs() >= 1.0 - DEGENERACY_TOL {
        Some(DegenerateGeometry::AxisAligned)
    } else {
        None
    }
}

/// The four measurement directions plus the ellipsoid points sk = Ks and
/// tk = Kt they map to. Q and R act on subsystem A, S and T on B.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementFrame {
    pub q: MeasurementVector,
    pub r: MeasurementVector,
    pub s: MeasurementVector,
    pub t: MeasurementVector,
    pub sk: Vec3,
    pub tk: Vec3,
    pub concurrence: Concurrence,
}

impl MeasurementFrame {
    /// CHSH value of the frame through the correlation-matrix route.
    pub fn chsh(&self) -> f64 {
        let k = correlation_matrix(self.concurrence);
        quantum::chsh_vector(self.q, self.r, self.s, self.t, &k)
    }
}

/// Focal distances of the ellipsoid points: xi for sk, tau for tk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyLengths {
    pub xi: f64,
    pub tau: f64,
}

/// How far a frame is from satisfying the three defining conditions.
/// All residuals are distances from the target probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyResiduals {
    /// pr(Q=1, T=1), target 0.
    pub qt_joint: f64,
    /// 1 - pr(Q=1 | S=1), target 0.
    pub qs_conditional: f64,
    /// 1 - pr(T=1 | R=1), target 0.
    pub rt_conditional: f64,
}

impl HardyResiduals {
    pub fn max_abs(&self) -> f64 {
        self.qt_joint
            .abs()
            .max(self.qs_conditional.abs())
            .max(self.rt_conditional.abs())
    }
}

fn kq_plus_a(q: MeasurementVector, c: Concurrence) -> Vec3 {
    correlation_matrix(c).apply(q.vec()) + bloch(c)
}

fn kq_minus_a(q: MeasurementVector, c: Concurrence) -> Vec3 {
    correlation_matrix(c).apply(q.vec()) - bloch(c)
}

fn bloch(c: Concurrence) -> Vec3 {
    Vec3::new(0.0, 0.0, c.bloch_z())
}

/// Direction antiparallel to Kq + a; suppresses the joint outcome
/// Q=1, T=1 entirely.
pub fn derive_t(q: MeasurementVector, c: Concurrence) -> Result<MeasurementVector> {
    let v = kq_plus_a(q, c);
    let norm = v.norm();
    if norm <= DIRECTION_TOL {
        return Err(Error::DegenerateDirection {
            which: "Kq + a",
            norm,
        });
    }
    Ok(MeasurementVector::normalized(-v).expect("norm checked above"))
}

/// Direction parallel to Kq - a; makes S=1 imply Q=1.
pub fn derive_s(q: MeasurementVector, c: Concurrence) -> Result<MeasurementVector> {
    let v = kq_minus_a(q, c);
    let norm = v.norm();
    if norm <= DIRECTION_TOL {
        return Err(Error::DegenerateDirection {
            which: "Kq - a",
            norm,
        });
    }
    Ok(MeasurementVector::normalized(v).expect("norm checked above"))
}

/// Focal distances xi = C^2 / |Kq - a| and tau = C^2 / |Kq + a|.
pub fn lengths(q: MeasurementVector, c: Concurrence) -> Result<HardyLengths> {
    let minus = kq_minus_a(q, c).norm();
    let plus = kq_plus_a(q, c).norm();
    if minus <= DIRECTION_TOL {
        return Err(Error::DegenerateDirection {
            which: "Kq - a",
            norm: minus,
        });
    }
    if plus <= DIRECTION_TOL {
        return Err(Error::DegenerateDirection {
            which: "Kq + a",
            norm: plus,
        });
    }
    Ok(HardyLengths {
        xi: c.squared() / minus,
        tau: c.squared() / plus,
    })
}

/// Direction making R=1 imply T=1: the normalized Kt - a, whose norm is
/// exactly 2 - tau. The equivalent affine form q - (2/(2 - tau)) (q + a)
/// loses digits as q approaches the lower pole at small C, where the
/// relative error of 2 - tau is amplified by tau/(2 - tau); normalizing
/// Kt - a stays conditioned everywhere, and the affine identity is
/// asserted separately in the verification suites.
pub fn derive_r(q: MeasurementVector, c: Concurrence) -> Result<MeasurementVector> {
    let t = derive_t(q, c)?;
    let v = correlation_matrix(c).apply(t.vec()) - bloch(c);
    let norm = v.norm();
    if norm <= DIRECTION_TOL {
        return Err(Error::DegenerateDirection {
            which: "Kt - a",
            norm,
        });
    }
    Ok(MeasurementVector::normalized(v).expect("norm checked above"))
}

/// Full frame from the free direction q.
pub fn build_frame(q: MeasurementVector, c: Concurrence) -> Result<MeasurementFrame> {
    let t = derive_t(q, c)?;
    let s = derive_s(q, c)?;
    let r = derive_r(q, c)?;
    let k = correlation_matrix(c);
    Ok(MeasurementFrame {
        q,
        r,
        s,
        t,
        sk: k.apply(s.vec()),
        tk: k.apply(t.vec()),
        concurrence: c,
    })
}

/// Residuals of the three defining conditions, each computed from the
/// projector oracle rather than from the construction formulas.
pub fn hardy_residuals(frame: &MeasurementFrame) -> Result<HardyResiduals> {
    let psi = build_state(frame.concurrence);
    let qt_joint = joint_probability(&psi, frame.q, frame.t, OutcomePair::PLUS_PLUS);
    let qs_conditional = 1.0
        - quantum::conditional_probability(
            &psi,
            Measurement::new(Side::B, frame.s, Outcome::Plus),
            Measurement::new(Side::A, frame.q, Outcome::Plus),
        )?;
    let rt_conditional = 1.0
        - quantum::conditional_probability(
            &psi,
            Measurement::new(Side::A, frame.r, Outcome::Plus),
            Measurement::new(Side::B, frame.t, Outcome::Plus),
        )?;
    Ok(HardyResiduals {
        qt_joint,
        qs_conditional,
        rt_conditional,
    })
}

/// The violation probability w = pr(R=1, S=1), straight from the oracle.
/// Under the three conditions it equals (S - 2)/4; it is ~0 (and may
/// round negative) on the degenerate boundaries.
pub fn violation_probability(q: MeasurementVector, c: Concurrence) -> Result<f64> {
    let frame = build_frame(q, c)?;
    let psi = build_state(c);
    Ok(joint_probability(&psi, frame.r, frame.s, OutcomePair::PLUS_PLUS))
}
