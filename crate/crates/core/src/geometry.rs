//! The ellipse picture and the geometric route to w.
//!
//! Applying K = diag(-C, C, 1) to the unit sphere of measurement
//! directions produces the ellipsoid x^2/C^2 + y^2/C^2 + z^2 = 1 with
//! semimajor axis 1 along z, semiminor axis C, and foci at +/-a. The frame
//! points S = sk and T = tk sit on a chord through the lower focus F_l,
//! their antipodes on a chord through the upper focus F_u, and all of them
//! share the plane spanned by q's horizontal part and z.
//!
//! Three scalar relations in that plane carry the whole construction:
//!
//! ```text
//! 2 - tau = |R T_bar| + lambda          (focal sum, |tk - a| = 2 - tau)
//! lambda  = xi cos(gamma)               (cosine rule in the chord triangle)
//! w       = (xi - lambda) / 4
//! ```
//!
//! so w can be read off the drawing with a ruler; this module computes the
//! same numbers algebraically and keeps the projection point R only for
//! plot output.

use crate::error::{Error, Result};
use crate::frame::{classify_degeneracy, HardyLengths, MeasurementFrame};
use crate::quantum::Concurrence;
use crate::vec3::Vec3;

/// The violation ellipse: image of the unit sphere under K, drawn in the
/// (x', z) plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipseGeometry {
    concurrence: Concurrence,
}

impl EllipseGeometry {
    pub fn new(concurrence: Concurrence) -> Self {
        EllipseGeometry { concurrence }
    }

    pub fn semimajor(&self) -> f64 {
        1.0
    }

    pub fn semiminor(&self) -> f64 {
        self.concurrence.value()
    }

    /// Upper focus, equal to the Bloch vector a.
    pub fn focal_upper(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, self.concurrence.bloch_z())
    }

    pub fn focal_lower(&self) -> Vec3 {
        -self.focal_upper()
    }

    /// x^2/C^2 + y^2/C^2 + z^2 - 1; zero on the ellipsoid.
    pub fn residual(&self, p: Vec3) -> f64 {
        let c2 = self.concurrence.squared();
        (p.x * p.x + p.y * p.y) / c2 + p.z * p.z - 1.0
    }

    /// n boundary samples in the (x', z) plane, starting at (0, 1).
    pub fn sample(&self, n: usize) -> Vec<(f64, f64)> {
        let c = self.concurrence.value();
        (0..n)
            .map(|i| {
                let psi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                (c * psi.sin(), psi.cos())
            })
            .collect()
    }
}

/// n samples of the unit circle in the (x', z) plane, same parametrization
/// as [`EllipseGeometry::sample`].
pub fn unit_circle_sample(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let psi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (psi.sin(), psi.cos())
        })
        .collect()
}

/// Scalars of the chord triangle at the lower focus plus the projection
/// point R used in drawings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleData {
    /// Signed distance from R to the lower focus; positive when R lies
    /// between T_bar and F_l, negative past the focus.
    pub lambda: f64,
    /// Opening angle of the chord triangle via the cosine rule.
    pub cos_gamma: f64,
    /// Projection endpoint on the line from T_bar towards F_l.
    pub r_point: Vec3,
}

fn require_non_degenerate(frame: &MeasurementFrame) -> Result<()> {
    match classify_degeneracy(frame.q, frame.concurrence) {
        Some(kind) => Err(Error::DegenerateGeometry(kind)),
        None => Ok(()),
    }
}

/// lambda = (2 - tau) - r . (sk + tk), with the diagnostics point R placed
/// |R T_bar| = r . (sk + tk) away from T_bar towards the lower focus.
pub fn lambda_length(frame: &MeasurementFrame, lengths: &HardyLengths) -> Result<TriangleData> {
    require_non_degenerate(frame)?;
    let projection = frame.r.vec().dot(frame.sk + frame.tk);
    let lambda = (2.0 - lengths.tau) - projection;
    let cg = cos_gamma(lengths.tau, frame.concurrence)?;
    // Direction from T_bar = -tk towards F_l = -a; |tk - a| = 2 - tau.
    let a = Vec3::new(0.0, 0.0, frame.concurrence.bloch_z());
    let dir = (frame.tk - a) * (1.0 / (2.0 - lengths.tau));
    let r_point = -frame.tk + projection * dir;
    Ok(TriangleData {
        lambda,
        cos_gamma: cg,
        r_point,
    })
}

/// Third route to the violation probability: w = (xi - lambda)/4.
pub fn w_geometric(frame: &MeasurementFrame, lengths: &HardyLengths) -> Result<f64> {
    let triangle = lambda_length(frame, lengths)?;
    Ok((lengths.xi - triangle.lambda) / 4.0)
}

/// Cosine rule for the chord triangle: cos(gamma) = 2C^2/((2-tau) tau) - 1.
/// Rejects (tau, C) pairs no frame can realize.
pub fn cos_gamma(tau: f64, c: Concurrence) -> Result<f64> {
    if !(tau > 0.0 && tau < 2.0) {
        return Err(Error::OutOfRange {
            what: "tau",
            value: tau,
            range: "(0, 2)",
        });
    }
    let cg = 2.0 * c.squared() / ((2.0 - tau) * tau) - 1.0;
    if cg.abs() > 1.0 + 1e-12 {
        return Err(Error::OutOfRange {
            what: "cos_gamma",
            value: cg,
            range: "[-1, 1]",
        });
    }
    Ok(cg.clamp(-1.0, 1.0))
}

/// w as a function of the single focal distance tau:
/// w = C^2/4 (1 - tau C^2 / ((2 - tau)(2 tau - C^2))).
pub fn w_from_tau(tau: f64, c: Concurrence) -> Result<f64> {
    if !(tau > 0.0 && tau < 2.0) {
        return Err(Error::OutOfRange {
            what: "tau",
            value: tau,
            range: "(0, 2)",
        });
    }
    let pole = 2.0 * tau - c.squared();
    if pole <= 1e-12 {
        return Err(Error::OutOfRange {
            what: "2 tau - C^2",
            value: pole,
            range: "(1e-12, inf)",
        });
    }
    let c2 = c.squared();
    Ok(c2 / 4.0 * (1.0 - tau * c2 / ((2.0 - tau) * pole)))
}

/// Ratio form w = C^2/4 (1 - xi/(2 - tau)); identical to [`w_from_tau`]
/// whenever xi and tau satisfy the chord relation xi + tau = 2 xi tau / C^2.
pub fn w_ratio_form(xi: f64, tau: f64, c: Concurrence) -> Result<f64> {
    if !(tau < 2.0) {
        return Err(Error::OutOfRange {
            what: "tau",
            value: tau,
            range: "(-inf, 2)",
        });
    }
    Ok(c.squared() / 4.0 * (1.0 - xi / (2.0 - tau)))
}

/// One labelled point of the figure output, in (x', z) coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FigurePoint {
    pub series: &'static str,
    pub x: f64,
    pub z: f64,
}

fn to_plane(v: Vec3, e_phi: Vec3) -> (f64, f64) {
    (Vec3::new(v.x, v.y, 0.0).dot(e_phi), v.z)
}

/// Plot-ready data for the chord construction: ellipse and unit-circle
/// samples plus the labelled points S, T, S_bar, T_bar, R, F_u, F_l, all in
/// the plane obtained by rotating q's azimuth to zero.
pub fn figure_points(
    frame: &MeasurementFrame,
    lengths: &HardyLengths,
    samples: usize,
) -> Result<Vec<FigurePoint>> {
    let triangle = lambda_length(frame, lengths)?;
    let ellipse = EllipseGeometry::new(frame.concurrence);
    let q = frame.q.vec();
    let horizontal = Vec3::new(q.x, q.y, 0.0);
    // Non-degenerate frames keep q off the z axis, so this normalizes.
    let e_phi = horizontal * (1.0 / horizontal.norm());

    let mut points = Vec::with_capacity(2 * samples + 7);
    for (x, z) in ellipse.sample(samples) {
        points.push(FigurePoint { series: "ellipse", x, z });
    }
    for (x, z) in unit_circle_sample(samples) {
        points.push(FigurePoint { series: "unit_circle", x, z });
    }
    let mut push = |series: &'static str, v: Vec3| {
        let (x, z) = to_plane(v, e_phi);
        points.push(FigurePoint { series, x, z });
    };
    push("S", frame.sk);
    push("T", frame.tk);
    push("S_bar", -frame.sk);
    push("T_bar", -frame.tk);
    push("R", triangle.r_point);
    push("F_u", ellipse.focal_upper());
    push("F_l", ellipse.focal_lower());
    Ok(points)
}

/// Corner loop of the rectangle inscribed in the ellipse whose horizontal
/// sides pass through the foci: corners (+/-C^2, +/-sqrt(1-C^2)), so the
/// sides measure 2 sqrt(1-C^2) along z and 2C^2 along x'. Five points,
/// closed.
pub fn rectangle_points(c: Concurrence) -> Vec<FigurePoint> {
    let x = c.squared();
    let z = c.bloch_z();
    [(x, z), (-x, z), (-x, -z), (x, -z), (x, z)]
        .into_iter()
        .map(|(px, pz)| FigurePoint {
            series: "rectangle",
            x: px,
            z: pz,
        })
        .collect()
}
