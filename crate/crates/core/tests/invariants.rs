//! Property-based invariants over randomly drawn states and directions.
//! These complement the fixed-value suites: instead of frozen landmarks
//! they assert relations that must hold everywhere in the sampled domain.

use hardy_chsh::frame::{build_frame, hardy_residuals, lengths};
use hardy_chsh::geometry::{lambda_length, w_from_tau, w_geometric, w_ratio_form};
use hardy_chsh::optimize::{chsh_theta_closed, w_opt_closed};
use hardy_chsh::quantum::{
    build_state, chsh_operator, joint_probability, Outcome, OutcomePair,
};
use hardy_chsh::{Concurrence, MeasurementVector, Vec3};
use proptest::prelude::*;

/// Interior of the parameter space: clear of both separability and the
/// maximally entangled point, and of the polar axis where the frame
/// construction degenerates.
fn interior() -> impl Strategy<Value = (f64, f64, f64)> {
    (
        0.01f64..0.99,
        0.05f64..(std::f64::consts::PI - 0.05),
        -std::f64::consts::PI..std::f64::consts::PI,
    )
}

fn any_direction() -> impl Strategy<Value = MeasurementVector> {
    (0.0f64..std::f64::consts::PI, -std::f64::consts::PI..std::f64::consts::PI)
        .prop_map(|(theta, phi)| MeasurementVector::from_angles(theta, phi))
}

proptest! {
    /// The derived frame satisfies all three defining conditions to
    /// near machine precision throughout the interior.
    #[test]
    fn frame_satisfies_defining_conditions((c, theta, phi) in interior()) {
        let c = Concurrence::new(c).unwrap();
        let q = MeasurementVector::from_angles(theta, phi);
        let frame = build_frame(q, c).unwrap();
        let residuals = hardy_residuals(&frame).unwrap();
        prop_assert!(residuals.max_abs() < 1e-10,
            "residuals {:?} at C={}, theta={theta}, phi={phi}",
            residuals, c.value());
    }

    /// All w routes agree: the direct joint probability, the CHSH
    /// identity (S - 2) / 4, and the three geometric forms. The value is
    /// nonnegative and never beats the closed-form optimum.
    #[test]
    fn w_routes_agree_and_respect_optimum((c, theta, phi) in interior()) {
        let c = Concurrence::new(c).unwrap();
        let q = MeasurementVector::from_angles(theta, phi);
        let frame = build_frame(q, c).unwrap();
        let state = build_state(c);
        let direct = joint_probability(&state, frame.r, frame.s, OutcomePair::PLUS_PLUS);
        let identity = (frame.chsh() - 2.0) / 4.0;
        let ls = lengths(q, c).unwrap();
        let geometric = w_geometric(&frame, &ls).unwrap();
        let from_tau = w_from_tau(ls.tau, c).unwrap();
        let ratio = w_ratio_form(ls.xi, ls.tau, c).unwrap();
        for (label, other) in [
            ("identity", identity),
            ("geometric", geometric),
            ("from_tau", from_tau),
            ("ratio", ratio),
        ] {
            prop_assert!((direct - other).abs() < 1e-10,
                "{label} route {other} vs direct {direct}");
        }
        prop_assert!(direct >= -1e-12);
        prop_assert!(direct <= w_opt_closed(c) + 1e-10,
            "w={direct} exceeds optimum {}", w_opt_closed(c));
    }

    /// The polar closed form reproduces the full pipeline, azimuth
    /// included: S depends on q only through its polar angle.
    #[test]
    fn closed_form_matches_pipeline((c, theta, phi) in interior()) {
        let cv = Concurrence::new(c).unwrap();
        let q = MeasurementVector::from_angles(theta, phi);
        let frame = build_frame(q, cv).unwrap();
        prop_assert!((chsh_theta_closed(theta, cv) - frame.chsh()).abs() < 1e-9);
    }

    /// Focal-length identities: xi |Kq - a| = C^2, tau |Kq + a| = C^2,
    /// and the triangle side lambda stays within the chord xi.
    #[test]
    fn focal_lengths_satisfy_identities((c, theta, phi) in interior()) {
        let cv = Concurrence::new(c).unwrap();
        let d = cv.bloch_z();
        let q = MeasurementVector::from_angles(theta, phi);
        let ls = lengths(q, cv).unwrap();
        let c2 = c * c;
        let qz = q.vec().z;
        prop_assert!((ls.xi * (1.0 - d * qz) - c2).abs() < 1e-12);
        prop_assert!((ls.tau * (1.0 + d * qz) - c2).abs() < 1e-12);
        let frame = build_frame(q, cv).unwrap();
        let triangle = lambda_length(&frame, &ls).unwrap();
        prop_assert!(triangle.lambda.abs() <= ls.xi + 1e-12);
        prop_assert!(triangle.cos_gamma.abs() <= 1.0 + 1e-12);
    }

    /// Joint probabilities over any pair of axes form a distribution.
    #[test]
    fn joint_probabilities_normalize(
        c in 0.0f64..=1.0,
        a in any_direction(),
        b in any_direction(),
    ) {
        let state = build_state(Concurrence::new(c).unwrap());
        let mut total = 0.0;
        for oa in [Outcome::Plus, Outcome::Minus] {
            for ob in [Outcome::Plus, Outcome::Minus] {
                let p = joint_probability(&state, a, b, OutcomePair::new(oa, ob));
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p), "p={p}");
                total += p;
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    /// Operator-route CHSH obeys the Tsirelson bound for arbitrary
    /// (unconstrained) axes on both sides.
    #[test]
    fn chsh_respects_tsirelson(
        c in 0.0f64..=1.0,
        q in any_direction(),
        r in any_direction(),
        s in any_direction(),
        t in any_direction(),
    ) {
        let state = build_state(Concurrence::new(c).unwrap());
        let s_val = chsh_operator(&state, q, r, s, t);
        prop_assert!(s_val.abs() <= 2.0 * std::f64::consts::SQRT_2 + 1e-12);
    }

    /// Out-of-range concurrence values are rejected.
    #[test]
    fn concurrence_rejects_out_of_range(c in prop::num::f64::ANY) {
        let valid = (0.0..=1.0).contains(&c);
        prop_assert_eq!(Concurrence::new(c).is_ok(), valid);
    }

    /// Normalization yields a unit vector for anything comfortably
    /// longer than the direction tolerance.
    #[test]
    fn normalized_returns_unit_vectors(
        x in -10.0f64..10.0,
        y in -10.0f64..10.0,
        z in -10.0f64..10.0,
    ) {
        let v = Vec3::new(x, y, z);
        prop_assume!(v.norm() > 1e-6);
        let u = MeasurementVector::normalized(v).unwrap();
        prop_assert!((u.vec().norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn normalized_rejects_null_vectors() {
    assert!(MeasurementVector::normalized(Vec3::new(0.0, 0.0, 0.0)).is_none());
}
