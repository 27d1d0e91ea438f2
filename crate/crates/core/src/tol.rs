//! Tolerance policy.
//!
//! Three tiers, ordered by how much floating-point error a quantity can
//! legitimately accumulate:
//!
//! - `algebraic`: identities that are exact in real arithmetic and short in
//!   floating point (norm identities, probability normalization).
//! - `chained`: quantities built through several dependent constructions
//!   (frame -> lengths -> triangle -> w), where roundoff compounds.
//! - `optimizer`: outputs of iterative numeric search, limited by stall
//!   thresholds rather than machine epsilon.

/// Exact-identity tier.
pub const ALGEBRAIC: f64 = 1e-12;
/// Chained-construction tier.
pub const CHAINED: f64 = 1e-10;
/// Numeric-search tier.
pub const OPTIMIZER: f64 = 1e-9;

/// Environment variable that rescales the tiers, keeping their ratios.
pub const TOL_ENV_VAR: &str = "HARDY_CHSH_TOL";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub algebraic: f64,
    pub chained: f64,
    pub optimizer: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: ALGEBRAIC,
            chained: CHAINED,
            optimizer: OPTIMIZER,
        }
    }
}

impl Tolerances {
    /// Tiers anchored at `base` for the algebraic tier, with the default
    /// 1e2 / 1e3 spreads for the other two.
    pub fn scaled(base: f64) -> Self {
        Tolerances {
            algebraic: base,
            chained: base * 1e2,
            optimizer: base * 1e3,
        }
    }

    /// Default tiers unless `HARDY_CHSH_TOL` holds a positive float, which
    /// then anchors the algebraic tier via [`Tolerances::scaled`].
    pub fn from_env() -> Self {
        match std::env::var(TOL_ENV_VAR) {
            Ok(raw) => match raw.trim().parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Tolerances::scaled(v),
                _ => Tolerances::default(),
            },
            Err(_) => Tolerances::default(),
        }
    }
}
