//! Scenario parameters and the geometric/channel quantities shared by the
//! analytic routines and the simulator.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Static parameters of one scenario.
///
/// `p` is the transmitter-side SNR on a linear scale (noise normalized to one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Source–destination distance in meters.
    pub length: f64,
    /// Path-loss exponent, within `[2, 6]`.
    pub alpha: f64,
    /// Transmitter-side SNR, linear.
    pub p: f64,
    /// Eavesdropper density in nodes per square meter.
    pub lambda_e: f64,
    /// End-to-end secrecy outage constraint, within `(0, 1)`.
    pub epsilon: f64,
}

impl Default for NetworkConfig {
    /// L = 50 m, α = 3, p = 100 dB, λ_e = 1e-5, ε = 0.05.
    fn default() -> Self {
        Self {
            length: 50.0,
            alpha: 3.0,
            p: 1e10,
            lambda_e: 1e-5,
            epsilon: 0.05,
        }
    }
}

impl NetworkConfig {
    pub fn new(length: f64, alpha: f64, p: f64, lambda_e: f64, epsilon: f64) -> Result<Self> {
        let config = Self {
            length,
            alpha,
            p,
            lambda_e,
            epsilon,
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks every parameter invariant, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.length > 0.0 && self.length.is_finite()) {
            return fail(format!("L must be positive and finite (got {})", self.length));
        }
        if !(2.0..=6.0).contains(&self.alpha) {
            return fail(format!("alpha must lie in [2, 6] (got {})", self.alpha));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return fail(format!("p must be positive and finite (got {})", self.p));
        }
        if !(self.lambda_e >= 0.0 && self.lambda_e.is_finite()) {
            return fail(format!(
                "lambda_e must be non-negative and finite (got {})",
                self.lambda_e
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail(format!("epsilon must lie in (0, 1) (got {})", self.epsilon));
        }
        Ok(())
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Self { p, ..self }.validated()
    }

    pub fn with_lambda_e(self, lambda_e: f64) -> Result<Self> {
        Self { lambda_e, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate().map(|_| self)
    }
}

/// Linear SNR from decibels.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Equidistant relay placement along the x-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct HopLayout {
    pub n_hops: usize,
    /// `n_hops + 1` points: source, relays, destination.
    pub node_positions: Vec<[f64; 2]>,
}

impl HopLayout {
    pub fn new(config: &NetworkConfig, n_hops: usize) -> Result<Self> {
        let spacing = hop_distance(config, n_hops)?;
        let node_positions = (0..=n_hops).map(|k| [k as f64 * spacing, 0.0]).collect();
        Ok(Self { n_hops, node_positions })
    }

    /// Positions of the `N` transmitters (every node but the destination).
    pub fn transmitters(&self) -> &[[f64; 2]] {
        &self.node_positions[..self.n_hops]
    }

    pub fn midpoint(&self) -> [f64; 2] {
        let last = self.node_positions[self.n_hops];
        [0.5 * last[0], 0.5 * last[1]]
    }
}

/// Per-hop distance `L/N`.
pub fn hop_distance(config: &NetworkConfig, n_hops: usize) -> Result<f64> {
    if n_hops < 1 {
        return Err(Error::InvalidArgument("n_hops must be at least 1".into()));
    }
    Ok(config.length / n_hops as f64)
}

/// Bounded path gain `1 / (1 + r^α)`.
pub fn path_gain(distance: f64, alpha: f64) -> f64 {
    1.0 / (1.0 + distance.powf(alpha))
}

/// Wiretap code rates (bits per channel use) and their SNR thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateDesign {
    /// Codeword rate R_t.
    pub r_t: f64,
    /// Confidential-information rate R_s.
    pub r_s: f64,
    /// Redundancy rate R_e = R_t − R_s.
    pub r_e: f64,
    /// Decoding threshold 2^R_t − 1.
    pub beta_t: f64,
    /// Secrecy-outage threshold 2^R_e − 1.
    pub beta_e: f64,
}

impl RateDesign {
    /// Builds the design from redundancy and secret rate, so that `r_e`
    /// and `beta_e` are carried exactly instead of recovered by subtraction.
    pub(crate) fn from_redundancy(r_e: f64, r_s: f64) -> Self {
        let r_t = r_e + r_s;
        Self {
            r_t,
            r_s,
            r_e,
            beta_t: threshold(r_t),
            beta_e: threshold(r_e),
        }
    }
}

/// `2^rate − 1` without cancellation for small rates.
pub fn threshold(rate: f64) -> f64 {
    (rate * LN_2).exp_m1()
}

/// `log2(1 + beta)` without cancellation for small thresholds.
pub fn rate_for_threshold(beta: f64) -> f64 {
    beta.ln_1p() / LN_2
}

/// Design from codeword and secret rates.
pub fn rates_from(r_t: f64, r_s: f64) -> Result<RateDesign> {
    if !(r_s > 0.0) || !r_s.is_finite() {
        return Err(Error::InvalidArgument(format!("r_s must be positive (got {r_s})")));
    }
    if !(r_t >= r_s) || !r_t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "r_t must be at least r_s (got r_t={r_t}, r_s={r_s})"
        )));
    }
    Ok(RateDesign {
        r_t,
        r_s,
        r_e: r_t - r_s,
        beta_t: threshold(r_t),
        beta_e: threshold(r_t - r_s),
    })
}

/// Transmission scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// On-off: the transmitter waits for a one-bit "channel good" feedback.
    Oft,
    /// Non-on-off: transmit every slot, no feedback.
    Noft,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 2] = [SchemeKind::Oft, SchemeKind::Noft];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Oft => "oft",
            SchemeKind::Noft => "noft",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oft" => Ok(SchemeKind::Oft),
            "noft" => Ok(SchemeKind::Noft),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}
