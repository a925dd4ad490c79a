//! Closed-form performance of the secure multihop path: secrecy outage,
//! secrecy-constrained rate design, transmission and connection
//! probabilities, throughput, and the high-SNR limits of both schemes.
//!
//! Probabilities built from products or powers are evaluated through their
//! logarithms so that hop counts in the thousands and SNRs up to 1e16 stay
//! representable.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{hop_distance, rate_for_threshold, threshold, HopLayout, NetworkConfig, RateDesign, SchemeKind};
use crate::quadrature::{integrate_2d, Rect};
use crate::specfun::{gamma, lambert_w0, lambert_w0_exp};

/// Analytic metrics for one (config, scheme, N, rates) point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub scheme: SchemeKind,
    pub n_hops: usize,
    pub rates: RateDesign,
    /// Per-hop transmission probability P_t'.
    pub p_t_hop: f64,
    /// Per-hop connection probability P_c'.
    pub p_c_hop: f64,
    /// End-to-end connection probability P_c.
    pub p_c_path: f64,
    /// Per-hop secrecy outage probability P_so'.
    pub p_so_hop: f64,
    /// End-to-end secrecy outage probability P_so.
    pub p_so_path: f64,
    /// Secure transmission throughput, bits per channel use.
    pub throughput: f64,
}

/// Limits of the optimal secret rate and throughput as `p → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighSnrLimit {
    pub r_s_limit: f64,
    pub throughput_limit: f64,
    /// K₃ for OFT, K₅ = N·K₃ for NOFT.
    pub k_constant: f64,
}

/// Outcome of inverting the secrecy constraint for β_e.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecrecyThreshold {
    /// The threshold at which the end-to-end outage equals ε.
    Constrained(f64),
    /// No eavesdroppers: every β_e ≥ 0 meets the constraint.
    Unconstrained,
}

impl SecrecyThreshold {
    /// β_e to design with; zero when unconstrained.
    pub fn beta_e(self) -> f64 {
        match self {
            SecrecyThreshold::Constrained(b) => b,
            SecrecyThreshold::Unconstrained => 0.0,
        }
    }
}

/// `K₁ = π·λ_e·Γ(2/α + 1)`.
pub fn k1(config: &NetworkConfig) -> f64 {
    let g = gamma(2.0 / config.alpha + 1.0).expect("2/alpha + 1 is positive");
    PI * config.lambda_e * g
}

/// `ln(1 − P_so')`, the log-probability that one hop stays secure.
pub fn log_secure_per_hop(config: &NetworkConfig, beta_e: f64) -> Result<f64> {
    if !(beta_e >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "beta_e must be non-negative (got {beta_e})"
        )));
    }
    if config.lambda_e == 0.0 {
        return Ok(0.0);
    }
    if beta_e == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if beta_e.is_infinite() {
        return Ok(0.0);
    }
    let x = beta_e / config.p;
    let log_rate = k1(config).ln() - 2.0 / config.alpha * x.ln() - x;
    Ok(-log_rate.exp())
}

/// Per-hop secrecy outage probability `1 − exp[−K₁ (β_e/p)^(−2/α) e^(−β_e/p)]`.
///
/// At `β_e = 0` the outage is certain whenever `λ_e > 0`.
pub fn sop_per_hop(config: &NetworkConfig, beta_e: f64) -> Result<f64> {
    Ok(-log_secure_per_hop(config, beta_e)?.exp_m1())
}

/// End-to-end secrecy outage over `n_hops` independent hops.
pub fn sop_end_to_end(config: &NetworkConfig, n_hops: usize, beta_e: f64) -> Result<f64> {
    hop_distance(config, n_hops)?;
    let per_hop = log_secure_per_hop(config, beta_e)?;
    if per_hop == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    Ok(-(n_hops as f64 * per_hop).exp_m1())
}

/// `W₀((α/2)·[ln(1/(1−ε)) / (N·K₁)]^(−α/2))`, shared by the β_e inversion
/// and the high-SNR constants. `None` when `λ_e = 0`.
fn secrecy_lambert(config: &NetworkConfig, n_hops: usize) -> Result<Option<f64>> {
    hop_distance(config, n_hops)?;
    if config.lambda_e == 0.0 {
        return Ok(None);
    }
    let half_alpha = 0.5 * config.alpha;
    let budget = -(-config.epsilon).ln_1p() / (n_hops as f64 * k1(config));
    let log_arg = half_alpha.ln() - half_alpha * budget.ln();
    lambert_w0_exp(log_arg).map(Some)
}

/// β_e at which the end-to-end secrecy outage equals ε exactly.
pub fn beta_e_for_epsilon(config: &NetworkConfig, n_hops: usize) -> Result<SecrecyThreshold> {
    Ok(match secrecy_lambert(config, n_hops)? {
        Some(w) => SecrecyThreshold::Constrained(2.0 * config.p / config.alpha * w),
        None => SecrecyThreshold::Unconstrained,
    })
}

/// Redundancy rate `R_e = log2(β_e + 1)` meeting the secrecy constraint with equality.
pub fn rate_redundancy(config: &NetworkConfig, n_hops: usize) -> Result<f64> {
    Ok(rate_for_threshold(beta_e_for_epsilon(config, n_hops)?.beta_e()))
}

/// `K₂ = [(L/N)^α + 1] / p`.
pub fn k2(config: &NetworkConfig, n_hops: usize) -> Result<f64> {
    let d = hop_distance(config, n_hops)?;
    Ok((d.powf(config.alpha) + 1.0) / config.p)
}

/// The scheme's rate-penalty constant: K₂ for OFT, `K₄ = N·K₂` for NOFT.
pub fn scheme_constant(config: &NetworkConfig, scheme: SchemeKind, n_hops: usize) -> Result<f64> {
    let k = k2(config, n_hops)?;
    Ok(match scheme {
        SchemeKind::Oft => k,
        SchemeKind::Noft => n_hops as f64 * k,
    })
}

fn check_beta_t(beta_t: f64) -> Result<()> {
    if beta_t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "beta_t must be non-negative (got {beta_t})"
        )))
    }
}

/// Per-hop on-off transmission probability `exp[−β_t((L/N)^α + 1)/p]`.
pub fn transmission_prob_oft(config: &NetworkConfig, n_hops: usize, beta_t: f64) -> Result<f64> {
    check_beta_t(beta_t)?;
    Ok((-beta_t * k2(config, n_hops)?).exp())
}

/// End-to-end connection probability without feedback, `exp[−N·β_t((L/N)^α + 1)/p]`.
pub fn connection_prob_noft(config: &NetworkConfig, n_hops: usize, beta_t: f64) -> Result<f64> {
    check_beta_t(beta_t)?;
    Ok((-beta_t * scheme_constant(config, SchemeKind::Noft, n_hops)?).exp())
}

/// Throughput-maximizing rates under the secrecy constraint for a fixed hop count.
///
/// With `K` the scheme constant, `R_s* = W₀(2^(−R_e)/K)/ln 2` and
/// `R_t* = R_e + R_s*`. When `λ_e = 0` the constraint drops out and `R_e = 0`.
pub fn optimal_rates(config: &NetworkConfig, scheme: SchemeKind, n_hops: usize) -> Result<RateDesign> {
    let r_e = rate_redundancy(config, n_hops)?;
    let k = scheme_constant(config, scheme, n_hops)?;
    let log_arg = -r_e * LN_2 - k.ln();
    let r_s = lambert_w0_exp(log_arg)? / LN_2;
    Ok(RateDesign::from_redundancy(r_e, r_s))
}

/// The rate-design objective `(R_t − R_e)·exp[−K(2^R_t − 1)] / N`.
pub fn rate_objective(k: f64, n_hops: usize, r_t: f64, r_e: f64) -> f64 {
    (r_t - r_e) * (-k * threshold(r_t)).exp() / n_hops as f64
}

/// Natural log of [`rate_objective`], finite wherever `R_t > R_e` even when the
/// objective itself underflows.
pub fn log_rate_objective(k: f64, n_hops: usize, r_t: f64, r_e: f64) -> f64 {
    (r_t - r_e).ln() - k * threshold(r_t) - (n_hops as f64).ln()
}

/// Secure transmission throughput `P_t'·P_c·R_s / N` of the scheme.
pub fn throughput(config: &NetworkConfig, scheme: SchemeKind, n_hops: usize, rates: &RateDesign) -> Result<f64> {
    check_beta_t(rates.beta_t)?;
    let k = scheme_constant(config, scheme, n_hops)?;
    Ok(rates.r_s * (-k * rates.beta_t).exp() / n_hops as f64)
}

/// Every analytic metric at one design point.
pub fn performance_report(
    config: &NetworkConfig,
    scheme: SchemeKind,
    n_hops: usize,
    rates: &RateDesign,
) -> Result<PerformanceReport> {
    let per_hop = transmission_prob_oft(config, n_hops, rates.beta_t)?;
    let (p_t_hop, p_c_hop, p_c_path) = match scheme {
        SchemeKind::Oft => (per_hop, 1.0, 1.0),
        SchemeKind::Noft => (1.0, per_hop, connection_prob_noft(config, n_hops, rates.beta_t)?),
    };
    Ok(PerformanceReport {
        scheme,
        n_hops,
        rates: *rates,
        p_t_hop,
        p_c_hop,
        p_c_path,
        p_so_hop: sop_per_hop(config, rates.beta_e)?,
        p_so_path: sop_end_to_end(config, n_hops, rates.beta_e)?,
        throughput: throughput(config, scheme, n_hops, rates)?,
    })
}

/// Limits of the optimal secret rate and throughput as the SNR grows without bound.
pub fn high_snr_limit(config: &NetworkConfig, scheme: SchemeKind, n_hops: usize) -> Result<HighSnrLimit> {
    let w = secrecy_lambert(config, n_hops)?
        .ok_or_else(|| Error::InvalidArgument("high-SNR limits require lambda_e > 0".into()))?;
    let d = hop_distance(config, n_hops)?;
    let k3 = 2.0 / config.alpha * (d.powf(config.alpha) + 1.0) * w;
    let k = match scheme {
        SchemeKind::Oft => k3,
        SchemeKind::Noft => n_hops as f64 * k3,
    };
    let w_inv = lambert_w0(1.0 / k)?;
    Ok(HighSnrLimit {
        r_s_limit: w_inv / LN_2,
        throughput_limit: w_inv / (n_hops as f64 * LN_2) * (-k * w_inv.exp()).exp(),
        k_constant: k,
    })
}

/// Fixed-eavesdropper secrecy outage with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedSop {
    pub value: f64,
    /// Quadrature plus truncation error, on the probability scale.
    pub error_bound: f64,
    pub truncation_radius: f64,
}

const FIXED_SOP_MAX_EVALS: usize = 20_000_000;

/// Upper bound on `∫_{|y| > ρ} exp[−c(|y|^α + 1)] dy`.
fn per_hop_tail(c: f64, alpha: f64, rho: f64) -> f64 {
    let a = 2.0 / alpha;
    let x = c * rho.powf(alpha);
    // u^(a-1) ≤ x^(a-1) for u ≥ x since a ≤ 1
    2.0 * PI * (-c).exp() / alpha * c.powf(-a) * x.powf(a - 1.0) * (-x).exp()
}

/// Secrecy outage when one eavesdropper realization persists across all hops:
/// `1 − exp[−λ_e ∫ (1 − ∏ₙ(1 − e^(−β_e(|x − a_n|^α + 1)/p))) dx]`.
///
/// The plane is truncated to a disk about the path midpoint and integrated
/// adaptively in polar coordinates; the truncation tail is bounded
/// analytically and folded into `error_bound`. Passing `None` for the radius
/// picks the smallest radius (at least 3·L) whose tail stays under a tenth
/// of the tolerance.
pub fn sop_fixed_eavesdroppers(
    config: &NetworkConfig,
    n_hops: usize,
    beta_e: f64,
    truncation_radius: Option<f64>,
    tolerance: f64,
) -> Result<FixedSop> {
    let layout = HopLayout::new(config, n_hops)?;
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if !(beta_e >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "beta_e must be non-negative (got {beta_e})"
        )));
    }
    let half_span = 0.5 * config.length;
    if config.lambda_e == 0.0 || beta_e == 0.0 {
        let value = if config.lambda_e == 0.0 { 0.0 } else { 1.0 };
        return Ok(FixedSop {
            value,
            error_bound: 0.0,
            truncation_radius: truncation_radius.unwrap_or(3.0 * config.length),
        });
    }

    let c = beta_e / config.p;
    let alpha = config.alpha;
    let integral_tol = tolerance / config.lambda_e;
    let tail = |radius: f64| n_hops as f64 * per_hop_tail(c, alpha, radius - half_span);

    let radius = match truncation_radius {
        Some(r) if r > half_span => r,
        Some(r) => {
            return Err(Error::InvalidArgument(format!(
                "truncation radius {r} does not cover the path"
            )))
        }
        None => {
            let mut r = 3.0 * config.length;
            while tail(r) > 0.1 * integral_tol {
                r *= 1.25;
            }
            r
        }
    };
    let tail_bound = tail(radius);
    if tail_bound >= integral_tol {
        return Err(Error::Quadrature {
            estimate: f64::NAN,
            error_bound: tail_bound * config.lambda_e,
            tolerance,
        });
    }

    let centre = layout.midpoint();
    let transmitters = layout.transmitters().to_vec();
    let integrand = |r: f64, theta: f64| {
        let (s, co) = theta.sin_cos();
        let x = centre[0] + r * co;
        let y = centre[1] + r * s;
        let log_all_secure: f64 = transmitters
            .iter()
            .map(|a| {
                let d2 = (x - a[0]).powi(2) + (y - a[1]).powi(2);
                {
                    let leak = (-c * (d2.powf(0.5 * alpha) + 1.0)).exp();
                    (-leak).ln_1p()
                }
            })
            .sum();
        -log_all_secure.exp_m1() * r
    };
    let rect = Rect {
        x0: 0.0,
        x1: radius,
        y0: 0.0,
        y1: 2.0 * PI,
    };
    let quad = integrate_2d(integrand, rect, integral_tol - tail_bound, FIXED_SOP_MAX_EVALS).map_err(|e| match e {
        Error::Quadrature {
            estimate, error_bound, ..
        } => Error::Quadrature {
            estimate: -(-config.lambda_e * estimate).exp_m1(),
            error_bound: config.lambda_e * (error_bound + tail_bound),
            tolerance,
        },
        other => other,
    })?;
    Ok(FixedSop {
        value: -(-config.lambda_e * quad.value).exp_m1(),
        error_bound: config.lambda_e * (quad.error + tail_bound),
        truncation_radius: radius,
    })
}
