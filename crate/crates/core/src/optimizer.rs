//! Hop-count optimization and a brute-force grid oracle for the rate design.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{log_rate_objective, optimal_rates, rate_redundancy, scheme_constant, throughput};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, RateDesign, SchemeKind};

/// Default upper bound of the hop-count search.
pub const DEFAULT_N_MAX: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n_hops: usize,
    pub throughput: f64,
    pub rates: RateDesign,
}

/// Result of the exhaustive search over `N = 1..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopSearchResult {
    pub scheme: SchemeKind,
    pub n_star: usize,
    pub rates_star: RateDesign,
    pub throughput_star: f64,
    /// One entry per hop count, in increasing `N`.
    pub profile: Vec<ProfilePoint>,
}

/// Designs optimal rates at every `N` in `1..=n_max` and keeps the hop count
/// with the largest throughput. Ties go to the smaller `N`.
pub fn optimize_hops(config: &NetworkConfig, scheme: SchemeKind, n_max: usize) -> Result<HopSearchResult> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let profile = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let rates = optimal_rates(config, scheme, n)?;
            let u = throughput(config, scheme, n, &rates)?;
            Ok(ProfilePoint {
                n_hops: n,
                throughput: u,
                rates,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = profile[0];
    for point in &profile[1..] {
        if point.throughput > best.throughput {
            best = *point;
        }
    }
    Ok(HopSearchResult {
        scheme,
        n_star: best.n_hops,
        rates_star: best.rates,
        throughput_star: best.throughput,
        profile,
    })
}

/// Best point of the rate objective on a uniform `R_t` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateGridResult {
    pub r_t_best: f64,
    /// Objective at `r_t_best`; may underflow to zero for hopeless links.
    pub throughput_best: f64,
    pub log_throughput_best: f64,
    pub grid_step: f64,
    pub points: usize,
    /// Sign changes of consecutive differences of the log objective,
    /// ignoring differences within `1e-12·max(1, |ln U_best|)`.
    pub sign_changes: usize,
    /// Whether the first significant difference is an increase.
    pub rises_first: bool,
}

impl RateGridResult {
    /// Rises then falls, with exactly one turn.
    pub fn is_unimodal(&self) -> bool {
        self.rises_first && self.sign_changes == 1
    }
}

const SIGN_TOLERANCE: f64 = 1e-12;

/// Evaluates the rate objective at `R_e + k·grid_step` for `k = 0, 1, ...`
/// up to `r_t_max`. The objective is zero at `R_e` itself, so the rise is
/// visible even when the optimum lies within one step of it.
///
/// The objective is compared in log form, which has the same maximizer and the
/// same rise/fall pattern but stays finite when the throughput underflows.
pub fn brute_force_rates(
    config: &NetworkConfig,
    scheme: SchemeKind,
    n_hops: usize,
    grid_step: f64,
    r_t_max: f64,
) -> Result<RateGridResult> {
    if !(grid_step > 0.0) {
        return Err(Error::InvalidArgument("grid_step must be positive".into()));
    }
    let r_e = rate_redundancy(config, n_hops)?;
    let points = ((r_t_max - r_e) / grid_step).floor();
    if !(points >= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "r_t_max ({r_t_max}) must exceed the redundancy rate ({r_e}) by at least two grid steps"
        )));
    }
    let points = points as usize + 1;
    let k = scheme_constant(config, scheme, n_hops)?;
    let r_t_at = |i: usize| r_e + i as f64 * grid_step;
    let values: Vec<f64> = (0..points)
        .map(|i| log_rate_objective(k, n_hops, r_t_at(i), r_e))
        .collect();

    let (best_idx, best) =
        values.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );

    let tol = SIGN_TOLERANCE * best.abs().max(1.0);
    let mut sign_changes = 0;
    let mut last_sign = 0i8;
    let mut rises_first = false;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let s = if d > tol {
            1
        } else if d < -tol {
            -1
        } else {
            continue;
        };
        if last_sign == 0 {
            rises_first = s > 0;
        } else if s != last_sign {
            sign_changes += 1;
        }
        last_sign = s;
    }

    Ok(RateGridResult {
        r_t_best: r_t_at(best_idx),
        throughput_best: best.exp(),
        log_throughput_best: best,
        grid_step,
        points,
        sign_changes,
        rises_first,
    })
}
