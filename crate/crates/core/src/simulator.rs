//! Monte Carlo oracle for the analytic results.
//!
//! Each trial draws Rayleigh fading for every legitimate hop, a Poisson field
//! of eavesdroppers (fresh per hop, or one field shared by all hops), and
//! per-eavesdropper fading, then plays out the transmission scheme.
//!
//! Trial `t` draws from its own ChaCha8 stream (key from the master seed,
//! stream id `t`), and trials are reduced in fixed-size blocks in index
//! order, so a report is bit-identical for a given seed whatever the number
//! of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{performance_report, sop_end_to_end, sop_fixed_eavesdroppers};
use crate::error::{Error, Result};
use crate::model::{path_gain, HopLayout, NetworkConfig, RateDesign, SchemeKind};

/// Rectangular window in which eavesdroppers are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimRegion {
    pub width: f64,
    pub height: f64,
    pub center: [f64; 2],
}

impl SimRegion {
    pub fn new(width: f64, height: f64, center: [f64; 2]) -> Result<Self> {
        if !(width > 0.0 && height > 0.0) || !width.is_finite() || !height.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "region dimensions must be positive (got {width} x {height})"
            )));
        }
        Ok(Self { width, height, center })
    }

    /// 2000 m × 2000 m centred on the path midpoint.
    pub fn around_path(config: &NetworkConfig) -> Self {
        Self::centered(config, 2000.0, 2000.0)
    }

    pub fn centered(config: &NetworkConfig, width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            center: [0.5 * config.length, 0.0],
        }
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MobilityModel {
    /// A fresh eavesdropper field for every hop.
    IndependentPerHop,
    /// One eavesdropper field for the whole path; fading still redrawn per hop.
    FixedAcrossHops,
}

impl MobilityModel {
    pub fn as_str(self) -> &'static str {
        match self {
            MobilityModel::IndependentPerHop => "independent",
            MobilityModel::FixedAcrossHops => "fixed",
        }
    }
}

/// Monte Carlo estimate with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    /// Fewer than 30 successes or failures: the Wald interval is unreliable.
    pub low_count: bool,
}

const LOW_COUNT: u64 = 30;

impl SimEstimate {
    /// Binomial proportion with a Wald standard error.
    pub fn proportion(successes: u64, trials: u64) -> Self {
        let mean = successes as f64 / trials as f64;
        let std_error = (mean * (1.0 - mean) / trials as f64).sqrt();
        Self {
            trials,
            mean,
            std_error,
            ci95_low: (mean - 1.96 * std_error).max(0.0),
            ci95_high: (mean + 1.96 * std_error).min(1.0),
            low_count: successes < LOW_COUNT || trials - successes < LOW_COUNT,
        }
    }

    pub fn unbounded(trials: u64, mean: f64, std_error: f64) -> Self {
        Self {
            trials,
            mean,
            std_error,
            ci95_low: mean - 1.96 * std_error,
            ci95_high: mean + 1.96 * std_error,
            low_count: false,
        }
    }

    /// Standard score of `reference` against this estimate.
    pub fn z_score(&self, reference: f64) -> f64 {
        ratio_or_inf(self.mean - reference, self.std_error)
    }

    /// Score-test statistic: the difference scaled by the standard error the
    /// estimator would have if `reference` were the true value. Used for
    /// low-count estimates, whose own standard error is unreliable or zero.
    pub fn score_z(&self, reference: f64, null_std_error: f64) -> f64 {
        ratio_or_inf(self.mean - reference, null_std_error)
    }
}

fn ratio_or_inf(diff: f64, se: f64) -> f64 {
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    /// Fraction of slots in which a hop transmitted.
    pub p_t_hop: SimEstimate,
    pub p_c_path: SimEstimate,
    pub p_so_path: SimEstimate,
    /// Ratio of means: `R_s·Σ delivered / Σ slots`.
    pub throughput: SimEstimate,
    /// Mean over trials of `R_s·delivered / slots`.
    pub throughput_mean_of_ratios: SimEstimate,
    pub mean_slots_per_hop: SimEstimate,
    pub master_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub trials: u64,
    pub master_seed: u64,
    pub mobility: MobilityModel,
    pub region: SimRegion,
    /// Longest an on-off hop may wait before the trial is abandoned.
    pub slot_cap: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

pub const DEFAULT_SLOT_CAP: u64 = 1_000_000;

impl SimOptions {
    pub fn new(config: &NetworkConfig, trials: u64, master_seed: u64) -> Self {
        Self {
            trials,
            master_seed,
            mobility: MobilityModel::IndependentPerHop,
            region: SimRegion::around_path(config),
            slot_cap: DEFAULT_SLOT_CAP,
            workers: None,
        }
    }

    pub fn with_mobility(mut self, mobility: MobilityModel) -> Self {
        self.mobility = mobility;
        self
    }

    pub fn with_region(mut self, region: SimRegion) -> Self {
        self.region = region;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_slot_cap(mut self, slot_cap: u64) -> Self {
        self.slot_cap = slot_cap;
        self
    }
}

/// Homogeneous Poisson field over `region`: a Poisson count with mean
/// `λ_e·area`, then i.i.d. uniform positions.
pub fn sample_eavesdroppers<R: Rng + ?Sized>(region: &SimRegion, lambda_e: f64, rng: &mut R) -> Vec<[f64; 2]> {
    let mean = lambda_e * region.area();
    if !(mean > 0.0) {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive finite Poisson mean").sample(rng) as usize;
    let (x0, y0) = (
        region.center[0] - 0.5 * region.width,
        region.center[1] - 0.5 * region.height,
    );
    (0..count)
        .map(|_| {
            [
                x0 + region.width * rng.random::<f64>(),
                y0 + region.height * rng.random::<f64>(),
            ]
        })
        .collect()
}

const BLOCK: u64 = 1024;

/// Exact integer sums over a block of trials plus the one float sum,
/// accumulated in trial order.
#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    trials: u64,
    slots: u64,
    slots_sq: u64,
    hop_slots_sq: u64,
    delivered: u64,
    delivered_slots: u64,
    outages: u64,
    ratio_sum: f64,
    ratio_sq_sum: f64,
}

impl Tally {
    fn merge(&mut self, o: &Tally) {
        self.trials += o.trials;
        self.slots += o.slots;
        self.slots_sq += o.slots_sq;
        self.hop_slots_sq += o.hop_slots_sq;
        self.delivered += o.delivered;
        self.delivered_slots += o.delivered_slots;
        self.outages += o.outages;
        self.ratio_sum += o.ratio_sum;
        self.ratio_sq_sum += o.ratio_sq_sum;
    }
}

struct TrialPlan<'a> {
    scheme: SchemeKind,
    rates: &'a RateDesign,
    config: &'a NetworkConfig,
    hop_gain: f64,
    transmitters: Vec<[f64; 2]>,
    options: &'a SimOptions,
    key: [u8; 32],
}

struct TrialOutcome {
    slots: u64,
    hop_slots_sq: u64,
    delivered: bool,
    outage: bool,
}

impl TrialPlan<'_> {
    fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(trial);
        rng
    }

    fn run(&self, trial: u64) -> Result<TrialOutcome> {
        let mut rng = self.rng(trial);
        let cfg = self.config;
        let p = cfg.p;
        let shared = match self.options.mobility {
            MobilityModel::FixedAcrossHops => Some(sample_eavesdroppers(&self.options.region, cfg.lambda_e, &mut rng)),
            MobilityModel::IndependentPerHop => None,
        };

        let mut out = TrialOutcome {
            slots: 0,
            hop_slots_sq: 0,
            delivered: true,
            outage: false,
        };
        for (hop, tx) in self.transmitters.iter().enumerate() {
            let hop_slots = match self.scheme {
                SchemeKind::Oft => {
                    let mut s = 0u64;
                    loop {
                        s += 1;
                        let h: f64 = Exp1.sample(&mut rng);
                        if p * h * self.hop_gain > self.rates.beta_t {
                            break;
                        }
                        if s >= self.options.slot_cap {
                            return Err(Error::SlotCap {
                                trial,
                                hop,
                                cap: self.options.slot_cap,
                            });
                        }
                    }
                    s
                }
                SchemeKind::Noft => {
                    let h: f64 = Exp1.sample(&mut rng);
                    if p * h * self.hop_gain <= self.rates.beta_t {
                        out.delivered = false;
                    }
                    1
                }
            };
            out.slots += hop_slots;
            out.hop_slots_sq += hop_slots * hop_slots;

            if out.outage {
                continue;
            }
            let fresh;
            let eavesdroppers = match &shared {
                Some(points) => points,
                None => {
                    fresh = sample_eavesdroppers(&self.options.region, cfg.lambda_e, &mut rng);
                    &fresh
                }
            };
            for e in eavesdroppers {
                let fading: f64 = Exp1.sample(&mut rng);
                let dist = ((e[0] - tx[0]).powi(2) + (e[1] - tx[1]).powi(2)).sqrt();
                if p * fading * path_gain(dist, cfg.alpha) > self.rates.beta_e {
                    out.outage = true;
                    break;
                }
            }
        }
        Ok(out)
    }

    fn run_block(&self, block: u64) -> Result<Tally> {
        let start = block * BLOCK;
        let end = (start + BLOCK).min(self.options.trials);
        let mut t = Tally::default();
        for trial in start..end {
            let o = self.run(trial)?;
            let d = u64::from(o.delivered);
            t.trials += 1;
            t.slots += o.slots;
            t.slots_sq += o.slots * o.slots;
            t.hop_slots_sq += o.hop_slots_sq;
            t.delivered += d;
            t.delivered_slots += d * o.slots;
            t.outages += u64::from(o.outage);
            let ratio = self.rates.r_s * d as f64 / o.slots as f64;
            t.ratio_sum += ratio;
            t.ratio_sq_sum += ratio * ratio;
        }
        Ok(t)
    }
}

/// Runs `options.trials` independent trials of the scheme at the given rates.
pub fn simulate(
    config: &NetworkConfig,
    scheme: SchemeKind,
    n_hops: usize,
    rates: &RateDesign,
    options: &SimOptions,
) -> Result<SimReport> {
    if options.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(rates.beta_t >= 0.0 && rates.beta_e >= 0.0) {
        return Err(Error::InvalidArgument("rate thresholds must be non-negative".into()));
    }
    let layout = HopLayout::new(config, n_hops)?;
    let plan = TrialPlan {
        scheme,
        rates,
        config,
        hop_gain: path_gain(config.length / n_hops as f64, config.alpha),
        transmitters: layout.transmitters().to_vec(),
        options,
        key: ChaCha8Rng::seed_from_u64(options.master_seed).get_seed(),
    };

    let blocks = options.trials.div_ceil(BLOCK);
    let run_all = || -> Vec<Result<Tally>> { (0..blocks).into_par_iter().map(|b| plan.run_block(b)).collect() };
    let per_block = match options.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?
            .install(run_all),
        None => run_all(),
    };
    let mut total = Tally::default();
    for tally in per_block {
        total.merge(&tally?);
    }
    Ok(summarize(&total, n_hops, rates.r_s, options.master_seed))
}

fn summarize(t: &Tally, n_hops: usize, r_s: f64, master_seed: u64) -> SimReport {
    let n = t.trials;
    let nf = n as f64;
    let hop_count = n * n_hops as u64;

    // delta-method error for R_s·ΣD/ΣS: residuals R_s·D_i − U·S_i
    let mean_slots = t.slots as f64 / nf;
    let u = r_s * t.delivered as f64 / t.slots as f64;
    let resid_sq =
        r_s * r_s * t.delivered as f64 - 2.0 * r_s * u * t.delivered_slots as f64 + u * u * t.slots_sq as f64;
    let u_se = if n > 1 {
        (resid_sq.max(0.0) / (nf - 1.0) / nf).sqrt() / mean_slots
    } else {
        0.0
    };

    let mor_mean = t.ratio_sum / nf;
    let mor_var = if n > 1 {
        ((t.ratio_sq_sum - nf * mor_mean * mor_mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };

    let hops = hop_count as f64;
    let slots_mean = t.slots as f64 / hops;
    let slots_var = if hop_count > 1 {
        ((t.hop_slots_sq as f64 - hops * slots_mean * slots_mean) / (hops - 1.0)).max(0.0)
    } else {
        0.0
    };

    SimReport {
        trials: n,
        p_t_hop: SimEstimate::proportion(hop_count, t.slots),
        p_c_path: SimEstimate::proportion(t.delivered, n),
        p_so_path: SimEstimate::proportion(t.outages, n),
        throughput: SimEstimate {
            low_count: t.delivered < LOW_COUNT,
            ..SimEstimate::unbounded(n, u, u_se)
        },
        throughput_mean_of_ratios: SimEstimate::unbounded(n, mor_mean, (mor_var / nf).sqrt()),
        mean_slots_per_hop: SimEstimate::unbounded(hop_count, slots_mean, (slots_var / hops).sqrt()),
        master_seed,
    }
}

/// Estimates beyond this many standard errors from the analytic value are flagged.
pub const Z_FLAG: f64 = 4.0;
/// One-sided margin for the fixed-eavesdropper outage bound.
pub const BOUND_MARGIN: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub quantity: String,
    pub analytic: f64,
    pub empirical: f64,
    pub std_error: f64,
    pub z: f64,
    pub flagged: bool,
}

/// Side-by-side analytic and simulated values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub scheme: SchemeKind,
    pub n_hops: usize,
    pub mobility: MobilityModel,
    pub rows: Vec<ComparisonRow>,
    pub report: SimReport,
}

impl Comparison {
    pub fn any_flagged(&self) -> bool {
        self.rows.iter().any(|r| r.flagged)
    }

    pub fn row(&self, quantity: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

/// Two-sided row. Low-count estimates are scored against `null_se`, the
/// standard error implied by the analytic value.
fn two_sided(quantity: &str, analytic: f64, est: &SimEstimate, null_se: f64) -> ComparisonRow {
    let z = if est.low_count {
        est.score_z(analytic, null_se)
    } else {
        est.z_score(analytic)
    };
    ComparisonRow {
        quantity: quantity.to_string(),
        analytic,
        empirical: est.mean,
        std_error: est.std_error,
        z,
        flagged: z.abs() > Z_FLAG,
    }
}

/// Tolerance used for the fixed-eavesdropper quadrature reference.
const FIXED_QUAD_TOLERANCE: f64 = 1e-7;

/// Simulates and lines each estimate up against its closed form.
///
/// Under [`MobilityModel::IndependentPerHop`] every row is flagged at
/// `|z| > 4`. Under [`MobilityModel::FixedAcrossHops`] the closed-form outage
/// is only an upper bound, so its row is flagged when the estimate exceeds it
/// by more than three standard errors; an extra `p_so_fixed` row compares
/// against the fixed-field quadrature at `|z| > 4`.
///
/// Estimates with fewer than 30 events on either side are scored against the
/// standard error implied by the analytic value rather than their own.
pub fn validate_against_analytics(
    config: &NetworkConfig,
    scheme: SchemeKind,
    n_hops: usize,
    rates: &RateDesign,
    options: &SimOptions,
) -> Result<Comparison> {
    let report = simulate(config, scheme, n_hops, rates, options)?;
    let analytic = performance_report(config, scheme, n_hops, rates)?;

    let binomial_se = |p: f64, est: &SimEstimate| (p * (1.0 - p) / est.trials as f64).sqrt();
    let mut rows = vec![
        two_sided(
            "p_t_hop",
            analytic.p_t_hop,
            &report.p_t_hop,
            binomial_se(analytic.p_t_hop, &report.p_t_hop),
        ),
        two_sided(
            "p_c_path",
            analytic.p_c_path,
            &report.p_c_path,
            binomial_se(analytic.p_c_path, &report.p_c_path),
        ),
    ];
    match options.mobility {
        MobilityModel::IndependentPerHop => {
            rows.push(two_sided(
                "p_so_path",
                analytic.p_so_path,
                &report.p_so_path,
                binomial_se(analytic.p_so_path, &report.p_so_path),
            ));
        }
        MobilityModel::FixedAcrossHops => {
            let bound = sop_end_to_end(config, n_hops, rates.beta_e)?;
            let z = if report.p_so_path.low_count {
                report.p_so_path.score_z(bound, binomial_se(bound, &report.p_so_path))
            } else {
                report.p_so_path.z_score(bound)
            };
            rows.push(ComparisonRow {
                quantity: "p_so_path".into(),
                analytic: bound,
                empirical: report.p_so_path.mean,
                std_error: report.p_so_path.std_error,
                z,
                flagged: z > BOUND_MARGIN,
            });
            let fixed = sop_fixed_eavesdroppers(config, n_hops, rates.beta_e, None, FIXED_QUAD_TOLERANCE)?;
            rows.push(two_sided(
                "p_so_fixed",
                fixed.value,
                &report.p_so_path,
                binomial_se(fixed.value, &report.p_so_path),
            ));
        }
    }
    // with few deliveries the throughput is R_s/N times a rare-event proportion
    let u_null_se = rates.r_s / n_hops as f64 * binomial_se(analytic.p_c_path, &report.p_c_path);
    rows.push(two_sided(
        "throughput",
        analytic.throughput,
        &report.throughput,
        u_null_se,
    ));
    if scheme == SchemeKind::Oft {
        rows.push(two_sided(
            "slots_per_hop",
            1.0 / analytic.p_t_hop,
            &report.mean_slots_per_hop,
            0.0,
        ));
    }

    Ok(Comparison {
        scheme,
        n_hops,
        mobility: options.mobility,
        rows,
        report,
    })
}
