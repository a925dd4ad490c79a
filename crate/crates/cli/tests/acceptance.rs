//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Reference values come from the oracles below, written independently of
//! the library: a Stirling-series gamma, Lambert W by bisection, the secrecy
//! threshold by bisecting the outage equation itself, and a composite Simpson
//! rule for the fixed-field outage integral.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{LN_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use multihop_secrecy::analytics::{
    high_snr_limit, optimal_rates, rate_redundancy, scheme_constant, sop_end_to_end, sop_fixed_eavesdroppers,
    throughput,
};
use multihop_secrecy::model::{db_to_linear, rates_from};
use multihop_secrecy::optimizer::{brute_force_rates, optimize_hops};
use multihop_secrecy::simulator::{validate_against_analytics, MobilityModel, SimOptions};
use multihop_secrecy::specfun::lambert_w0;
use multihop_secrecy::{NetworkConfig, SchemeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

mod oracle {
    use super::*;

    /// ln Γ(x) for x > 0: shift up to x ≥ 15, then the Stirling series.
    pub fn ln_gamma(mut x: f64) -> f64 {
        let mut shift = 0.0;
        while x < 15.0 {
            shift -= x.ln();
            x += 1.0;
        }
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
        shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
    }

    pub fn gamma(x: f64) -> f64 {
        ln_gamma(x).exp()
    }

    /// W₀(e^t) for real t, by bisection on u = ln W in e^u + u = t.
    pub fn lambert_w_of_exp(t: f64) -> f64 {
        let (mut lo, mut hi) = if t <= 1.0 {
            (t - t.exp() - 1.0, t)
        } else {
            ((t - t.ln()).ln(), t.ln())
        };
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if mid.exp() + mid < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    pub fn k1(cfg: &NetworkConfig) -> f64 {
        PI * cfg.lambda_e * gamma(2.0 / cfg.alpha + 1.0)
    }

    pub fn sop(cfg: &NetworkConfig, n: usize, beta_e: f64) -> f64 {
        let x = beta_e / cfg.p;
        -(-(n as f64) * k1(cfg) * x.powf(-2.0 / cfg.alpha) * (-x).exp()).exp_m1()
    }

    /// β_e solving sop(β_e) = ε, by bisection on ln(β_e/p).
    pub fn beta_e(cfg: &NetworkConfig, n: usize) -> f64 {
        let target = (-(-cfg.epsilon).ln_1p()).ln();
        let lnk = (n as f64 * k1(cfg)).ln();
        let g = |u: f64| lnk - 2.0 / cfg.alpha * u - u.exp() - target;
        let (mut lo, mut hi) = (-700.0, 700.0);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cfg.p * (0.5 * (lo + hi)).exp()
    }

    pub fn r_e(cfg: &NetworkConfig, n: usize) -> f64 {
        beta_e(cfg, n).ln_1p() / LN_2
    }

    pub fn k(cfg: &NetworkConfig, scheme: SchemeKind, n: usize) -> f64 {
        let k2 = ((cfg.length / n as f64).powf(cfg.alpha) + 1.0) / cfg.p;
        match scheme {
            SchemeKind::Oft => k2,
            SchemeKind::Noft => n as f64 * k2,
        }
    }

    /// ln of (R_t − R_e)·exp[−K(2^R_t − 1)]/N.
    pub fn log_objective(k: f64, n: usize, r_t: f64, r_e: f64) -> f64 {
        (r_t - r_e).ln() - k * (r_t * LN_2).exp_m1() - (n as f64).ln()
    }

    pub fn throughput(cfg: &NetworkConfig, scheme: SchemeKind, n: usize, r_s: f64, beta_t: f64) -> f64 {
        r_s * (-k(cfg, scheme, n) * beta_t).exp() / n as f64
    }

    /// Large-SNR limits (R_s∞, U∞).
    pub fn high_snr(cfg: &NetworkConfig, scheme: SchemeKind, n: usize) -> (f64, f64) {
        let a = cfg.alpha;
        let ln_arg = (a / 2.0).ln() - a / 2.0 * ((-(-cfg.epsilon).ln_1p()) / (n as f64 * k1(cfg))).ln();
        let w = lambert_w_of_exp(ln_arg);
        let k3 = 2.0 / a * ((cfg.length / n as f64).powf(a) + 1.0) * w;
        let k = match scheme {
            SchemeKind::Oft => k3,
            SchemeKind::Noft => n as f64 * k3,
        };
        let w_inv = lambert_w_of_exp(-k.ln());
        (w_inv / LN_2, w_inv / (n as f64 * LN_2) * (-k * w_inv.exp()).exp())
    }

    /// Fixed-field outage by composite Simpson on a square around the path.
    pub fn fixed_sop(cfg: &NetworkConfig, n: usize, beta_e: f64, half_width: f64, step: f64) -> f64 {
        let c = beta_e / cfg.p;
        let d = cfg.length / n as f64;
        let tx: Vec<f64> = (0..n).map(|i| i as f64 * d).collect();
        let m = (2.0 * half_width / step).round() as usize;
        let m = m + m % 2;
        let h = 2.0 * half_width / m as f64;
        let (cx, cy) = (0.5 * cfg.length, 0.0);
        let w = |i: usize| {
            if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        };
        let mut total = 0.0;
        for i in 0..=m {
            let x = cx - half_width + i as f64 * h;
            let mut col = 0.0;
            for j in 0..=m {
                let y = cy - half_width + j as f64 * h;
                let mut log_safe = 0.0;
                for &a in &tx {
                    let r2 = (x - a) * (x - a) + y * y;
                    log_safe += (-(-c * (r2.powf(0.5 * cfg.alpha) + 1.0)).exp()).ln_1p();
                }
                col += w(j) * -log_safe.exp_m1();
            }
            total += w(i) * col;
        }
        let integral = total * h * h / 9.0;
        -(-cfg.lambda_e * integral).exp_m1()
    }
}

fn reference_defaults() -> NetworkConfig {
    NetworkConfig::new(50.0, 3.0, db_to_linear(100.0), 1e-5, 0.05).unwrap()
}

fn random_case(rng: &mut ChaCha8Rng) -> (NetworkConfig, usize) {
    let cfg = NetworkConfig {
        alpha: rng.random_range(2.0..=6.0),
        lambda_e: 10f64.powf(rng.random_range(-7.0..=-3.0)),
        p: 10f64.powf(rng.random_range(4.0..=12.0)),
        ..reference_defaults()
    };
    cfg.validate().unwrap();
    (cfg, rng.random_range(1..=30))
}

const SIGN_TOL: f64 = 1e-12;

/// Argmax index and unimodality of a sampled objective.
fn grid_shape(values: &[f64]) -> (usize, bool) {
    let (best_idx, best) =
        values.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    let tol = SIGN_TOL * best.abs().max(1.0);
    let signs: Vec<i8> = values
        .windows(2)
        .filter_map(|w| {
            let d = w[1] - w[0];
            (d.abs() > tol).then_some(if d > 0.0 { 1 } else { -1 })
        })
        .collect();
    let changes = signs.windows(2).filter(|s| s[0] != s[1]).count();
    (best_idx, signs.first() == Some(&1) && changes == 1)
}

fn c01_reference_optima() -> Check {
    let cfg = reference_defaults();
    let start = Instant::now();
    let oft = optimize_hops(&cfg, SchemeKind::Oft, 20).map_err(|e| e.to_string())?;
    let noft = optimize_hops(&cfg, SchemeKind::Noft, 20).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    // oracle: maximise each profile point's objective by golden section
    let oracle_best = |scheme: SchemeKind| {
        let mut best = (0, f64::NEG_INFINITY);
        for n in 1..=20 {
            let r_e = oracle::r_e(&cfg, n);
            let k = oracle::k(&cfg, scheme, n);
            let f = |r: f64| oracle::log_objective(k, n, r, r_e);
            let (mut a, mut b) = (r_e + 1e-12, r_e + 40.0);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..200 {
                let (x1, x2) = (b - g * (b - a), a + g * (b - a));
                if f(x1) < f(x2) {
                    a = x1;
                } else {
                    b = x2;
                }
            }
            let u = f(0.5 * (a + b));
            if u > best.1 {
                best = (n, u);
            }
        }
        best.0
    };
    let (o_oft, o_noft) = (oracle_best(SchemeKind::Oft), oracle_best(SchemeKind::Noft));
    ensure!(oft.n_star == 5, "OFT n_star = {} (expected 5)", oft.n_star);
    ensure!(noft.n_star == 2, "NOFT n_star = {} (expected 2)", noft.n_star);
    ensure!(o_oft == 5 && o_noft == 2, "oracle optima {o_oft}/{o_noft}");
    ensure!(elapsed.as_secs_f64() < 1.0, "search took {elapsed:?}");
    Ok(format!(
        "OFT N*=5, NOFT N*=2 (oracle agrees), search {:.2} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn c02_constraint_binding() -> Check {
    let cfg = reference_defaults();
    let mut worst: f64 = 0.0;
    for scheme in SchemeKind::ALL {
        for n in 1..=20 {
            let rates = optimal_rates(&cfg, scheme, n).map_err(|e| e.to_string())?;
            let lib = sop_end_to_end(&cfg, n, rates.beta_e).map_err(|e| e.to_string())?;
            let ora = oracle::sop(&cfg, n, rates.beta_e);
            let gap = (lib - 0.05).abs().max((ora - 0.05).abs());
            ensure!(gap <= 1e-9, "{scheme} N={n}: P_so = {lib} (oracle {ora})");
            worst = worst.max(gap);
        }
    }
    Ok(format!("40 designs, max |P_so - 0.05| = {worst:.2e}"))
}

fn random_cases() -> Vec<(SchemeKind, NetworkConfig, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_231_103);
    let mut out = Vec::new();
    for scheme in SchemeKind::ALL {
        for _ in 0..50 {
            let (cfg, n) = random_case(&mut rng);
            out.push((scheme, cfg, n));
        }
    }
    out
}

fn c03_grid_oracle() -> Check {
    const STEP: f64 = 1e-4;
    let mut worst: f64 = 0.0;
    let mut unimodal = 0;
    let cases = random_cases();
    for (scheme, cfg, n) in &cases {
        let (scheme, n) = (*scheme, *n);
        let rates = optimal_rates(cfg, scheme, n).map_err(|e| e.to_string())?;
        let r_e = oracle::r_e(cfg, n);
        let k = oracle::k(cfg, scheme, n);
        let points = (20.0 / STEP).round() as usize;
        let values: Vec<f64> = (0..=points)
            .map(|i| oracle::log_objective(k, n, r_e + i as f64 * STEP, r_e))
            .collect();
        let (idx, shape_ok) = grid_shape(&values);
        let argmax = r_e + idx as f64 * STEP;
        let gap = (rates.r_t - argmax).abs();
        ensure!(
            gap <= STEP,
            "{scheme} N={n} alpha={} lambda_e={:e} p={:e}: R_t* = {} grid argmax {argmax}",
            cfg.alpha,
            cfg.lambda_e,
            cfg.p,
            rates.r_t
        );
        ensure!(shape_ok, "{scheme} N={n} {cfg:?}: grid not unimodal");
        let lib = brute_force_rates(cfg, scheme, n, STEP, rates.r_e + 20.0).map_err(|e| e.to_string())?;
        ensure!(lib.is_unimodal(), "{scheme} N={n} {cfg:?}: library grid not unimodal");
        ensure!(
            (lib.r_t_best - rates.r_t).abs() <= STEP,
            "library grid disagrees at {cfg:?}"
        );
        worst = worst.max(gap);
        unimodal += 1;
    }
    Ok(format!(
        "{} configs, all unimodal ({unimodal}), max |R_t* - argmax| = {worst:.2e}",
        cases.len()
    ))
}

fn c04_foc_residual() -> Check {
    let mut worst: f64 = 0.0;
    for (scheme, cfg, n) in random_cases() {
        let rates = optimal_rates(&cfg, scheme, n).map_err(|e| e.to_string())?;
        let r_e = rate_redundancy(&cfg, n).map_err(|e| e.to_string())?;
        let k = oracle::k(&cfg, scheme, n);
        let lib_k = scheme_constant(&cfg, scheme, n).map_err(|e| e.to_string())?;
        ensure!((lib_k / k - 1.0).abs() < 1e-13, "K mismatch at {cfg:?}");
        let residual = (1.0 - LN_2 * k * rates.r_t.exp2() * (rates.r_t - r_e)).abs();
        ensure!(residual <= 1e-9, "{scheme} N={n} {cfg:?}: residual {residual:e}");
        worst = worst.max(residual);
    }
    Ok(format!("100 configs, max residual = {worst:.2e}"))
}

fn c05_high_snr() -> Check {
    let mut lines = Vec::new();
    for (scheme, n) in [(SchemeKind::Oft, 5), (SchemeKind::Noft, 2)] {
        let cfg = reference_defaults().with_p(1e14).unwrap();
        let (rs_inf, u_inf) = oracle::high_snr(&cfg, scheme, n);
        let lim = high_snr_limit(&cfg, scheme, n).map_err(|e| e.to_string())?;
        ensure!(
            (lim.r_s_limit / rs_inf - 1.0).abs() < 1e-12 && (lim.throughput_limit / u_inf - 1.0).abs() < 1e-12,
            "{scheme}: library limits {lim:?} vs oracle ({rs_inf}, {u_inf})"
        );
        let at = |p: f64| -> Result<(f64, f64), String> {
            let cfg = reference_defaults().with_p(p).map_err(|e| e.to_string())?;
            let r = optimal_rates(&cfg, scheme, n).map_err(|e| e.to_string())?;
            Ok((r.r_s, throughput(&cfg, scheme, n, &r).map_err(|e| e.to_string())?))
        };
        let (rs, u) = at(1e14)?;
        let (d_rs, d_u) = ((rs - rs_inf).abs(), (u - u_inf).abs() / u_inf);
        ensure!(d_rs <= 1e-6, "{scheme}: |R_s - R_s_inf| = {d_rs:e} at p=1e14");
        ensure!(d_u <= 1e-6, "{scheme}: relative U gap {d_u:e} at p=1e14");
        for p in [1e8, 1e10, 1e12] {
            let (rs, u) = at(p)?;
            ensure!(
                (rs / rs_inf - 1.0).abs() < 0.01 && (u / u_inf - 1.0).abs() < 0.01,
                "{scheme}: p={p:e} R_s={rs} U={u} not within 1% of limits"
            );
        }
        lines.push(format!("{scheme} N={n}: dR_s={d_rs:.1e} dU/U={d_u:.1e}"));
    }
    Ok(lines.join(", "))
}

fn c06_monte_carlo() -> Check {
    let cfg = reference_defaults();
    let mut worst: f64 = 0.0;
    let mut seed = 600;
    for scheme in SchemeKind::ALL {
        for n in [1usize, 5, 10] {
            seed += 1;
            let rates = optimal_rates(&cfg, scheme, n).map_err(|e| e.to_string())?;
            let cmp = validate_against_analytics(&cfg, scheme, n, &rates, &SimOptions::new(&cfg, 100_000, seed))
                .map_err(|e| e.to_string())?;
            let k2 = oracle::k(&cfg, SchemeKind::Oft, n);
            let (quantity, expected) = match scheme {
                SchemeKind::Oft => ("p_t_hop", (-rates.beta_t * k2).exp()),
                SchemeKind::Noft => ("p_c_path", (-(n as f64) * rates.beta_t * k2).exp()),
            };
            for (q, ora) in [(quantity, expected), ("p_so_path", oracle::sop(&cfg, n, rates.beta_e))] {
                let row = cmp.row(q).ok_or(format!("missing {q}"))?;
                ensure!(
                    (row.analytic - ora).abs() <= 1e-12,
                    "{scheme} N={n} {q}: library {} oracle {ora}",
                    row.analytic
                );
                ensure!(row.std_error > 0.0, "{scheme} N={n} {q}: zero standard error");
                let z = (row.empirical - ora) / row.std_error;
                ensure!(
                    z.abs() <= 4.0,
                    "{scheme} N={n} {q}: empirical {} vs {ora} (z = {z:.2})",
                    row.empirical
                );
                worst = worst.max(z.abs());
            }
        }
    }
    Ok(format!("6 cells x 1e5 trials, max |z| = {worst:.2}"))
}

fn c07_fixed_eavesdroppers() -> Check {
    let cfg = reference_defaults();
    let n = 5;
    let rates = optimal_rates(&cfg, SchemeKind::Oft, n).map_err(|e| e.to_string())?;
    let opts = SimOptions::new(&cfg, 100_000, 700).with_mobility(MobilityModel::FixedAcrossHops);
    let cmp = validate_against_analytics(&cfg, SchemeKind::Oft, n, &rates, &opts).map_err(|e| e.to_string())?;
    let est = cmp.report.p_so_path;
    let quad = sop_fixed_eavesdroppers(&cfg, n, rates.beta_e, None, 1e-7).map_err(|e| e.to_string())?;
    let simpson = oracle::fixed_sop(&cfg, n, rates.beta_e, 400.0, 0.5);
    ensure!(
        (quad.value - simpson).abs() <= 1e-6,
        "quadrature {} vs Simpson oracle {simpson}",
        quad.value
    );
    ensure!(
        est.mean <= 0.05 + 3.0 * est.std_error,
        "simulated P_so {} exceeds 0.05 + 3 SE",
        est.mean
    );
    let z = (quad.value - est.mean) / est.std_error;
    ensure!(
        z.abs() <= 3.0,
        "quadrature {} vs simulation {} (z = {z:.2})",
        quad.value,
        est.mean
    );
    ensure!(quad.value < 0.05, "quadrature {} not below 0.05", quad.value);
    Ok(format!(
        "simulated {:.5} +/- {:.5}, quadrature {:.6} (Simpson {:.6}), z = {z:.2}",
        est.mean, est.std_error, quad.value, simpson
    ))
}

fn c08_trends() -> Check {
    let base = reference_defaults();
    let mut lam_seq = Vec::new();
    for lam in [1e-7, 1e-6, 1e-5, 1e-4] {
        let cfg = base.with_lambda_e(lam).unwrap();
        lam_seq.push(
            optimize_hops(&cfg, SchemeKind::Oft, 50)
                .map_err(|e| e.to_string())?
                .n_star,
        );
    }
    ensure!(lam_seq.windows(2).all(|w| w[0] <= w[1]), "lambda_e trend {lam_seq:?}");

    let mut detail = vec![format!("lambda_e: OFT {lam_seq:?}")];
    for (scheme, final_n, reached_db) in [(SchemeKind::Oft, 5, 50), (SchemeKind::Noft, 2, 55)] {
        let dbs: Vec<i32> = (30..=120).step_by(5).collect();
        let mut seq = Vec::new();
        for &db in &dbs {
            let cfg = base.with_p(db_to_linear(db as f64)).unwrap();
            seq.push(optimize_hops(&cfg, scheme, 50).map_err(|e| e.to_string())?.n_star);
        }
        ensure!(seq.windows(2).all(|w| w[0] >= w[1]), "{scheme} p trend {seq:?}");
        for (&db, &n) in dbs.iter().zip(&seq) {
            if db >= 60 {
                ensure!(n == final_n, "{scheme} at {db} dB: n_star {n} (expected {final_n})");
            }
        }
        let first = dbs.iter().zip(&seq).find(|(_, &n)| n == final_n).map(|(&d, _)| d);
        ensure!(
            first == Some(reached_db),
            "{scheme} first reaches {final_n} at {first:?} dB"
        );
        detail.push(format!("{scheme} p: {seq:?}"));
    }
    Ok(detail.join("; "))
}

fn c09_dominance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let (mut equal, mut strict) = (0, 0);
    for _ in 0..1000 {
        let (cfg, n) = random_case(&mut rng);
        let k2 = oracle::k(&cfg, SchemeKind::Oft, n);
        let beta_t = 10f64.powf(rng.random_range(-2.0..=(3.0f64).log10())) / k2;
        let r_t = beta_t.ln_1p() / LN_2;
        let r_s = r_t * rng.random_range(0.01..=1.0);
        let rates = rates_from(r_t, r_s).map_err(|e| e.to_string())?;
        let u_oft = throughput(&cfg, SchemeKind::Oft, n, &rates).map_err(|e| e.to_string())?;
        let u_noft = throughput(&cfg, SchemeKind::Noft, n, &rates).map_err(|e| e.to_string())?;
        for (scheme, lib) in [(SchemeKind::Oft, u_oft), (SchemeKind::Noft, u_noft)] {
            let ora = oracle::throughput(&cfg, scheme, n, rates.r_s, rates.beta_t);
            ensure!(
                (lib / ora - 1.0).abs() < 1e-12,
                "{scheme} throughput {lib} vs oracle {ora}"
            );
        }
        ensure!(u_oft >= u_noft, "N={n}: U_OFT {u_oft} < U_NOFT {u_noft}");
        let tie = (u_oft - u_noft).abs() <= 1e-12 * u_oft;
        ensure!(tie == (n == 1), "N={n}: U_OFT {u_oft} U_NOFT {u_noft} tie={tie}");
        if tie {
            equal += 1;
        } else {
            strict += 1;
        }
    }
    Ok(format!("1000 triples: {equal} ties (all N=1), {strict} strict"))
}

fn c10_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |tag: &str, workers: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(format!("{tag}.csv"));
        let out = Command::new(env!("CARGO_BIN_EXE_mhsec"))
            .args([
                "simulate", "--scheme", "both", "--hops", "5", "--trials", "20000", "--seed", "42",
            ])
            .args(["--workers", workers, "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "mhsec exited with {:?}", out.status.code());
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let reference = run("a", "1")?;
    for (tag, workers) in [("b", "1"), ("c", "4"), ("d", "8")] {
        let other = run(tag, workers)?;
        ensure!(other == reference, "output differs with {workers} workers ({tag})");
    }
    Ok(format!(
        "4 runs (workers 1, 1, 4, 8), {} identical bytes",
        reference.len()
    ))
}

fn c11_lemmas() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut violations = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=20);
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(f64::EPSILON..1.0)).collect();
        let prod: f64 = a.iter().map(|x| 1.0 - x).product();
        let sum: f64 = a.iter().sum();
        if prod < 1.0 - sum {
            violations += 1;
        }
    }
    ensure!(violations == 0, "product lemma: {violations} violations");

    for _ in 0..10_000 {
        let c = 10f64.powf(rng.random_range(-6.0..=6.0));
        let mut z: Vec<f64> = (0..10).map(|_| 10f64.powf(rng.random_range(-6.0..=6.0))).collect();
        z.sort_by(f64::total_cmp);
        let h = |z: f64| -> Result<f64, String> { Ok(lambert_w0(1.0 / (c * z)).map_err(|e| e.to_string())? + z.ln()) };
        for w in z.windows(2) {
            let (h1, h2) = (h(w[0])?, h(w[1])?);
            if h2 < h1 || (w[1] > w[0] * (1.0 + 1e-9) && h2 <= h1) {
                violations += 1;
            }
        }
    }
    ensure!(violations == 0, "monotonicity lemma: {violations} violations");

    let mut worst: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let count = 10_000;
    for i in 0..count {
        let x = 10f64.powf(-8.0 + 20.0 * i as f64 / (count - 1) as f64);
        let w = lambert_w0(x).map_err(|e| e.to_string())?;
        worst = worst.max((w * w.exp() - x).abs() / x);
        worst_oracle = worst_oracle.max((w / oracle::lambert_w_of_exp(x.ln()) - 1.0).abs());
    }
    ensure!(worst <= 1e-12, "Lambert round trip residual {worst:e}");
    ensure!(worst_oracle <= 1e-12, "Lambert W vs bisection oracle {worst_oracle:e}");
    Ok(format!(
        "2 x 1e4 instances, 0 violations; W round trip {worst:.1e}, vs oracle {worst_oracle:.1e}"
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("reference optima", c01_reference_optima),
        ("constraint binding", c02_constraint_binding),
        ("closed form vs grid", c03_grid_oracle),
        ("first-order residual", c04_foc_residual),
        ("high-SNR convergence", c05_high_snr),
        ("Monte Carlo agreement", c06_monte_carlo),
        ("fixed eavesdroppers", c07_fixed_eavesdroppers),
        ("hop-count trends", c08_trends),
        ("scheme dominance", c09_dominance),
        ("determinism", c10_determinism),
        ("lemma suites", c11_lemmas),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
