//! The four subcommands. Each returns a table and a short human summary.

use multihop_secrecy::analytics::{high_snr_limit, optimal_rates, performance_report, sop_end_to_end, throughput};
use multihop_secrecy::model::{NetworkConfig, SchemeKind};
use multihop_secrecy::optimizer::optimize_hops;
use multihop_secrecy::simulator::{simulate, validate_against_analytics, SimOptions};
use rayon::prelude::*;

use crate::spec::{ExperimentSpec, SimSpec, SweepAxis};
use crate::table::{Cell, Table};
use crate::CliError;

/// Result of a subcommand. `failure` is reported after the table is written.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(table: Table, summary: Vec<String>) -> Self {
        Self {
            table,
            summary,
            failure: None,
        }
    }
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// High-SNR limits, or NaN when there are no eavesdroppers to bound.
fn limits(cfg: &NetworkConfig, scheme: SchemeKind, n: usize) -> Result<(f64, f64), CliError> {
    if cfg.lambda_e == 0.0 {
        return Ok((f64::NAN, f64::NAN));
    }
    let l = high_snr_limit(cfg, scheme, n)?;
    Ok((l.r_s_limit, l.throughput_limit))
}

fn sim_options(cfg: &NetworkConfig, sim: &SimSpec) -> Result<SimOptions, CliError> {
    Ok(SimOptions::new(cfg, sim.trials, sim.master_seed)
        .with_mobility(sim.mobility)
        .with_region(sim.region(cfg)?)
        .with_slot_cap(sim.slot_cap))
}

pub fn analyze(spec: &ExperimentSpec) -> Result<Outcome, CliError> {
    if spec.sweep.is_some() {
        return Err(CliError::Config(
            "analyze takes no [sweep] block; use the sweep command".into(),
        ));
    }
    let n = spec
        .n_hops
        .ok_or_else(|| CliError::Config("analyze needs a hop count (--hops or [design] n_hops)".into()))?;
    let cfg = &spec.config;
    let mut table = Table::new(
        spec.echo("analyze"),
        cols(&[
            "scheme",
            "n_hops",
            "r_t",
            "r_s",
            "r_e",
            "beta_t",
            "beta_e",
            "p_t_hop",
            "p_c_hop",
            "p_c_path",
            "p_so_hop",
            "p_so_path",
            "throughput",
            "r_s_limit",
            "throughput_limit",
        ]),
    );
    let mut summary = Vec::new();
    for &scheme in spec.scheme.schemes() {
        let rates = optimal_rates(cfg, scheme, n)?;
        let rep = performance_report(cfg, scheme, n, &rates)?;
        let (r_s_inf, u_inf) = limits(cfg, scheme, n)?;
        table.push(vec![
            scheme.as_str().into(),
            n.into(),
            rates.r_t.into(),
            rates.r_s.into(),
            rates.r_e.into(),
            rates.beta_t.into(),
            rates.beta_e.into(),
            rep.p_t_hop.into(),
            rep.p_c_hop.into(),
            rep.p_c_path.into(),
            rep.p_so_hop.into(),
            rep.p_so_path.into(),
            rep.throughput.into(),
            r_s_inf.into(),
            u_inf.into(),
        ]);
        summary.push(format!(
            "{scheme}: N={n} R_t={:.6} R_s={:.6} R_e={:.6} P_so={:.6} U={:.6e}",
            rates.r_t, rates.r_s, rates.r_e, rep.p_so_path, rep.throughput
        ));
    }
    Ok(Outcome::ok(table, summary))
}

pub fn optimize(spec: &ExperimentSpec) -> Result<Outcome, CliError> {
    let cfg = &spec.config;
    let mut table = Table::new(
        spec.echo("optimize"),
        cols(&["scheme", "n_hops", "throughput", "r_t", "r_s", "r_e", "optimal"]),
    );
    let mut summary = Vec::new();
    for &scheme in spec.scheme.schemes() {
        let res = optimize_hops(cfg, scheme, spec.n_max)?;
        for p in &res.profile {
            table.push(vec![
                scheme.as_str().into(),
                p.n_hops.into(),
                p.throughput.into(),
                p.rates.r_t.into(),
                p.rates.r_s.into(),
                p.rates.r_e.into(),
                (p.n_hops == res.n_star).into(),
            ]);
        }
        summary.push(format!(
            "{scheme}: n_star={} U*={:.6e} R_t*={:.6} R_s*={:.6}",
            res.n_star, res.throughput_star, res.rates_star.r_t, res.rates_star.r_s
        ));
    }
    Ok(Outcome::ok(table, summary))
}

pub fn simulate_cmd(spec: &ExperimentSpec) -> Result<Outcome, CliError> {
    let cfg = &spec.config;
    let sim = spec.sim.clone().unwrap_or_default();
    let mut echo_spec = spec.clone();
    echo_spec.sim = Some(sim.clone());
    let opts = sim_options(cfg, &sim)?;
    let mut table = Table::new(
        echo_spec.echo("simulate"),
        cols(&[
            "scheme",
            "n_hops",
            "mobility",
            "quantity",
            "analytic",
            "empirical",
            "std_error",
            "z",
            "flagged",
        ]),
    );
    let mut summary = Vec::new();
    let mut flagged = Vec::new();
    for &scheme in spec.scheme.schemes() {
        let n = match spec.n_hops {
            Some(n) => n,
            None => optimize_hops(cfg, scheme, spec.n_max)?.n_star,
        };
        let rates = optimal_rates(cfg, scheme, n)?;
        let cmp = validate_against_analytics(cfg, scheme, n, &rates, &opts)?;
        for row in &cmp.rows {
            table.push(vec![
                scheme.as_str().into(),
                n.into(),
                sim.mobility.as_str().into(),
                row.quantity.as_str().into(),
                row.analytic.into(),
                row.empirical.into(),
                row.std_error.into(),
                row.z.into(),
                row.flagged.into(),
            ]);
            if row.flagged {
                flagged.push(format!("{scheme} N={n} {} (z = {:.2})", row.quantity, row.z));
            }
            summary.push(format!(
                "{scheme} N={n} {:<14} analytic={:.6e} empirical={:.6e} z={:+.2}{}",
                row.quantity,
                row.analytic,
                row.empirical,
                row.z,
                if row.flagged { "  FLAGGED" } else { "" }
            ));
        }
    }
    let failure = (!flagged.is_empty())
        .then(|| CliError::ZScore(format!("estimates disagree with analytics: {}", flagged.join(", "))));
    Ok(Outcome {
        table,
        summary,
        failure,
    })
}

struct SchemePoint {
    n: usize,
    r_t: f64,
    r_s: f64,
    r_e: f64,
    p_so: f64,
    throughput: f64,
    r_s_limit: f64,
    throughput_limit: f64,
    sim: Option<[f64; 4]>,
}

fn sweep_point(
    spec: &ExperimentSpec,
    axis: SweepAxis,
    value: f64,
    scheme: SchemeKind,
) -> Result<SchemePoint, CliError> {
    let (cfg, pinned) = spec.at_sweep_value(axis, value)?;
    let (n, rates) = match pinned {
        Some(n) => (n, optimal_rates(&cfg, scheme, n)?),
        None => {
            let res = optimize_hops(&cfg, scheme, spec.n_max)?;
            (res.n_star, res.rates_star)
        }
    };
    let (r_s_limit, throughput_limit) = limits(&cfg, scheme, n)?;
    let sim = match &spec.sim {
        None => None,
        Some(s) => {
            let rep = simulate(&cfg, scheme, n, &rates, &sim_options(&cfg, s)?)?;
            Some([
                rep.p_so_path.mean,
                rep.p_so_path.std_error,
                rep.throughput.mean,
                rep.throughput.std_error,
            ])
        }
    };
    Ok(SchemePoint {
        n,
        r_t: rates.r_t,
        r_s: rates.r_s,
        r_e: rates.r_e,
        p_so: sop_end_to_end(&cfg, n, rates.beta_e)?,
        throughput: throughput(&cfg, scheme, n, &rates)?,
        r_s_limit,
        throughput_limit,
        sim,
    })
}

pub fn sweep(spec: &ExperimentSpec) -> Result<Outcome, CliError> {
    let sw = spec
        .sweep
        .ok_or_else(|| CliError::Config("sweep needs a [sweep] block in the config file".into()))?;
    let schemes = spec.scheme.schemes();
    let mut columns = vec![sw.axis.as_str().to_string()];
    for s in schemes {
        for c in [
            "n_star",
            "r_t",
            "r_s",
            "r_e",
            "p_so",
            "throughput",
            "r_s_limit",
            "throughput_limit",
        ] {
            columns.push(format!("{s}_{c}"));
        }
        if spec.sim.is_some() {
            for c in ["sim_p_so", "sim_p_so_se", "sim_throughput", "sim_throughput_se"] {
                columns.push(format!("{s}_{c}"));
            }
        }
    }
    let values = sw.values();
    let points: Vec<Vec<SchemePoint>> = values
        .par_iter()
        .map(|&v| schemes.iter().map(|&s| sweep_point(spec, sw.axis, v, s)).collect())
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new(spec.echo("sweep"), columns);
    for (v, per_scheme) in values.iter().zip(&points) {
        let mut row: Vec<Cell> = vec![match sw.axis {
            SweepAxis::NHops => (*v as usize).into(),
            _ => (*v).into(),
        }];
        for p in per_scheme {
            row.extend([
                p.n.into(),
                p.r_t.into(),
                p.r_s.into(),
                p.r_e.into(),
                p.p_so.into(),
                p.throughput.into(),
                p.r_s_limit.into(),
                p.throughput_limit.into(),
            ]);
            if let Some(sim) = p.sim {
                row.extend(sim.map(Cell::from));
            }
        }
        table.push(row);
    }
    let summary = vec![format!(
        "{} points over {} in [{}, {}]",
        values.len(),
        sw.axis.as_str(),
        sw.min,
        sw.max
    )];
    Ok(Outcome::ok(table, summary))
}
