use std::path::{Path, PathBuf};

use effcomm::simloop::{run, SimReport};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{create_dir, write_csv, write_json};
use crate::SimulateArgs;

pub fn execute(args: &SimulateArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.sim.seed = seed;
    }
    if args.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("serializable"));
        return Ok(());
    }
    let out = args.out.clone().or_else(|| cfg.output.dir.clone());

    if let Some(spec) = &args.sweep {
        let seeds = parse_sweep(spec)?;
        let out = out.ok_or_else(|| CliError::Usage("--sweep needs --out".into()))?;
        return sweep(&cfg, &seeds, &out);
    }

    let report = run(&cfg.sim)?;
    match out {
        Some(dir) => {
            write_report(&report, &dir)?;
            println!("{}", summary_line(&report));
        }
        None => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
    }
    Ok(())
}

/// Accepts `a..b` or `seeds=a..b`, both ends inclusive.
pub fn parse_sweep(spec: &str) -> Result<Vec<u64>> {
    let range = spec.strip_prefix("seeds=").unwrap_or(spec);
    let bad = || CliError::Usage(format!("--sweep expects a..b, got {spec:?}"));
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn sweep(cfg: &RunConfig, seeds: &[u64], out: &Path) -> Result<()> {
    create_dir(out)?;
    let reports: Vec<SimReport> = seeds
        .par_iter()
        .map(|&seed| {
            let mut sim = cfg.sim.clone();
            sim.seed = seed;
            run(&sim).map_err(CliError::from)
        })
        .collect::<Result<_>>()?;
    for report in &reports {
        write_report(report, &out.join(format!("seed_{}", report.seed)))?;
    }
    write_csv(
        &out.join("summary.csv"),
        &[
            "seed",
            "final_viability",
            "drop_slot",
            "policy_bits",
            "raw_bits",
            "delta_bits",
            "te_bound_bits",
            "reference_handovers",
        ],
        reports.iter().map(|r| {
            vec![
                r.seed.to_string(),
                r.final_viability.to_string(),
                r.drop_slot.map_or(String::new(), |s| s.to_string()),
                last(&r.bits.policy).to_string(),
                last(&r.bits.raw).to_string(),
                last(&r.bits.delta).to_string(),
                r.te.bound.last().copied().unwrap_or(0.0).to_string(),
                r.handovers.reference.len().to_string(),
            ]
        }),
    )?;
    for r in &reports {
        println!("{}", summary_line(r));
    }
    Ok(())
}

fn last(v: &[u64]) -> u64 {
    v.last().copied().unwrap_or(0)
}

fn summary_line(r: &SimReport) -> String {
    format!(
        "seed {}: final viability {}, bits policy/raw/delta {}/{}/{}, TE bound {:.3}, handovers {}",
        r.seed,
        r.final_viability,
        last(&r.bits.policy),
        last(&r.bits.raw),
        last(&r.bits.delta),
        r.te.bound.last().copied().unwrap_or(0.0),
        r.handovers.reference.len()
    )
}

/// `report.json` plus one CSV per series.
pub fn write_report(report: &SimReport, dir: &Path) -> Result<()> {
    create_dir(dir)?;
    write_json(&dir.join("report.json"), report)?;
    let slots = 0..report.horizon;
    let series = |name: &str, header: &str, values: Vec<String>| -> Result<()> {
        let path: PathBuf = dir.join(name);
        write_csv(
            &path,
            &["slot", header],
            slots.clone().zip(values).map(|(t, v)| [t.to_string(), v]),
        )
    };
    let fmt_f = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>();
    let fmt_u = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>();
    series("viability.csv", "viability", fmt_f(&report.viability))?;
    series("bits_policy.csv", "cumulative_bits", fmt_u(&report.bits.policy))?;
    series("bits_raw.csv", "cumulative_bits", fmt_u(&report.bits.raw))?;
    series("bits_delta.csv", "cumulative_bits", fmt_u(&report.bits.delta))?;
    series("te_bound.csv", "cumulative_bits", fmt_f(&report.te.bound))?;
    write_csv(
        &dir.join("windowed_te.csv"),
        &["slot", "bits"],
        report
            .te
            .windowed
            .iter()
            .map(|w| [w.slot.to_string(), w.bits.to_string()]),
    )?;
    write_csv(
        &dir.join("handovers.csv"),
        &["decider", "slot", "from", "to"],
        [("reference", &report.handovers.reference), ("receiver", &report.handovers.receiver)]
            .into_iter()
            .flat_map(|(who, events)| {
                events.iter().map(move |e| {
                    [who.to_string(), e.slot.to_string(), e.from.to_string(), e.to.to_string()]
                })
            }),
    )?;
    Ok(())
}
