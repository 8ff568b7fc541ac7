use effcomm::handover::{decide, serving_margin, to_symbols, ActionSeries};
use effcomm::infotheory::{discretize, te_from_slices, windowed_te_from_slices, BinningSpec};
use effcomm::{BiasCorrection, HandoverParams, SymbolSeries, TeConfig, TraceEvent};

use crate::cmd::read_trace;
use crate::error::{CliError, Result};
use crate::output::write_csv;
use crate::{TeArgs, TeTarget};

pub fn execute(args: &TeArgs) -> Result<()> {
    let trace = read_trace(&args.trace)?;
    let params = match args.target {
        TeTarget::A2a4 => HandoverParams::a2a4(),
        _ => HandoverParams::a3(),
    };
    let decisions = decide(&trace, &params);
    let target = match args.target {
        TeTarget::Events => SymbolSeries::from_symbols(
            trace
                .events
                .iter()
                .map(|e| usize::from(*e == TraceEvent::HoSuccess))
                .collect(),
        ),
        TeTarget::A3 | TeTarget::A2a4 => to_symbols(&decisions),
    };

    let (values, default_range) = source_values(&args.source, &trace, &decisions)?;
    let (lo, hi) = default_range;
    let bins = BinningSpec::new(args.lo.unwrap_or(lo), args.hi.unwrap_or(hi), args.bins)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let source = discretize(&values, &bins)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .series;

    let bias = if args.miller_madow {
        BiasCorrection::MillerMadow
    } else {
        BiasCorrection::None
    };
    let cfg = TeConfig::new(args.k, args.l).with_bias_correction(bias);
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let est = te_from_slices(source.symbols(), target.symbols(), &cfg)
        .map_err(|e| CliError::Data(e.to_string()))?;
    println!("global TE: {} bits", est.global_bits);
    if let Some(mm) = est.bias_corrected_bits {
        println!("Miller-Madow corrected: {mm} bits");
    }

    if let Some(out) = &args.out {
        let windowed = windowed_te_from_slices(
            source.symbols(),
            target.symbols(),
            &cfg,
            args.window,
            args.step,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        write_csv(
            out,
            &["slot", "bits"],
            windowed.iter().map(|w| [w.slot.to_string(), w.bits.to_string()]),
        )?;
    }
    Ok(())
}

/// The source series and its default binning range.
fn source_values(
    source: &str,
    trace: &effcomm::RsrpTrace,
    decisions: &ActionSeries,
) -> Result<(Vec<f64>, (f64, f64))> {
    if source == "margin" {
        return Ok((serving_margin(trace.rows(), decisions), (-12.0, 12.0)));
    }
    let cell = trace.cell_index(source).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown column {source:?}; the trace has {} (or use \"margin\")",
            trace.cells.join(", ")
        ))
    })?;
    let column = trace.column(cell);
    let lo = column.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hi = if hi > lo { hi } else { lo + 1.0 };
    Ok((column, (lo, hi)))
}
