use effcomm::viability::{fictitious_scenario, information_sweep};
use effcomm::ScenarioSpec;

use crate::error::{CliError, Result};
use crate::output::{create_dir, write_csv};
use crate::ViabilityArgs;

pub fn execute(args: &ViabilityArgs) -> Result<()> {
    let spec = ScenarioSpec {
        horizon: args.horizon,
        deadline: args.deadline,
        candidate_instants: args.candidates,
        drop_penalty: args.penalty,
    };
    let (full, none) = fictitious_scenario(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.bits_step.is_nan() || args.bits_step <= 0.0 || args.max_bits.is_nan() || args.max_bits < 0.0 {
        return Err(CliError::Usage(
            "--bits-step must be positive and --max-bits non-negative".into(),
        ));
    }
    let sweep = information_sweep(&spec, args.max_bits, args.bits_step);
    let best = sweep
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let optimum = sweep.iter().find(|&&(_, v)| v == best).map(|&(b, _)| b);

    println!("slot\tfull_info\tno_info");
    for (t, (f, n)) in full.values.iter().zip(&none.values).enumerate() {
        println!("{t}\t{f}\t{n}");
    }
    match none.drop_slot {
        Some(s) => println!("no-info call drops at slot {s}"),
        None => println!("no-info call does not drop within the horizon"),
    }
    match optimum {
        Some(bits) => println!("maximum viability {best} first reached at {bits} bits"),
        None => println!("empty information sweep"),
    }

    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_csv(
            &dir.join("viability_full_info.csv"),
            &["slot", "viability"],
            full.values.iter().enumerate().map(|(t, v)| [t.to_string(), v.to_string()]),
        )?;
        write_csv(
            &dir.join("viability_no_info.csv"),
            &["slot", "viability"],
            none.values.iter().enumerate().map(|(t, v)| [t.to_string(), v.to_string()]),
        )?;
        write_csv(
            &dir.join("viability_vs_information.csv"),
            &["bits", "viability"],
            sweep.iter().map(|(b, v)| [b.to_string(), v.to_string()]),
        )?;
    }
    Ok(())
}
