use effcomm::encoding::{decode, encode, quantize_trace};
use effcomm::{CodecKind, CodecSpec, Quantizer};

use crate::cmd::read_trace;
use crate::error::{CliError, Result};
use crate::output::{write_csv, write_json};
use crate::EncodeArgs;

pub fn execute(args: &EncodeArgs) -> Result<()> {
    let trace = read_trace(&args.trace)?;
    let spec = CodecSpec {
        kind: args.codec,
        quantizer: Quantizer {
            bits_per_sample: args.bits,
            step_db: args.step,
        },
    };
    spec.quantizer
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let log = encode(&trace, &spec).map_err(|e| CliError::Data(e.to_string()))?;

    let kind = match spec.kind {
        CodecKind::Raw => "raw",
        CodecKind::Delta => "delta",
    };
    println!(
        "{kind} codec: {} slots x {} cells, {} bits total ({:.3} bits/slot), {} padding bits",
        log.slots(),
        log.cells,
        log.total_bits(),
        log.total_bits() as f64 / log.slots().max(1) as f64,
        log.padding_bits
    );

    if args.verify {
        let decoded = decode(&log, &spec).map_err(|e| CliError::Data(e.to_string()))?;
        let expected =
            quantize_trace(&trace, &spec.quantizer).map_err(|e| CliError::Data(e.to_string()))?;
        if decoded != expected {
            return Err(CliError::Data("round trip mismatch".into()));
        }
        println!("round trip: exact");
    }
    if let Some(out) = &args.out {
        write_csv(
            out,
            &["slot", "cumulative_bits"],
            log.cumulative_bits
                .iter()
                .enumerate()
                .map(|(t, b)| [t.to_string(), b.to_string()]),
        )?;
    }
    if let Some(path) = &args.log {
        write_json(path, &log)?;
    }
    Ok(())
}
