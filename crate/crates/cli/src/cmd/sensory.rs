use effcomm::sensory::{bitrate, max_delay, quantization_bits, SenseSpec, RATE_FIXTURES};

use crate::error::{CliError, Result};
use crate::SensoryArgs;

pub fn execute(args: &SensoryArgs) -> Result<()> {
    if args.fixtures {
        print_fixtures();
        return Ok(());
    }
    let spec = SenseSpec {
        range_span: args.range,
        resolution: args.resolution,
        receptors: args.receptors,
        sample_rate: args.rate,
        distance: args.distance,
        nerve_speed: args.speed,
    };
    spec.validate().map_err(CliError::Usage)?;
    let req = spec.requirements();
    println!("quantity\tvalue");
    println!("bits_per_sample\t{}", req.bits_per_sample);
    println!("bitrate_mbps\t{}", req.bitrate_bps / 1e6);
    println!("max_delay_s\t{:.4}", req.max_delay_s);
    Ok(())
}

fn print_fixtures() {
    println!("label\tmbps\treceptors_at_11_bits_50_hz\texact");
    for f in RATE_FIXTURES {
        println!("{}\t{}\t{:.3}\t{}", f.label, f.mbps, f.receptors, f.exact);
    }
    let bits = quantization_bits(40.0, 0.02);
    println!("quantization_bits(40, 0.02) = {bits}");
    println!(
        "bitrate(48000, {bits}, 50) = {} Mbps",
        bitrate(48_000.0, bits, 50.0) / 1e6
    );
    println!(
        "hands + feet = {} + {} = {:.1} Mbps",
        RATE_FIXTURES[0].mbps,
        RATE_FIXTURES[1].mbps,
        RATE_FIXTURES[0].mbps + RATE_FIXTURES[1].mbps
    );
    println!("max_delay(2, 30) = {:.4} s", max_delay(2.0, 30.0));
    println!("max_delay(1.5, 30) = {:.4} s", max_delay(1.5, 30.0));
}
