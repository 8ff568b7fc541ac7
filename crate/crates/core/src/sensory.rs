//! Bitrate and delay requirements for replicating a sense remotely.

use serde::{Deserialize, Serialize};

/// Bits needed to cover `range_span` at `resolution`: `ceil(log2(span / res))`.
pub fn quantization_bits(range_span: f64, resolution: f64) -> u32 {
    assert!(
        range_span > 0.0 && resolution > 0.0,
        "span and resolution must be positive"
    );
    let levels = range_span / resolution;
    // A ratio one ulp off an exact power of two must not gain a bit.
    let exact = levels.round();
    let levels = if (levels - exact).abs() <= exact * 4.0 * f64::EPSILON {
        exact
    } else {
        levels
    };
    levels.log2().ceil().max(0.0) as u32
}

/// bits per second
pub fn bitrate(receptors: f64, bits: u32, sample_rate: f64) -> f64 {
    receptors * f64::from(bits) * sample_rate
}

/// Seconds for a signal to travel `distance` at `nerve_speed`.
pub fn max_delay(distance: f64, nerve_speed: f64) -> f64 {
    distance / nerve_speed
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SenseSpec {
    pub range_span: f64,
    pub resolution: f64,
    pub receptors: f64,
    /// Hz
    pub sample_rate: f64,
    /// meters
    pub distance: f64,
    /// m/s
    pub nerve_speed: f64,
}

impl SenseSpec {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("range_span", self.range_span),
            ("resolution", self.resolution),
            ("receptors", self.receptors),
            ("sample_rate", self.sample_rate),
            ("distance", self.distance),
            ("nerve_speed", self.nerve_speed),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(format!("{name} must be positive, got {v}"));
        }
        if self.resolution >= self.range_span {
            return Err(format!(
                "resolution {} must be finer than the range {}",
                self.resolution, self.range_span
            ));
        }
        Ok(())
    }

    pub fn requirements(&self) -> Requirements {
        let bits = quantization_bits(self.range_span, self.resolution);
        Requirements {
            bits_per_sample: bits,
            bitrate_bps: bitrate(self.receptors, bits, self.sample_rate),
            max_delay_s: max_delay(self.distance, self.nerve_speed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Requirements {
    pub bits_per_sample: u32,
    pub bitrate_bps: f64,
    pub max_delay_s: f64,
}

/// Published touch-replication aggregates, with receptor counts back-derived
/// at 11 bits and 50 Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFixture {
    pub label: &'static str,
    pub mbps: f64,
    /// `mbps * 1e6 / (11 * 50)`
    pub receptors: f64,
    /// Whether the back-derivation divides exactly.
    pub exact: bool,
}

pub const RATE_FIXTURES: [RateFixture; 7] = [
    RateFixture { label: "temperature, hands", mbps: 26.4, receptors: 48_000.0, exact: true },
    RateFixture { label: "temperature, feet", mbps: 33.8, receptors: 61_454.545_454_545_45, exact: false },
    RateFixture { label: "temperature, total", mbps: 60.2, receptors: 109_454.545_454_545_45, exact: false },
    RateFixture { label: "pressure, palm", mbps: 191.4, receptors: 348_000.0, exact: true },
    RateFixture { label: "pressure, fingertip", mbps: 21.2, receptors: 38_545.454_545_454_55, exact: false },
    RateFixture { label: "pressure, foot", mbps: 116.6, receptors: 212_000.0, exact: true },
    RateFixture { label: "pressure, total", mbps: 827.6, receptors: 1_504_727.272_727_272_8, exact: false },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization_examples() {
        assert_eq!(quantization_bits(40.0, 0.02), 11);
        assert_eq!(quantization_bits(2.0, 1.0), 1);
        assert_eq!(quantization_bits(1024.0, 1.0), 10);
        assert_eq!(quantization_bits(1025.0, 1.0), 11);
    }

    #[test]
    fn bitrate_examples() {
        assert!((bitrate(48_000.0, 11, 50.0) - 26.4e6).abs() < 1e-6);
        assert_eq!(bitrate(1.0, 1, 1.0), 1.0);
        let feet = RATE_FIXTURES[1].mbps;
        assert!((26.4 + feet - 60.2).abs() < 1e-9);
    }

    #[test]
    fn delay_examples() {
        assert!((max_delay(2.0, 30.0) - 0.0667).abs() < 5e-4);
        assert!((max_delay(1.5, 30.0) - 0.05).abs() < 1e-12);
        assert!((max_delay(0.3, 30.0) - 0.01).abs() < 1e-12);
    }

    #[test]
    fn fixtures_back_derive() {
        for f in RATE_FIXTURES {
            let rate = bitrate(f.receptors, 11, 50.0) / 1e6;
            assert!((rate - f.mbps).abs() < 1e-6, "{}", f.label);
            assert_eq!(f.receptors.fract() == 0.0, f.exact, "{}", f.label);
        }
    }

    #[test]
    fn monotone_in_span_and_resolution() {
        let spans = [1.0, 3.0, 10.0, 40.0, 1000.0];
        for w in spans.windows(2) {
            assert!(quantization_bits(w[0], 0.02) <= quantization_bits(w[1], 0.02));
            assert!(quantization_bits(40.0, w[0] / 100.0) >= quantization_bits(40.0, w[1] / 100.0));
        }
    }

    #[test]
    fn spec_requirements() {
        let hands = SenseSpec {
            range_span: 40.0,
            resolution: 0.02,
            receptors: 48_000.0,
            sample_rate: 50.0,
            distance: 2.0,
            nerve_speed: 30.0,
        };
        assert!(hands.validate().is_ok());
        let r = hands.requirements();
        assert_eq!(r.bits_per_sample, 11);
        assert!((r.bitrate_bps - 26.4e6).abs() < 1e-6);
        assert!(SenseSpec { resolution: 50.0, ..hands }.validate().is_err());
        assert!(SenseSpec { receptors: 0.0, ..hands }.validate().is_err());
    }
}
