use effcomm::encoding::{decode, encode, quantize_trace, te_bound_bits, CodecSpec};
use effcomm::infotheory::{
    discretize, mutual_information, shannon_entropy, te_from_slices, BinningSpec, ProbDist,
    SymbolSeries, TeConfig,
};
use effcomm::scenario::{load_trace_csv, save_trace_csv, RsrpTrace, TraceEvent};
use effcomm::sensory::quantization_bits;
use effcomm::viability::{viability_from_belief, viability_vs_information, Belief, ScenarioSpec};
use proptest::prelude::*;

fn symbols(alphabet: usize, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..alphabet, len)
}

fn paired(alphabet: usize, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    len.prop_flat_map(move |n| (symbols(alphabet, n..=n), symbols(alphabet, n..=n)))
}

fn trace_strategy() -> impl Strategy<Value = RsrpTrace> {
    (1usize..=4, 1usize..=40).prop_flat_map(|(cells, slots)| {
        prop::collection::vec(prop::collection::vec(-150.0f64..-30.0, cells), slots).prop_map(
            move |rows| {
                RsrpTrace::from_rows(1.0, RsrpTrace::default_cell_names(cells), rows, None)
                    .unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn entropy_is_bounded(weights in prop::collection::vec(0.0f64..10.0, 1..20)) {
        prop_assume!(weights.iter().sum::<f64>() > 0.0);
        let total: f64 = weights.iter().sum();
        let p = ProbDist::new(weights.iter().map(|w| w / total).collect()).unwrap();
        let h = shannon_entropy(&p);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (p.support_size() as f64).log2() + 1e-12);
    }

    #[test]
    fn mi_is_symmetric_and_bounded((x, y) in paired(4, 1..=300)) {
        let xs = SymbolSeries::new(x.clone(), 4).unwrap();
        let ys = SymbolSeries::new(y.clone(), 4).unwrap();
        let xy = mutual_information(&xs, &ys).unwrap();
        let yx = mutual_information(&ys, &xs).unwrap();
        prop_assert!((xy - yx).abs() < 1e-12);
        prop_assert!(xy >= 0.0);
        let hx = mutual_information(&xs, &xs).unwrap();
        let hy = mutual_information(&ys, &ys).unwrap();
        prop_assert!(xy <= hx.min(hy) + 1e-12);
    }

    #[test]
    fn te_is_nonnegative_and_locals_average_to_global(
        (x, y) in paired(3, 4..=300),
        k in 1usize..=2,
        l in 1usize..=2,
    ) {
        let cfg = TeConfig::new(k, l);
        prop_assume!(x.len() >= cfg.min_len());
        let est = te_from_slices(&x, &y, &cfg).unwrap();
        prop_assert!(est.global_bits >= 0.0);
        let mean = est.local_bits.iter().sum::<f64>() / est.local_bits.len() as f64;
        prop_assert!((mean.max(0.0) - est.global_bits).abs() < 1e-9);
        prop_assert_eq!(est.samples_used, x.len() - cfg.history());
    }

    #[test]
    fn te_bound_is_nondecreasing((x, y) in paired(3, 3..=200)) {
        let bound = te_bound_bits(
            &SymbolSeries::from_symbols(x),
            &SymbolSeries::from_symbols(y.clone()),
            &TeConfig::default(),
        )
        .unwrap();
        prop_assert_eq!(bound.cumulative.len(), y.len());
        prop_assert!(bound.cumulative.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(bound.total() + 1e-9 >= bound.unclipped.last().copied().unwrap());
    }

    #[test]
    fn discretize_stays_in_alphabet(
        values in prop::collection::vec(prop::num::f64::ANY, 1..100),
        bins in 2usize..10,
    ) {
        let spec = BinningSpec::new(-10.0, 10.0, bins).unwrap();
        let d = discretize(&values, &spec).unwrap();
        prop_assert_eq!(d.series.len(), values.len());
        prop_assert!(d.series.symbols().iter().all(|&s| s < bins));
    }

    #[test]
    fn codecs_round_trip(trace in trace_strategy()) {
        for spec in [CodecSpec::raw(8, 1.0), CodecSpec::delta(8, 1.0), CodecSpec::raw(10, 0.5)] {
            let log = encode(&trace, &spec).unwrap();
            let decoded = decode(&log, &spec).unwrap();
            prop_assert_eq!(&decoded, &quantize_trace(&trace, &spec.quantizer).unwrap());
            prop_assert!(log.cumulative_bits.windows(2).all(|w| w[1] >= w[0]));
        }
        let raw = encode(&trace, &CodecSpec::raw(8, 1.0)).unwrap();
        prop_assert_eq!(raw.total_bits(), 8 * (trace.len() * trace.num_cells()) as u64);
    }

    #[test]
    fn trace_csv_round_trips(trace in trace_strategy(), tag in 0usize..5) {
        let mut trace = trace;
        trace.events = (0..trace.len()).map(|t| TraceEvent::ALL[(t + tag) % 5]).collect();
        let mut buf = Vec::new();
        save_trace_csv(&trace, &mut buf).unwrap();
        let back = load_trace_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.rows(), trace.rows());
        prop_assert_eq!(&back.cells, &trace.cells);
        prop_assert_eq!(&back.events, &trace.events);
        prop_assert_eq!(back.clamped, 0);
    }

    #[test]
    fn viability_never_positive(spread in 0usize..10, candidates in 2usize..10, bits in 0.0f64..10.0) {
        let spec = ScenarioSpec { candidate_instants: candidates, ..ScenarioSpec::default() };
        let belief = Belief::widened(candidates, spread).unwrap();
        prop_assert!(viability_from_belief(&belief, false, &spec) <= 0.0);
        prop_assert_eq!(viability_from_belief(&belief, true, &spec), spec.drop_penalty);
        prop_assert!(viability_vs_information(bits, &spec) <= 0.0);
    }

    #[test]
    fn more_information_never_hurts(a in 0.0f64..4.0, b in 0.0f64..4.0) {
        let spec = ScenarioSpec::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(
            viability_vs_information(lo, &spec) <= viability_vs_information(hi, &spec)
        );
    }

    #[test]
    fn quantization_bits_cover_the_range(span in 0.01f64..1e4, res in 1e-4f64..10.0) {
        prop_assume!(res < span);
        let bits = quantization_bits(span, res);
        prop_assert!(2f64.powi(bits as i32) * (1.0 + 1e-12) >= span / res);
        prop_assert!(bits == 0 || 2f64.powi(bits as i32 - 1) < span / res * (1.0 + 1e-12));
    }
}
