//! Discrete information measures over empirical symbol series.
//!
//! Everything here is measured in bits. Probabilities are plug-in
//! (maximum-likelihood) frequencies; Miller–Madow is offered as the bias
//! correction for finite samples.
//!
//! Transfer entropy from a source `Y` to a target `X` uses a target history
//! of `k` slots and a source history of `l` slots:
//!
//! ```text
//! T(Y→X) = Σ p(x_t, x_{t-k..t}, y_{t-l..t}) · log2[ p(x_t | x_{t-k..t}, y_{t-l..t}) / p(x_t | x_{t-k..t}) ]
//! ```
//!
//! The pointwise log-ratio at slot `t` is the local transfer entropy; it is
//! defined for `t >= max(k, l)` and averages to the global value.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("probability distribution is empty")]
    EmptyDistribution,
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("alphabet size must be positive")]
    ZeroAlphabet,
    #[error("symbol {symbol} at index {index} is outside alphabet of size {alphabet_size}")]
    SymbolOutOfRange {
        index: usize,
        symbol: usize,
        alphabet_size: usize,
    },
    #[error("series is empty")]
    EmptySeries,
    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("series of length {len} is too short for history embedding; need at least {min} samples")]
    SeriesTooShort { len: usize, min: usize },
    #[error("history lengths must be at least 1 (k = {k}, l = {l})")]
    InvalidHistory { k: usize, l: usize },
    #[error("window of {window} slots is too small; need at least {min}")]
    WindowTooSmall { window: usize, min: usize },
    #[error("window step must be at least 1")]
    ZeroStep,
    #[error("invalid binning: {0}")]
    InvalidBinning(String),
}

pub type Result<T> = std::result::Result<T, InfoError>;

/// A validated probability mass function over `0..len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(InfoError::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            // `!(value >= 0.0)` also rejects NaN.
            if !(value >= 0.0) {
                return Err(InfoError::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(InfoError::NotNormalized { sum });
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(InfoError::EmptyDistribution);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// All mass on `at`.
    pub fn degenerate(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(InfoError::SymbolOutOfRange {
                index: 0,
                symbol: at,
                alphabet_size: n,
            });
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Number of outcomes with non-zero mass.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }
}

/// Integer time series over a finite alphabet `0..alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSeries {
    symbols: Vec<usize>,
    alphabet_size: usize,
}

impl SymbolSeries {
    pub fn new(symbols: Vec<usize>, alphabet_size: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(InfoError::ZeroAlphabet);
        }
        if let Some((index, &symbol)) = symbols
            .iter()
            .enumerate()
            .find(|(_, &s)| s >= alphabet_size)
        {
            return Err(InfoError::SymbolOutOfRange {
                index,
                symbol,
                alphabet_size,
            });
        }
        Ok(Self {
            symbols,
            alphabet_size,
        })
    }

    /// Builds a series whose alphabet is `max(symbols) + 1` (at least 1).
    pub fn from_symbols(symbols: Vec<usize>) -> Self {
        let alphabet_size = symbols.iter().copied().max().map_or(1, |m| m + 1);
        Self {
            symbols,
            alphabet_size,
        }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Equal-width histogram bins over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinningSpec {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl BinningSpec {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        let spec = Self { lo, hi, bins };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo >= self.hi {
            return Err(InfoError::InvalidBinning(format!(
                "need finite lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.bins < 2 {
            return Err(InfoError::InvalidBinning(format!(
                "need at least 2 bins, got {}",
                self.bins
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    /// Bin index for `value` and whether it had to be clamped into range.
    pub fn bin(&self, value: f64) -> (usize, bool) {
        if value.is_nan() || value < self.lo {
            return (0, true);
        }
        if value > self.hi {
            return (self.bins - 1, true);
        }
        let idx = ((value - self.lo) / self.width()).floor() as usize;
        (idx.min(self.bins - 1), false)
    }
}

/// Output of [`discretize`]: the symbol series plus how many inputs fell
/// outside `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discretized {
    pub series: SymbolSeries,
    pub clamped: usize,
}

pub fn discretize(values: &[f64], spec: &BinningSpec) -> Result<Discretized> {
    spec.validate()?;
    let mut clamped = 0;
    let symbols = values
        .iter()
        .map(|&v| {
            let (bin, was_clamped) = spec.bin(v);
            clamped += usize::from(was_clamped);
            bin
        })
        .collect();
    Ok(Discretized {
        series: SymbolSeries {
            symbols,
            alphabet_size: spec.bins,
        },
        clamped,
    })
}

/// Shannon entropy in bits, with `0 · log 0 = 0`.
pub fn shannon_entropy(p: &ProbDist) -> f64 {
    let h: f64 = p
        .probs
        .iter()
        .filter(|&&pi| pi > 0.0)
        .map(|&pi| -pi * pi.log2())
        .sum();
    h.max(0.0)
}

/// Plug-in entropy of a histogram whose counts sum to `n`.
pub fn entropy_from_counts<I>(counts: I, n: u64) -> f64
where
    I: IntoIterator<Item = u64>,
{
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let h: f64 = counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

pub fn empirical_distribution(x: &SymbolSeries) -> Result<ProbDist> {
    if x.is_empty() {
        return Err(InfoError::EmptySeries);
    }
    let mut counts = vec![0u64; x.alphabet_size];
    for &s in &x.symbols {
        counts[s] += 1;
    }
    let n = x.len() as f64;
    Ok(ProbDist {
        probs: counts.into_iter().map(|c| c as f64 / n).collect(),
    })
}

/// Plug-in mutual information `H(X) + H(Y) - H(X,Y)`.
pub fn mutual_information(x: &SymbolSeries, y: &SymbolSeries) -> Result<f64> {
    if x.len() != y.len() {
        return Err(InfoError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(InfoError::EmptySeries);
    }
    let n = x.len() as u64;
    let mut joint: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut cx: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cy: BTreeMap<usize, u64> = BTreeMap::new();
    for (&a, &b) in x.symbols.iter().zip(&y.symbols) {
        *joint.entry((a, b)).or_default() += 1;
        *cx.entry(a).or_default() += 1;
        *cy.entry(b).or_default() += 1;
    }
    let hx = entropy_from_counts(cx.into_values(), n);
    let hy = entropy_from_counts(cy.into_values(), n);
    let hxy = entropy_from_counts(joint.into_values(), n);
    Ok((hx + hy - hxy).max(0.0))
}

/// Adds the Miller–Madow correction `(m - 1) / (2 n ln 2)` to a plug-in
/// entropy estimate in bits.
///
/// Panics if `n` or `distinct_outcomes` is zero.
pub fn miller_madow(h_plugin: f64, distinct_outcomes: usize, n: usize) -> f64 {
    assert!(n >= 1, "Miller-Madow needs at least one sample");
    assert!(distinct_outcomes >= 1, "Miller-Madow needs at least one outcome");
    h_plugin + (distinct_outcomes - 1) as f64 / (2.0 * n as f64 * LN_2)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasCorrection {
    #[default]
    None,
    MillerMadow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TeConfig {
    /// Target history length in slots.
    pub k: usize,
    /// Source history length in slots.
    pub l: usize,
    pub bias_correction: BiasCorrection,
}

impl Default for TeConfig {
    fn default() -> Self {
        Self {
            k: 1,
            l: 1,
            bias_correction: BiasCorrection::None,
        }
    }
}

impl TeConfig {
    pub fn new(k: usize, l: usize) -> Self {
        Self {
            k,
            l,
            ..Self::default()
        }
    }

    pub fn with_bias_correction(mut self, bias_correction: BiasCorrection) -> Self {
        self.bias_correction = bias_correction;
        self
    }

    /// First slot at which both histories are available.
    pub fn history(&self) -> usize {
        self.k.max(self.l)
    }

    /// Shortest series the estimator accepts.
    pub fn min_len(&self) -> usize {
        self.history() + 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.l == 0 {
            return Err(InfoError::InvalidHistory {
                k: self.k,
                l: self.l,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeEstimate {
    /// Plug-in transfer entropy, bits per slot.
    pub global_bits: f64,
    /// Local transfer entropy for slots `first_slot..`.
    pub local_bits: Vec<f64>,
    /// Slot index of `local_bits[0]`.
    pub first_slot: usize,
    pub samples_used: usize,
    pub config: TeConfig,
    /// Set when the config asks for Miller–Madow; may be negative.
    pub bias_corrected_bits: Option<f64>,
}

impl TeEstimate {
    /// Local values laid out over all `len` slots, zero where undefined.
    pub fn local_per_slot(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (i, &v) in self.local_bits.iter().enumerate() {
            if let Some(slot) = out.get_mut(self.first_slot + i) {
                *slot = v;
            }
        }
        out
    }
}

pub fn transfer_entropy(
    source: &SymbolSeries,
    target: &SymbolSeries,
    cfg: &TeConfig,
) -> Result<TeEstimate> {
    te_from_slices(&source.symbols, &target.symbols, cfg)
}

type HistKey<'a> = (&'a [usize], &'a [usize]);

/// Histogram tables over the embedded tuples.
struct TeCounts<'a> {
    /// (x_t with its history, source history)
    joint: BTreeMap<HistKey<'a>, u64>,
    /// (target history, source history)
    hist_src: BTreeMap<HistKey<'a>, u64>,
    /// x_t with its history
    next_hist: BTreeMap<&'a [usize], u64>,
    /// target history
    hist: BTreeMap<&'a [usize], u64>,
    samples: u64,
}

impl<'a> TeCounts<'a> {
    fn build(source: &'a [usize], target: &'a [usize], k: usize, l: usize) -> Self {
        let start = k.max(l);
        let mut counts = TeCounts {
            joint: BTreeMap::new(),
            hist_src: BTreeMap::new(),
            next_hist: BTreeMap::new(),
            hist: BTreeMap::new(),
            samples: 0,
        };
        for t in start..target.len() {
            let with_next = &target[t - k..=t];
            let past = &target[t - k..t];
            let src = &source[t - l..t];
            *counts.joint.entry((with_next, src)).or_default() += 1;
            *counts.hist_src.entry((past, src)).or_default() += 1;
            *counts.next_hist.entry(with_next).or_default() += 1;
            *counts.hist.entry(past).or_default() += 1;
            counts.samples += 1;
        }
        counts
    }

    /// `log2[p(x | xh, yh) / p(x | xh)]` written over integer counts so that
    /// equal conditionals give a ratio of exactly 1.
    fn log_ratio(&self, with_next: &[usize], src: &[usize], joint: u64) -> f64 {
        let k = with_next.len() - 1;
        let past = &with_next[..k];
        let num = u128::from(joint) * u128::from(self.hist[past]);
        let den = u128::from(self.hist_src[&(past, src)]) * u128::from(self.next_hist[with_next]);
        if num == den {
            0.0
        } else {
            (num as f64 / den as f64).log2()
        }
    }

    fn entropy_corrected(&self) -> f64 {
        let n = self.samples;
        let nu = n as usize;
        let h = |counts: Vec<u64>| {
            let m = counts.len();
            miller_madow(entropy_from_counts(counts, n), m, nu)
        };
        h(self.next_hist.values().copied().collect()) - h(self.hist.values().copied().collect())
            - h(self.joint.values().copied().collect())
            + h(self.hist_src.values().copied().collect())
    }
}

/// Transfer entropy on raw symbol slices; alphabets are implied by the data.
pub fn te_from_slices(source: &[usize], target: &[usize], cfg: &TeConfig) -> Result<TeEstimate> {
    cfg.validate()?;
    if source.len() != target.len() {
        return Err(InfoError::LengthMismatch {
            left: source.len(),
            right: target.len(),
        });
    }
    let min = cfg.min_len();
    if target.len() < min {
        return Err(InfoError::SeriesTooShort {
            len: target.len(),
            min,
        });
    }
    let (k, l) = (cfg.k, cfg.l);
    let start = cfg.history();
    let counts = TeCounts::build(source, target, k, l);
    let n = counts.samples as f64;

    let local_bits: Vec<f64> = (start..target.len())
        .map(|t| {
            let with_next = &target[t - k..=t];
            let src = &source[t - l..t];
            counts.log_ratio(with_next, src, counts.joint[&(with_next, src)])
        })
        .collect();

    let global: f64 = counts
        .joint
        .iter()
        .map(|(&(with_next, src), &c)| c as f64 / n * counts.log_ratio(with_next, src, c))
        .sum();

    let bias_corrected_bits = match cfg.bias_correction {
        BiasCorrection::None => None,
        BiasCorrection::MillerMadow => Some(counts.entropy_corrected()),
    };

    Ok(TeEstimate {
        global_bits: global.max(0.0),
        local_bits,
        first_slot: start,
        samples_used: counts.samples as usize,
        config: *cfg,
        bias_corrected_bits,
    })
}

/// One point of a sliding-window transfer-entropy series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowedTe {
    /// Last slot covered by the window.
    pub slot: usize,
    pub bits: f64,
}

pub fn windowed_transfer_entropy(
    source: &SymbolSeries,
    target: &SymbolSeries,
    cfg: &TeConfig,
    window: usize,
    step: usize,
) -> Result<Vec<WindowedTe>> {
    windowed_te_from_slices(&source.symbols, &target.symbols, cfg, window, step)
}

pub fn windowed_te_from_slices(
    source: &[usize],
    target: &[usize],
    cfg: &TeConfig,
    window: usize,
    step: usize,
) -> Result<Vec<WindowedTe>> {
    cfg.validate()?;
    if window < cfg.min_len() {
        return Err(InfoError::WindowTooSmall {
            window,
            min: cfg.min_len(),
        });
    }
    if step == 0 {
        return Err(InfoError::ZeroStep);
    }
    if source.len() != target.len() {
        return Err(InfoError::LengthMismatch {
            left: source.len(),
            right: target.len(),
        });
    }
    let mut out = Vec::new();
    let mut begin = 0;
    while begin + window <= target.len() {
        let end = begin + window;
        let est = te_from_slices(&source[begin..end], &target[begin..end], cfg)?;
        out.push(WindowedTe {
            slot: end - 1,
            bits: est.global_bits,
        });
        begin += step;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(symbols: &[usize], alphabet: usize) -> SymbolSeries {
        SymbolSeries::new(symbols.to_vec(), alphabet).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&ProbDist::uniform(4).unwrap()), 2.0);
        assert_eq!(
            shannon_entropy(&ProbDist::new(vec![1.0, 0.0, 0.0]).unwrap()),
            0.0
        );
        assert_eq!(
            shannon_entropy(&ProbDist::new(vec![0.5, 0.25, 0.25]).unwrap()),
            1.5
        );
    }

    #[test]
    fn distribution_validation() {
        assert!(matches!(
            ProbDist::new(vec![0.5, 0.6]),
            Err(InfoError::NotNormalized { .. })
        ));
        assert!(matches!(
            ProbDist::new(vec![1.5, -0.5]),
            Err(InfoError::NegativeProbability { index: 1, .. })
        ));
        assert!(matches!(
            ProbDist::new(vec![f64::NAN, 1.0]),
            Err(InfoError::NegativeProbability { index: 0, .. })
        ));
        assert_eq!(ProbDist::new(vec![]), Err(InfoError::EmptyDistribution));
        assert_eq!(ProbDist::degenerate(3, 1).unwrap().support_size(), 1);
    }

    #[test]
    fn series_validation() {
        assert!(matches!(
            SymbolSeries::new(vec![0, 3], 3),
            Err(InfoError::SymbolOutOfRange { index: 1, symbol: 3, .. })
        ));
        assert_eq!(SymbolSeries::new(vec![], 0), Err(InfoError::ZeroAlphabet));
        assert!(SymbolSeries::new(vec![], 2).unwrap().is_empty());
        assert_eq!(SymbolSeries::from_symbols(vec![0, 4, 1]).alphabet_size(), 5);
    }

    #[test]
    fn empirical_distribution_examples() {
        let p = empirical_distribution(&series(&[0, 0, 1, 1], 2)).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.5]);
        let p = empirical_distribution(&series(&[2, 2, 2], 3)).unwrap();
        assert_eq!(p.probs(), &[0.0, 0.0, 1.0]);
        let p = empirical_distribution(&series(&[0, 1, 1, 1], 2)).unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert_eq!(
            empirical_distribution(&series(&[], 2)),
            Err(InfoError::EmptySeries)
        );
    }

    #[test]
    fn mutual_information_examples() {
        let x = series(&[0, 1, 1, 0, 1, 0, 0, 1], 2);
        assert!((mutual_information(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let c = series(&[1; 8], 2);
        assert_eq!(mutual_information(&x, &c).unwrap(), 0.0);
        let a = series(&[0, 0, 1, 1], 2);
        let b = series(&[0, 1, 0, 1], 2);
        assert_eq!(mutual_information(&a, &b).unwrap(), 0.0);
        assert!(matches!(
            mutual_information(&a, &series(&[0, 1], 2)),
            Err(InfoError::LengthMismatch { left: 4, right: 2 })
        ));
    }

    #[test]
    fn miller_madow_examples() {
        assert_eq!(miller_madow(1.0, 1, 100), 1.0);
        assert!((miller_madow(0.0, 2, 50) - 0.014427).abs() < 1e-6);
        assert!((miller_madow(1.5, 4, 1000) - 1.502164).abs() < 1e-6);
    }

    #[test]
    fn discretize_examples() {
        let spec = BinningSpec::new(-140.0, -44.0, 4).unwrap();
        let d = discretize(&[-140.0, -100.0, -44.0], &spec).unwrap();
        assert_eq!(d.series.symbols(), &[0, 1, 3]);
        assert_eq!(d.clamped, 0);
        let d = discretize(&[-150.0, -30.0, f64::NAN], &spec).unwrap();
        assert_eq!(d.series.symbols(), &[0, 3, 0]);
        assert_eq!(d.clamped, 3);
        assert!(BinningSpec::new(1.0, 1.0, 4).is_err());
        assert!(BinningSpec::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn constant_source_gives_exact_zero() {
        let target: Vec<usize> = (0..500).map(|i| (i * 7 + i / 3) % 3).collect();
        let source = vec![2usize; 500];
        for (k, l) in [(1, 1), (2, 1), (1, 2), (3, 2)] {
            let est = te_from_slices(&source, &target, &TeConfig::new(k, l)).unwrap();
            assert_eq!(est.global_bits, 0.0);
            assert!(est.local_bits.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn te_rejects_short_and_mismatched_series() {
        let cfg = TeConfig::new(2, 1);
        let err = te_from_slices(&[0, 1, 0], &[1, 0, 1], &cfg).unwrap_err();
        assert_eq!(err, InfoError::SeriesTooShort { len: 3, min: 4 });
        assert!(err.to_string().contains("at least 4"));
        assert!(te_from_slices(&[0, 1, 0, 1], &[1, 0, 1, 0], &cfg).is_ok());
        assert!(matches!(
            te_from_slices(&[0, 1, 0, 1], &[1, 0, 1], &cfg),
            Err(InfoError::LengthMismatch { .. })
        ));
        assert!(matches!(
            te_from_slices(&[0; 8], &[0; 8], &TeConfig::new(0, 1)),
            Err(InfoError::InvalidHistory { .. })
        ));
    }

    #[test]
    fn local_layout_and_mean() {
        let source: Vec<usize> = (0..40).map(|i| (i * i + 3) % 2).collect();
        let mut target = vec![0];
        target.extend_from_slice(&source[..39]);
        let est = te_from_slices(&source, &target, &TeConfig::new(2, 1)).unwrap();
        assert_eq!(est.first_slot, 2);
        assert_eq!(est.samples_used, 38);
        let mean = est.local_bits.iter().sum::<f64>() / est.local_bits.len() as f64;
        assert!((mean - est.global_bits).abs() < 1e-9);
        let per_slot = est.local_per_slot(40);
        assert_eq!(per_slot[..2], [0.0, 0.0]);
        assert_eq!(per_slot[2], est.local_bits[0]);
    }

    #[test]
    fn miller_madow_te_is_reported_separately() {
        let source: Vec<usize> = (0..200).map(|i| (i * 31 + 7) % 5 % 2).collect();
        let target: Vec<usize> = (0..200).map(|i| (i * 17 + 3) % 7 % 2).collect();
        let plain = te_from_slices(&source, &target, &TeConfig::new(1, 1)).unwrap();
        assert!(plain.bias_corrected_bits.is_none());
        let cfg = TeConfig::new(1, 1).with_bias_correction(BiasCorrection::MillerMadow);
        let corrected = te_from_slices(&source, &target, &cfg).unwrap();
        assert_eq!(corrected.global_bits, plain.global_bits);
        assert!(corrected.bias_corrected_bits.unwrap() < plain.global_bits);
    }

    #[test]
    fn windowed_examples() {
        let cfg = TeConfig::default();
        let target: Vec<usize> = (0..50).map(|i| (i / 3) % 2).collect();
        let source = vec![0usize; 50];
        let w = windowed_te_from_slices(&source, &target, &cfg, 10, 1).unwrap();
        assert_eq!(w.len(), 41);
        assert_eq!(w[0].slot, 9);
        assert_eq!(w.last().unwrap().slot, 49);
        assert!(w.iter().all(|p| p.bits == 0.0));

        let w = windowed_te_from_slices(&source, &target, &cfg, 10, 4).unwrap();
        assert_eq!(
            w.iter().map(|p| p.slot).collect::<Vec<_>>(),
            vec![9, 13, 17, 21, 25, 29, 33, 37, 41, 45, 49]
        );
        assert_eq!(
            windowed_te_from_slices(&source, &target, &cfg, 2, 1),
            Err(InfoError::WindowTooSmall { window: 2, min: 3 })
        );
        assert_eq!(
            windowed_te_from_slices(&source, &target, &cfg, 10, 0),
            Err(InfoError::ZeroStep)
        );
    }
}
