//! Brute-force reference estimators. Deliberately naive: dense tables over
//! every tuple of the alphabet, probabilities as f64, marginals by summing.

#![allow(dead_code)]

/// Index of `(next, target history, source history)` in a dense table.
fn tuple_index(next: usize, hist: &[usize], src: &[usize], a: usize) -> usize {
    let mut idx = next;
    for &s in hist.iter().chain(src) {
        idx = idx * a + s;
    }
    idx
}

fn decode_tuple(mut idx: usize, k: usize, l: usize, a: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let mut digits = vec![0; 1 + k + l];
    for d in digits.iter_mut().rev() {
        *d = idx % a;
        idx /= a;
    }
    (digits[0], digits[1..=k].to_vec(), digits[k + 1..].to_vec())
}

pub struct TeOracle {
    pub global: f64,
    /// Local values for slots `max(k, l)..n`.
    pub local: Vec<f64>,
}

/// Transfer entropy by enumerating all `a^(1+k+l)` tuples.
pub fn brute_force_te(source: &[usize], target: &[usize], k: usize, l: usize) -> TeOracle {
    let a = source
        .iter()
        .chain(target)
        .copied()
        .max()
        .unwrap_or(0)
        + 1;
    let h = k.max(l);
    let size = a.pow((1 + k + l) as u32);
    let mut table = vec![0.0f64; size];
    let n = (target.len() - h) as f64;
    for t in h..target.len() {
        let i = tuple_index(target[t], &target[t - k..t], &source[t - l..t], a);
        table[i] += 1.0 / n;
    }

    // Marginal tables, each filled by one pass over every tuple.
    let pack = |digits: &[usize]| digits.iter().fold(0, |acc, &d| acc * a + d);
    let mut p_xh_yh = vec![0.0f64; a.pow((k + l) as u32)];
    let mut p_x_xh = vec![0.0f64; a.pow((1 + k) as u32)];
    let mut p_xh = vec![0.0f64; a.pow(k as u32)];
    for (i, &p) in table.iter().enumerate() {
        let (x, xh, yh) = decode_tuple(i, k, l, a);
        let hs: Vec<usize> = xh.iter().chain(&yh).copied().collect();
        let xxh: Vec<usize> = std::iter::once(x).chain(xh.iter().copied()).collect();
        p_xh_yh[pack(&hs)] += p;
        p_x_xh[pack(&xxh)] += p;
        p_xh[pack(&xh)] += p;
    }
    let term = |x: usize, xh: &[usize], yh: &[usize]| -> f64 {
        let hs: Vec<usize> = xh.iter().chain(yh).copied().collect();
        let xxh: Vec<usize> = std::iter::once(x).chain(xh.iter().copied()).collect();
        let p_all = table[tuple_index(x, xh, yh, a)];
        ((p_all / p_xh_yh[pack(&hs)]) / (p_x_xh[pack(&xxh)] / p_xh[pack(xh)])).log2()
    };

    let mut global = 0.0;
    for (i, &p) in table.iter().enumerate() {
        if p > 0.0 {
            let (x, xh, yh) = decode_tuple(i, k, l, a);
            global += p * term(x, &xh, &yh);
        }
    }
    let local = (h..target.len())
        .map(|t| term(target[t], &target[t - k..t], &source[t - l..t]))
        .collect();
    TeOracle { global, local }
}

/// `sum p(x,y) log2(p(x,y) / (p(x) p(y)))` over a dense joint table.
pub fn joint_sum_mi(x: &[usize], y: &[usize]) -> f64 {
    let ax = x.iter().copied().max().unwrap_or(0) + 1;
    let ay = y.iter().copied().max().unwrap_or(0) + 1;
    let n = x.len() as f64;
    let mut joint = vec![vec![0.0f64; ay]; ax];
    for (&a, &b) in x.iter().zip(y) {
        joint[a][b] += 1.0 / n;
    }
    let px: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let py: Vec<f64> = (0..ay).map(|j| joint.iter().map(|row| row[j]).sum()).collect();
    let mut mi = 0.0;
    for i in 0..ax {
        for j in 0..ay {
            if joint[i][j] > 0.0 {
                mi += joint[i][j] * (joint[i][j] / (px[i] * py[j])).log2();
            }
        }
    }
    mi
}

/// Plug-in entropy of the rows of `items` treated as opaque keys.
pub fn block_entropy<T: Ord + Clone>(items: &[T]) -> f64 {
    let mut sorted = items.to_vec();
    sorted.sort();
    let n = sorted.len() as f64;
    let mut h = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|v| **v == sorted[i]).count();
        let p = j as f64 / n;
        h -= p * p.log2();
        i += j;
    }
    h
}
