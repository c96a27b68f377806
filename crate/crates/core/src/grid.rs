//! Sampling grids for sign checks.

/// Points strictly inside `(lo, hi)`: a uniform grid plus geometric clusters
/// approaching every anchor (and both ends) from inside the interval.
///
/// About half of `n` goes to the uniform part; the rest is split between the
/// clusters, whose offsets span `1e-9..1e-1` of the interval length.
pub fn composite(lo: f64, hi: f64, anchors: &[f64], n: usize) -> Vec<f64> {
    let len = hi - lo;
    let n_uniform = (n / 2).max(8);
    let mut pts: Vec<f64> = (1..=n_uniform).map(|i| lo + len * i as f64 / (n_uniform + 1) as f64).collect();

    let mut targets: Vec<(f64, bool, bool)> = vec![(lo, false, true), (hi, true, false)];
    for &a in anchors {
        if a > lo && a < hi {
            targets.push((a, true, true));
        }
    }
    let sides: usize = targets.iter().map(|&(_, l, r)| l as usize + r as usize).sum();
    let per_side = ((n - n_uniform.min(n)) / sides.max(1)).max(4);
    for &(a, left, right) in &targets {
        for k in 0..per_side {
            let frac = 10f64.powf(-1.0 - 8.0 * k as f64 / (per_side - 1) as f64);
            if left {
                pts.push(a - frac * len);
            }
            if right {
                pts.push(a + frac * len);
            }
        }
    }
    pts.retain(|&x| x > lo && x < hi && anchors.iter().all(|&a| x != a));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// Points strictly inside `(lo, hi)`, avoiding balls of radius `radius` around
/// each entry of `exclude`.
pub fn uniform_excluding(lo: f64, hi: f64, exclude: &[f64], radius: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64)
        .filter(|x| exclude.iter().all(|c| (x - c).abs() >= radius))
        .collect()
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
