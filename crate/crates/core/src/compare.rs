//! Masked comparison of semiclassical and exact Husimi fields.

/// Relative errors of `|K|²` over points with `exact ≥ 0.1·max` and
/// caustic distance above `0.3√ħ`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleStats {
    pub count: usize,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
    /// Points masked out for being close to a caustic image.
    pub near_caustic: usize,
}

pub const PEAK_FRACTION: f64 = 0.1;
pub const CAUSTIC_MARGIN: f64 = 0.3;

/// Indices kept by the masking rule.
pub fn mask(exact: &[f64], caustic_distance: &[f64], hbar: f64) -> Vec<usize> {
    let max = exact.iter().copied().fold(0.0, f64::max);
    (0..exact.len())
        .filter(|&i| exact[i] >= PEAK_FRACTION * max && caustic_distance[i] > CAUSTIC_MARGIN * hbar.sqrt())
        .collect()
}

/// `NaN` semiclassical values count as total failures.
pub fn oracle_stats(exact: &[f64], semiclassical: &[f64], caustic_distance: &[f64], hbar: f64) -> OracleStats {
    assert_eq!(exact.len(), semiclassical.len());
    assert_eq!(exact.len(), caustic_distance.len());
    let keep = mask(exact, caustic_distance, hbar);
    let max = exact.iter().copied().fold(0.0, f64::max);
    let near = (0..exact.len()).filter(|&i| exact[i] >= PEAK_FRACTION * max).count() - keep.len();
    let mut errs: Vec<f64> = keep
        .iter()
        .map(|&i| {
            let r = ((semiclassical[i] - exact[i]) / exact[i]).abs();
            if r.is_nan() {
                f64::INFINITY
            } else {
                r
            }
        })
        .collect();
    errs.sort_by(f64::total_cmp);
    let at = |f: f64| if errs.is_empty() { f64::NAN } else { errs[((errs.len() - 1) as f64 * f).round() as usize] };
    OracleStats {
        count: errs.len(),
        median: at(0.5),
        p90: at(0.9),
        max: errs.last().copied().unwrap_or(f64::NAN),
        near_caustic: near,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masking_and_quantiles() {
        let exact = [1.0, 0.5, 0.05, 1.0, 0.8];
        let semi = [1.1, 0.5, 9.0, f64::NAN, 0.8];
        let dist = [1.0, 1.0, 1.0, 1.0, 0.1];
        let s = oracle_stats(&exact, &semi, &dist, 0.25);
        assert_eq!(s.count, 3);
        assert_eq!(s.near_caustic, 1);
        assert!((s.median - 0.1).abs() < 1e-12);
        assert!(s.max.is_infinite());
    }
}
