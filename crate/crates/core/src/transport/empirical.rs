/// Exact Wasserstein-1 distance between the empirical distributions of two
/// real samples, integrating `|F⁻¹(t) - G⁻¹(t)|` over `t ∈ [0, 1]`.
///
/// Sample sizes may differ. Returns `NaN` if either sample is empty.
pub fn w1_empirical_1d(xs: &[f64], ys: &[f64]) -> f64 {
    if xs.is_empty() || ys.is_empty() {
        return f64::NAN;
    }
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());

    // walk the merged quantile breakpoints i/n and j/m in exact integer
    // arithmetic on the common denominator n*m
    let (mut i, mut j) = (0usize, 0usize);
    let mut t = 0usize;
    let total = n * m;
    let mut acc = 0.0;
    while t < total {
        let next_a = (i + 1) * m;
        let next_b = (j + 1) * n;
        let next = next_a.min(next_b);
        acc += (next - t) as f64 * (a[i] - b[j]).abs();
        t = next;
        if next == next_a {
            i += 1;
        }
        if next == next_b {
            j += 1;
        }
    }
    acc / total as f64
}
