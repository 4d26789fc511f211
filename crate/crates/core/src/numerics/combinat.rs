use num_complex::Complex64;

/// Binomial coefficient `C(n, k)` as a float (zero for `k > n`).
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |a, b| a * b as f64)
}

const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// Bernoulli number `B_{2k}` for `1 ≤ k ≤ 15`.
pub fn bernoulli_even(k: usize) -> f64 {
    assert!((1..=BERNOULLI_EVEN.len()).contains(&k), "B_{{2k}} tabulated for k ≤ 15");
    let (n, d) = BERNOULLI_EVEN[k - 1];
    n / d
}

/// Stirling numbers of the second kind `S(n, j)` for `n, j ≤ size`.
pub fn stirling2_table(size: usize) -> Vec<Vec<f64>> {
    let mut s = vec![vec![0.0; size + 1]; size + 1];
    s[0][0] = 1.0;
    for n in 1..=size {
        for j in 1..=n {
            s[n][j] = j as f64 * s[n - 1][j] + s[n - 1][j - 1];
        }
    }
    s
}

/// `Li_{-k}(z) = Σ_{n≥1} n^k zⁿ`, continued to `z ≠ 1`.
pub fn neg_polylog(k: usize, z: Complex64, stirling: &[Vec<f64>]) -> Complex64 {
    let w = z / (1.0 - z);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut wp = w;
    let mut fact = 1.0;
    for j in 0..=k {
        if j > 0 {
            fact *= j as f64;
        }
        acc += wp * (fact * stirling[k + 1][j + 1]);
        wp *= w;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(30, 15), 155117520.0);
    }

    #[test]
    fn bernoulli_matches_even_zeta() {
        // ζ(2k) = (-1)^{k+1} B_{2k} (2π)^{2k} / (2 (2k)!)
        let two_pi = 2.0 * std::f64::consts::PI;
        for k in 1..=15usize {
            let s = 2 * k as i32;
            let big_n = 20000.0f64;
            let head: f64 = (1..20000).map(|n| (n as f64).powi(-s)).sum();
            let zeta = head + big_n.powi(1 - s) / (s - 1) as f64 + 0.5 * big_n.powi(-s);
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let from_b =
                sign * bernoulli_even(k) * two_pi.powi(2 * k as i32) / (2.0 * factorial(2 * k as u32));
            assert!((zeta - from_b).abs() < 1e-9 * zeta, "k={k}");
        }
    }

    #[test]
    fn negative_index_polylog() {
        let st = stirling2_table(20);
        let z = Complex64::new(0.3, 0.4);
        for k in 0..6usize {
            let direct: Complex64 =
                (1..400).map(|n| z.powu(n) * (n as f64).powi(k as i32)).sum();
            assert!((neg_polylog(k, z, &st) - direct).norm() < 1e-10);
        }
        // Abel value at -1: Li_{-1}(-1) = -1/4.
        assert!((neg_polylog(1, Complex64::new(-1.0, 0.0), &st).re + 0.25).abs() < 1e-15);
    }
}
