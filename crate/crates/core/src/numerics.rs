//! Small numerical kernels: finite-difference weights, Gauss–Legendre rules, Lagrange weights,
//! the Riemann zeta function and trapezoid corrections for algebraic kinks.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// Fornberg weights for derivatives 0..=order_max at `x0` from nodes `xs`.
///
/// Returns `w[k][j]`, the weight of node j in the k-th derivative.
pub fn fornberg(x0: f64, xs: &[f64], order_max: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order_max + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order_max);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Central first-derivative weights of even `order` on a unit-spaced grid, offsets −order/2..=order/2.
pub fn central_first_derivative(order: usize) -> Vec<f64> {
    let h = (order / 2) as i64;
    let xs: Vec<f64> = (-h..=h).map(|o| o as f64).collect();
    fornberg(0.0, &xs, 1).swap_remove(1)
}

/// Gauss–Legendre nodes and weights on [−1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_interval(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    (x.iter().map(|t| a + half * (t + 1.0)).collect(), w.iter().map(|v| v * half).collect())
}

/// Lagrange interpolation weights at `x` for nodes `xs`.
pub fn lagrange_weights(x: f64, xs: &[f64]) -> Vec<f64> {
    (0..xs.len())
        .map(|j| {
            xs.iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| (x - xk) / (xs[j] - xk))
                .product()
        })
        .collect()
}

/// B_2, B_4, …, B_16 divided by (2j)!.
const BERNOULLI_OVER_FACT: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
];

/// Riemann ζ(s) for real s ≠ 1: Euler–Maclaurin for s ≥ ½, the reflection formula below.
pub fn zeta(s: f64) -> f64 {
    if s == 0.0 {
        return -0.5;
    }
    if s < 0.5 {
        if s == s.round() && s < 0.0 && (s as i64) % 2 == 0 {
            return 0.0;
        }
        return 2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(1.0 - s) * zeta(1.0 - s);
    }
    const N: usize = 20;
    let nf = N as f64;
    let mut acc: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    acc += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // rising factorial s(s+1)…(s+2j−2), updated two factors at a time
    let mut rise = s;
    for (j, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let p = 2 * j + 1;
        acc += b * rise * nf.powf(-s - p as f64);
        rise *= (s + p as f64) * (s + p as f64 + 1.0);
    }
    acc
}

/// Corrections (c0, c2) for the trapezoid rule on ∫_ℝ |x|^α G(x) dx with G smooth, α > −1:
///
/// ∫ ≈ h Σ_{k≠0} |kh|^α G(kh) + c0·G(0) + c2·G''(0).
///
/// The x = 0 node is omitted from the sum; for α = 0 the correction restores it (c0 = h).
pub fn kink_corrections(alpha: f64, h: f64) -> (f64, f64) {
    (-2.0 * zeta(-alpha) * h.powf(alpha + 1.0), -zeta(-alpha - 2.0) * h.powf(alpha + 3.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(0.0) + 0.5).abs() < 1e-14);
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-14);
        assert!((zeta(-3.0) - 1.0 / 120.0).abs() < 1e-14);
        assert_eq!(zeta(-2.0), 0.0);
        assert!((zeta(0.5) + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!((zeta(-0.5) + 0.207_886_224_977_354_57).abs() < 1e-13);
    }

    #[test]
    fn kink_corrected_trapezoid_is_high_order() {
        for alpha in [-0.5, 0.0, 0.5, 1.0, 1.5, 3.0] {
            let exact = gamma((alpha + 1.0) / 2.0);
            let h = 0.1;
            let raw: f64 = (1..400).map(|k| 2.0 * h * (k as f64 * h).powf(alpha) * (-(k as f64 * h).powi(2)).exp()).sum();
            let (c0, c2) = kink_corrections(alpha, h);
            let corrected = raw + c0 - 2.0 * c2;
            assert!((corrected - exact).abs() < 1e-6 * exact, "alpha={alpha}: {corrected} vs {exact}");
        }
    }

    #[test]
    fn central_weights_known() {
        let w = central_first_derivative(2);
        assert!((w[0] + 0.5).abs() < 1e-15 && w[1].abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
        let w = central_first_derivative(4);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn fornberg_exact_on_polynomials() {
        let xs = [-0.3, 0.1, 0.45, 0.9, 1.4];
        let w = fornberg(0.2, &xs, 2);
        let f = |x: f64| 1.0 + 2.0 * x - x * x * x;
        let d1: f64 = w[1].iter().zip(&xs).map(|(w, &x)| w * f(x)).sum();
        let d2: f64 = w[2].iter().zip(&xs).map(|(w, &x)| w * f(x)).sum();
        assert!((d1 - (2.0 - 3.0 * 0.04)).abs() < 1e-12);
        assert!((d2 - (-6.0 * 0.2)).abs() < 1e-11);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16, 96] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 2;
            let exact = if deg % 2 == 0 { 2.0 / (deg + 1) as f64 } else { 0.0 };
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((got - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn lagrange_reproduces_cubics() {
        let xs = [0.0, 0.7, 1.1, 2.0];
        let f = |x: f64| x * x * x - x;
        let w = lagrange_weights(1.37, &xs);
        let v: f64 = w.iter().zip(&xs).map(|(w, &x)| w * f(x)).sum();
        assert!((v - f(1.37)).abs() < 1e-13);
    }
}
