//! Gauss–Legendre quadrature on intervals and tensor-product rectangles,
//! with order doubling until successive results agree.

use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre polynomial, seeded with the Chebyshev
/// angle approximation of the roots.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// ∫_a^b f(x) dx with an n-point rule.
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    xs.iter()
        .zip(&ws)
        .map(|(&x, &w)| w * f(mid + c * x))
        .sum::<f64>()
        * c
}

/// ∫∫ f over [a,b]×[c,d] with an n×n tensor rule.
pub fn integrate_2d(f: impl Fn(f64, f64) -> f64, a: f64, b: f64, c: f64, d: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let cu = 0.5 * (b - a);
    let cv = 0.5 * (d - c);
    let mu = 0.5 * (a + b);
    let mv = 0.5 * (c + d);
    let mut total = 0.0;
    for (&x, &wx) in xs.iter().zip(&ws) {
        let u = mu + cu * x;
        let mut row = 0.0;
        for (&y, &wy) in xs.iter().zip(&ws) {
            row += wy * f(u, mv + cv * y);
        }
        total += wx * row;
    }
    total * cu * cv
}

/// Doubles the order starting from `n0` until two successive results agree
/// to `tol`, returning the finer one.
pub fn adaptive_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, n0: usize, tol: f64) -> Result<f64> {
    let mut n = n0;
    let mut prev = integrate_1d(&f, a, b, n);
    for _ in 0..8 {
        n *= 2;
        let next = integrate_1d(&f, a, b, n);
        if (next - prev).abs() <= tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureDivergence((prev).abs()))
}

pub fn adaptive_2d(
    f: impl Fn(f64, f64) -> f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    n0: usize,
    tol: f64,
) -> Result<f64> {
    let mut n = n0;
    let mut prev = integrate_2d(&f, a, b, c, d, n);
    for _ in 0..7 {
        n *= 2;
        let next = integrate_2d(&f, a, b, c, d, n);
        if (next - prev).abs() <= tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureDivergence((prev).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_order_rules_match_known_values() {
        let (xs, ws) = gauss_legendre(2);
        assert_relative_eq!(xs[1], 1.0 / 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(ws[0], 1.0, epsilon = 1e-14);
        let (_, w3) = gauss_legendre(3);
        assert_relative_eq!(w3[1], 8.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn exact_on_polynomials() {
        // n-point rule is exact on degree 2n-1
        let v = integrate_1d(|x| x.powi(7) + x.powi(4), 0.0, 1.0, 4);
        assert_relative_eq!(v, 1.0 / 8.0 + 1.0 / 5.0, epsilon = 1e-14);
    }

    #[test]
    fn adaptive_converges_on_smooth_integrand() {
        let v = adaptive_2d(|x, y| (x * y).cos(), 0.0, 1.0, 0.0, 2.0, 4, 1e-12).unwrap();
        // ∫0^1 ∫0^2 cos(xy) dy dx = ∫0^1 sin(2x)/x dx
        let reference = adaptive_1d(
            |x| if x.abs() < 1e-12 { 2.0 } else { (2.0 * x).sin() / x },
            0.0,
            1.0,
            8,
            1e-13,
        )
        .unwrap();
        assert_relative_eq!(v, reference, epsilon = 1e-10);
    }
}
