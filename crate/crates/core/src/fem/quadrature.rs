//! Quadrature rules on the reference triangle and the unit interval.

/// Degree-5, 7-point rule on the reference triangle `{xi, eta >= 0, xi + eta <= 1}`:
/// `(xi, eta, weight)` with weights summing to the triangle area 1/2.
pub const TRIANGLE_7: [(f64, f64, f64); 7] = {
    const A1: f64 = 0.059_715_871_789_770;
    const B1: f64 = 0.470_142_064_105_115;
    const A2: f64 = 0.797_426_985_353_087;
    const B2: f64 = 0.101_286_507_323_456;
    const W0: f64 = 0.225 / 2.0;
    const W1: f64 = 0.132_394_152_788_506 / 2.0;
    const W2: f64 = 0.125_939_180_544_827 / 2.0;
    [
        (1.0 / 3.0, 1.0 / 3.0, W0),
        (B1, B1, W1),
        (A1, B1, W1),
        (B1, A1, W1),
        (B2, B2, W2),
        (A2, B2, W2),
        (B2, A2, W2),
    ]
};

/// 4-point Gauss-Legendre on `[0, 1]`: `(t, weight)`.
pub const GAUSS_4: [(f64, f64); 4] = {
    const X1: f64 = 0.339_981_043_584_856_3;
    const X2: f64 = 0.861_136_311_594_052_6;
    const W1: f64 = 0.652_145_154_862_546_1;
    const W2: f64 = 0.347_854_845_137_453_9;
    [
        (0.5 - 0.5 * X2, 0.5 * W2),
        (0.5 - 0.5 * X1, 0.5 * W1),
        (0.5 + 0.5 * X1, 0.5 * W1),
        (0.5 + 0.5 * X2, 0.5 * W2),
    ]
};

/// Quadratic edge shape functions on `[0, 1]` for nodes (start, mid, end),
/// and their derivatives.
pub fn edge_shape(t: f64) -> ([f64; 3], [f64; 3]) {
    (
        [(1.0 - t) * (1.0 - 2.0 * t), 4.0 * t * (1.0 - t), t * (2.0 * t - 1.0)],
        [4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_rule_is_exact_to_degree_five() {
        // int over the reference triangle of xi^a eta^b = a! b! / (a + b + 2)!
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        for a in 0..=5u32 {
            for b in 0..=(5 - a) {
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                let q: f64 = TRIANGLE_7
                    .iter()
                    .map(|&(x, y, w)| w * x.powi(a as i32) * y.powi(b as i32))
                    .sum();
                assert!((q - exact).abs() < 1e-14, "a={a} b={b}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn gauss_rule_is_exact_to_degree_seven() {
        for k in 0..=7 {
            let q: f64 = GAUSS_4.iter().map(|&(t, w)| w * t.powi(k)).sum();
            assert!((q - 1.0 / (k as f64 + 1.0)).abs() < 1e-14);
        }
    }
}
