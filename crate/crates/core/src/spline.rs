//! Interpolating cubic splines on strictly increasing knots.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplineEnd {
    /// Zero second derivative.
    Natural,
    /// Prescribed first derivative.
    Clamped(f64),
}

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>, left: SplineEnd, right: SplineEnd) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::Consistency(format!(
                "spline needs >= 2 knots with matching values (got {} and {})",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Consistency(
                "spline knots must be strictly increasing and finite".into(),
            ));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        // tridiagonal system for the knot second derivatives
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        match left {
            SplineEnd::Natural => diag[0] = 1.0,
            SplineEnd::Clamped(d) => {
                diag[0] = 2.0 * h[0];
                sup[0] = h[0];
                rhs[0] = 6.0 * (slope[0] - d);
            }
        }
        for i in 1..n - 1 {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
        }
        match right {
            SplineEnd::Natural => diag[n - 1] = 1.0,
            SplineEnd::Clamped(d) => {
                sub[n - 1] = h[n - 2];
                diag[n - 1] = 2.0 * h[n - 2];
                rhs[n - 1] = 6.0 * (d - slope[n - 2]);
            }
        }
        let m = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        Ok(Self { x, y, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    fn interval(&self, t: f64) -> usize {
        let n = self.x.len();
        if t <= self.x[0] {
            0
        } else if t >= self.x[n - 1] {
            n - 2
        } else {
            self.x.partition_point(|&v| v <= t) - 1
        }
    }

    /// `(S, S', S'')` at `t`; outside the knot range the end cubic is extended.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let s = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (y1 - y0) / h - (3.0 * a * a - 1.0) * h / 6.0 * m0 + (3.0 * b * b - 1.0) * h / 6.0 * m1;
        let d2 = a * m0 + b * m1;
        [s, d1, d2]
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t)[0]
    }
}

/// Thomas algorithm; the systems built here are diagonally dominant.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / den } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_cubic_with_clamped_ends() {
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let df = |x: f64| -2.0 + 1.5 * x * x;
        let x: Vec<f64> = vec![0.0, 0.3, 0.45, 1.0, 1.7, 2.0];
        let y = x.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::new(x, y, SplineEnd::Clamped(df(0.0)), SplineEnd::Clamped(df(2.0))).unwrap();
        for i in 0..=100 {
            let t = 0.02 * i as f64;
            let [v, d, dd] = s.eval(t);
            assert!((v - f(t)).abs() < 1e-12);
            assert!((d - df(t)).abs() < 1e-11);
            assert!((dd - 3.0 * t).abs() < 1e-10);
        }
    }

    #[test]
    fn natural_end_has_zero_curvature() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let y = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::new(x, y, SplineEnd::Natural, SplineEnd::Natural).unwrap();
        assert!(s.eval(0.0)[2].abs() < 1e-14);
        assert!(s.eval(0.9)[2].abs() < 1e-12);
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(CubicSpline::new(vec![0.0, 0.0], vec![1.0, 2.0], SplineEnd::Natural, SplineEnd::Natural).is_err());
    }

    proptest! {
        #[test]
        fn interpolates_knots(ys in proptest::collection::vec(-5.0f64..5.0, 3..30)) {
            let x: Vec<f64> = (0..ys.len()).map(|i| i as f64 * 0.37).collect();
            let s = CubicSpline::new(x.clone(), ys.clone(), SplineEnd::Natural, SplineEnd::Clamped(0.3)).unwrap();
            for (t, y) in x.iter().zip(&ys) {
                prop_assert!((s.value(*t) - y).abs() < 1e-10);
            }
            prop_assert!((s.eval(*x.last().unwrap())[1] - 0.3).abs() < 1e-9);
        }
    }
}
