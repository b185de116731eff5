//! The deformed ocular surface `Z = H(R)` as a smooth interpolant.
//!
//! `H` is stored as the reference surface plus a spline correction,
//! `H(R) = h(R) + delta(R)`, on uniform knots in `R`. With zero displacement
//! the correction vanishes identically, so the undeformed eye is reproduced
//! exactly, and the spline only has to resolve the µm-scale deformation.
//!
//! The correction is a cubic spline in `q = R^2`, which makes it even and
//! smooth at the axis. A plain cubic in `R` leaves an odd `R^3` term in the
//! first interval, which the lens sees as a cone of suction pressure at the
//! centre.

use super::field::DisplacementField;
use crate::error::{Error, Result};
use crate::geometry::{OcularSurface, SurfaceProfile};
use crate::spline::{CubicSpline, SplineEnd};

/// Default number of uniform knots of the correction spline.
pub const DEFAULT_SURFACE_KNOTS: usize = 400;
/// Default radial extent of the spline (cm); must cover the deformed lens.
pub const DEFAULT_SURFACE_SPAN: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct DeformedSurface {
    base: OcularSurface,
    delta: CubicSpline,
    span: f64,
}

impl DeformedSurface {
    pub fn undeformed(base: &OcularSurface, span: f64, knots: usize) -> Result<Self> {
        let x = uniform(span, knots);
        let zeros = vec![0.0; x.len()];
        Self::from_knots(base, x, zeros, span)
    }

    fn from_knots(base: &OcularSurface, x: Vec<f64>, delta: Vec<f64>, span: f64) -> Result<Self> {
        let q = x.iter().map(|r| r * r).collect();
        let delta = CubicSpline::new(q, delta, SplineEnd::Natural, SplineEnd::Natural)?;
        Ok(Self {
            base: base.clone(),
            delta,
            span,
        })
    }

    /// Smooths arbitrary samples `(R_i, H_i)` of the deformed surface: the
    /// correction `H_i - h(R_i)` is resampled on uniform knots by local cubic
    /// interpolation and splined.
    pub fn from_samples(base: &OcularSurface, samples: &[(f64, f64)], span: f64, knots: usize) -> Result<Self> {
        check_span(base, span, knots)?;
        if samples.len() < 4 {
            return Err(Error::Coupling("need at least 4 surface samples".into()));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Coupling(
                "deformed surface samples fold over (R not increasing)".into(),
            ));
        }
        let rs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ds: Vec<f64> = samples.iter().map(|s| s.1 - base.h_unchecked(s.0)).collect();
        if rs[0] > 0.0 || *rs.last().unwrap() < span {
            return Err(Error::Coupling(format!(
                "surface samples cover [{}, {}], spline needs [0, {span}]",
                rs[0],
                rs.last().unwrap()
            )));
        }
        let x = uniform(span, knots);
        let d = x.iter().map(|&xk| lagrange4(&rs, &ds, xk)).collect();
        Self::from_knots(base, x, d, span)
    }

    /// Builds `H` from the deformed Γ_out vertices `(r + u_r, h(r) + u_z)`.
    /// Only vertex values are used: the quadratic trace has slope jumps at
    /// the vertices, and sampling inside the edges would turn them into
    /// spurious curvature at the spline knots.
    pub fn from_displacement(base: &OcularSurface, u: &DisplacementField, span: f64, knots: usize) -> Result<Self> {
        let mesh = &u.mesh;
        let mut samples = Vec::new();
        let mut last = None;
        for be in mesh.out_edges() {
            for v in [be.a, be.b] {
                if last == Some(v) {
                    continue;
                }
                let [r, z] = mesh.vertices[v];
                let [ur, uz] = u.node(v);
                samples.push((r + ur, z + uz));
                last = Some(v);
            }
        }
        if let Some(w) = samples.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Coupling(format!(
                "deformed surface folds over near R = {:.4} cm",
                samples[w].0
            )));
        }
        Self::from_samples(base, &samples, span, knots)
    }

    /// `(H, H', H'')` at deformed radius `R`.
    pub fn eval(&self, r: f64) -> [f64; 3] {
        let h = self.base.eval_unchecked(r);
        let q = r * r;
        let [d, dq, dqq] = self.delta.eval(q);
        [h[0] + d, h[1] + 2.0 * r * dq, h[2] + 2.0 * dq + 4.0 * q * dqq]
    }

    /// The spline correction `H - h` at `R`.
    pub fn correction(&self, r: f64) -> f64 {
        self.delta.value(r * r)
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn base(&self) -> &OcularSurface {
        &self.base
    }

    /// Knot radii and the values of `H` there.
    pub fn knot_samples(&self) -> Vec<(f64, f64)> {
        self.delta
            .knots()
            .iter()
            .zip(self.delta.values())
            .map(|(&q, &d)| {
                let r = q.sqrt();
                (r, self.base.h_unchecked(r) + d)
            })
            .collect()
    }
}

impl SurfaceProfile for DeformedSurface {
    fn height(&self, r: f64) -> f64 {
        self.eval(r)[0]
    }

    fn slope(&self, r: f64) -> f64 {
        self.eval(r)[1]
    }

    fn max_radius(&self) -> f64 {
        self.span
    }
}

fn check_span(base: &OcularSurface, span: f64, knots: usize) -> Result<()> {
    if !(span > 0.0 && span < base.r_eye()) || knots < 4 {
        return Err(Error::Config(format!(
            "surface spline needs 0 < span < R_eye and >= 4 knots (span {span}, {knots} knots)"
        )));
    }
    Ok(())
}

fn uniform(span: f64, knots: usize) -> Vec<f64> {
    (0..knots).map(|i| span * i as f64 / (knots - 1) as f64).collect()
}

/// Cubic Lagrange interpolation through the four samples around `x`.
fn lagrange4(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let i = xs.partition_point(|&v| v <= x).saturating_sub(1);
    let s = i.saturating_sub(1).min(n - 4);
    let mut out = 0.0;
    for a in s..s + 4 {
        let mut w = 1.0;
        for b in s..s + 4 {
            if a != b {
                w *= (x - xs[b]) / (xs[a] - xs[b]);
            }
        }
        out += w * ys[a];
    }
    out
}

/// `r -> r + u_r(r, h(r))` on Γ_out and its inverse.
#[derive(Debug)]
pub struct RadialMap<'a> {
    base: &'a OcularSurface,
    u: &'a DisplacementField,
}

impl<'a> RadialMap<'a> {
    /// Checks monotonicity at every Γ_out node.
    pub fn new(base: &'a OcularSurface, u: &'a DisplacementField) -> Result<Self> {
        let mesh = &u.mesh;
        let mut prev = f64::NEG_INFINITY;
        for be in mesh.out_edges() {
            for n in [be.a, mesh.edge_node(be.edge)] {
                let r = mesh.nodes[n][0] + u.node(n)[0];
                if !(r > prev) {
                    return Err(Error::Coupling(format!(
                        "deformed surface folds over near r = {:.4} cm",
                        mesh.nodes[n][0]
                    )));
                }
                prev = r;
            }
        }
        Ok(Self { base, u })
    }

    pub fn forward(&self, r: f64) -> f64 {
        r + self.u.surface_at_r(self.base, r)[0]
    }

    /// Reference radius whose deformed radius is `target`: bisection down to
    /// a 1e-6 cm bracket, then bracketed secant steps to 1e-13 cm.
    pub fn invert(&self, target: f64) -> Result<f64> {
        let (mut lo, mut hi) = (0.0, self.base.r_eye());
        let (mut flo, mut fhi) = (self.forward(lo) - target, self.forward(hi) - target);
        if flo > 0.0 || fhi < 0.0 {
            return Err(Error::Coupling(format!(
                "deformed radius {target} cm outside the deformed eye [{}, {}]",
                flo + target,
                fhi + target
            )));
        }
        if flo == 0.0 {
            return Ok(lo);
        }
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            let f = self.forward(mid) - target;
            if f < 0.0 {
                (lo, flo) = (mid, f);
            } else {
                (hi, fhi) = (mid, f);
            }
        }
        for _ in 0..40 {
            if hi - lo <= 1e-13 || fhi == 0.0 {
                break;
            }
            let mut x = lo - flo * (hi - lo) / (fhi - flo);
            if !(x > lo && x < hi) {
                x = 0.5 * (lo + hi);
            }
            let f = self.forward(x) - target;
            if f.abs() < 1e-15 {
                return Ok(x);
            }
            if f < 0.0 {
                (lo, flo) = (x, f);
            } else {
                (hi, fhi) = (x, f);
            }
        }
        Ok(if flo.abs() < fhi.abs() { lo } else { hi })
    }
}
