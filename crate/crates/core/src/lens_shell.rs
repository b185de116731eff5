//! Membrane-shell model of a soft lens conforming to a (deformed) ocular
//! surface `Z = H(R)`.
//!
//! The state `(T, R)` is the scaled radial tension and the deformed radius of
//! the lens point with reference radius `r`. The system is singular at the
//! origin; it is started from the regular expansion `T ~ (1+s)(S-1) r`,
//! `R ~ S r`, where `S = R'(0)` is found by shooting on `T(r_lens) = 0`.

use crate::error::{Error, Result};
use crate::geometry::{LensGeometry, SurfaceProfile};

/// Default radial step of the lens grid (cm).
pub const DEFAULT_LENS_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensMaterial {
    /// Young's modulus (MPa).
    pub e_lens: f64,
    pub poisson: f64,
}

impl LensMaterial {
    pub fn new(e_lens: f64, poisson: f64) -> Result<Self> {
        if !(e_lens > 0.0 && e_lens.is_finite()) {
            return Err(Error::Material(format!(
                "lens Young's modulus must be positive, got {e_lens}"
            )));
        }
        if !(poisson > 0.0 && poisson < 0.5) {
            return Err(Error::Material(format!(
                "lens Poisson ratio must lie in (0, 0.5), got {poisson}"
            )));
        }
        Ok(Self { e_lens, poisson })
    }

    fn stiffness(&self) -> f64 {
        self.e_lens / (1.0 - self.poisson * self.poisson)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    pub step: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub sigma_tol: f64,
    /// Required `|T(r_lens)|` at the accepted root (cm).
    pub residual_tol: f64,
    /// Allowed `max |p_direct - p_compact| / max |p|`.
    pub consistency_tol: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            step: DEFAULT_LENS_STEP,
            sigma_tol: 1e-12,
            residual_tol: 1e-10,
            consistency_tol: 1e-2,
        }
    }
}

const BRACKET: (f64, f64) = (0.8, 1.2);
const SIGMA_LIMITS: (f64, f64) = (0.2, 5.0);
const EXPANSION: f64 = 1.5;

/// `T` and `R` on the uniform lens grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub sigma: f64,
    pub r: Vec<f64>,
    pub t: Vec<f64>,
    pub big_r: Vec<f64>,
    /// `R'` from the right-hand side at each grid state.
    pub dbig_r: Vec<f64>,
}

impl Trajectory {
    /// `F(S) = T(r_lens)`.
    pub fn end_tension(&self) -> f64 {
        *self.t.last().unwrap()
    }
}

struct Rhs<'a, S: SurfaceProfile + ?Sized> {
    surface: &'a S,
    lens: &'a LensGeometry,
    poisson: f64,
    sigma: f64,
}

impl<S: SurfaceProfile + ?Sized> Rhs<'_, S> {
    fn eval(&self, r: f64, y: [f64; 2]) -> [f64; 2] {
        let s = self.poisson;
        if r == 0.0 {
            return [(1.0 + s) * (self.sigma - 1.0), self.sigma];
        }
        let [t, big_r] = y;
        let gp = self.lens.posterior(r)[1];
        let hp = self.surface.slope(big_r);
        let q = (1.0 + gp * gp).sqrt() / (r * (1.0 + hp * hp).sqrt());
        let (tau, dtau) = self.lens.thickness_at(r);
        [
            (s * t + (1.0 - s * s) * (big_r - r)) * q - dtau / tau * t,
            (t + (1.0 + s) * r - s * big_r) * q,
        ]
    }
}

fn grid(r_lens: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || step > 0.1 * r_lens {
        return Err(Error::Config(format!("lens step {step} cm is not in (0, r_lens / 10]")));
    }
    let n = (r_lens / step).round().max(8.0) as usize;
    Ok((0..=n).map(|i| r_lens * i as f64 / n as f64).collect())
}

/// Integrates the initial value problem for slope `sigma` at the origin:
/// classic RK4 for the first three steps, four-step Adams-Bashforth after.
pub fn integrate_ivp<S: SurfaceProfile + ?Sized>(
    sigma: f64,
    surface: &S,
    lens: &LensGeometry,
    material: &LensMaterial,
    step: f64,
) -> Result<Trajectory> {
    if !(sigma > 0.0) {
        return Err(Error::Integration {
            r: 0.0,
            reason: format!("initial slope must be positive, got {sigma}"),
        });
    }
    let r = grid(lens.r_lens, step)?;
    let h = r[1] - r[0];
    let rhs = Rhs {
        surface,
        lens,
        poisson: material.poisson,
        sigma,
    };
    let r_max = surface.max_radius();
    let n = r.len();
    let mut y = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    y.push([0.0, 0.0]);
    f.push(rhs.eval(0.0, y[0]));
    for i in 0..n - 1 {
        let yi = y[i];
        let next = if i < 3 {
            let k1 = f[i];
            let k2 = rhs.eval(r[i] + 0.5 * h, axpy(yi, 0.5 * h, k1));
            let k3 = rhs.eval(r[i] + 0.5 * h, axpy(yi, 0.5 * h, k2));
            let k4 = rhs.eval(r[i + 1], axpy(yi, h, k3));
            [0, 1].map(|c| yi[c] + h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]))
        } else {
            [0, 1].map(|c| {
                yi[c] + h / 24.0 * (55.0 * f[i][c] - 59.0 * f[i - 1][c] + 37.0 * f[i - 2][c] - 9.0 * f[i - 3][c])
            })
        };
        if !(next[0].is_finite() && next[1].is_finite()) {
            return Err(Error::Integration {
                r: r[i + 1],
                reason: "non-finite state".into(),
            });
        }
        if next[1] < 0.0 || next[1] > r_max {
            return Err(Error::Integration {
                r: r[i + 1],
                reason: format!("R = {} left the surface range [0, {r_max}]", next[1]),
            });
        }
        y.push(next);
        f.push(rhs.eval(r[i + 1], next));
    }
    Ok(Trajectory {
        sigma,
        r,
        t: y.iter().map(|v| v[0]).collect(),
        big_r: y.iter().map(|v| v[1]).collect(),
        dbig_r: f.iter().map(|v| v[1]).collect(),
    })
}

fn axpy(y: [f64; 2], a: f64, x: [f64; 2]) -> [f64; 2] {
    [y[0] + a * x[0], y[1] + a * x[1]]
}

/// Lens solution on the reference grid. Lengths in cm, pressure in MPa.
#[derive(Debug, Clone)]
pub struct LensSolution {
    pub sigma: f64,
    pub r: Vec<f64>,
    pub t: Vec<f64>,
    pub big_r: Vec<f64>,
    pub eta_r: Vec<f64>,
    pub eta_z: Vec<f64>,
    pub eta_n: Vec<f64>,
    pub eta_norm: Vec<f64>,
    /// Suction pressure from the compact flux form.
    pub p: Vec<f64>,
    /// Suction pressure from the full, unreduced bracket.
    pub p_direct: Vec<f64>,
    /// Bracket samples `(S, F(S))` evaluated during shooting.
    pub samples: Vec<(f64, f64)>,
}

impl LensSolution {
    pub fn r_lens(&self) -> f64 {
        *self.r.last().unwrap()
    }

    pub fn max_abs_pressure(&self) -> f64 {
        self.p.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `int_0^r_lens p r dr` by the trapezoidal rule.
    pub fn net_load(&self) -> f64 {
        trapezoid(
            &self.r,
            &self.p.iter().zip(&self.r).map(|(p, r)| p * r).collect::<Vec<_>>(),
        )
    }

    /// `max |p_direct - p| / max |p|`, or 0 when `p` vanishes.
    pub fn formula_discrepancy(&self) -> f64 {
        let scale = self.max_abs_pressure();
        if scale == 0.0 {
            return 0.0;
        }
        self.p
            .iter()
            .zip(&self.p_direct)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// `T(r_lens)` for the given initial slope.
pub fn shooting_function<S: SurfaceProfile + ?Sized>(
    sigma: f64,
    surface: &S,
    lens: &LensGeometry,
    material: &LensMaterial,
    step: f64,
) -> Result<f64> {
    Ok(integrate_ivp(sigma, surface, lens, material, step)?.end_tension())
}

/// Solves the boundary value problem by bracketing and bisection on `S`.
pub fn shoot<S: SurfaceProfile + ?Sized>(
    surface: &S,
    lens: &LensGeometry,
    material: &LensMaterial,
    opts: &ShootingOptions,
) -> Result<LensSolution> {
    let f = |s: f64| shooting_function(s, surface, lens, material, opts.step);
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let record = |s: f64, samples: &mut Vec<(f64, f64)>| {
        let v = f(s).unwrap_or(f64::NAN);
        samples.push((s, v));
        v
    };

    let (mut lo, mut hi) = BRACKET;
    record(lo, &mut samples);
    record(hi, &mut samples);
    let bracket = loop {
        if let Some(b) = find_sign_change(&samples) {
            break b;
        }
        if lo <= SIGMA_LIMITS.0 && hi >= SIGMA_LIMITS.1 {
            return Err(Error::Shooting { samples });
        }
        if lo > SIGMA_LIMITS.0 {
            lo = (lo / EXPANSION).max(SIGMA_LIMITS.0);
            record(lo, &mut samples);
        }
        if hi < SIGMA_LIMITS.1 {
            hi = (hi * EXPANSION).min(SIGMA_LIMITS.1);
            record(hi, &mut samples);
        }
    };

    let ((mut a, mut fa), (mut b, _)) = bracket;
    let mut root = if fa == 0.0 { Some(a) } else { None };
    while root.is_none() && b - a > opts.sigma_tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            root = Some(m);
        } else if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let sigma = root.unwrap_or(0.5 * (a + b));
    let traj = integrate_ivp(sigma, surface, lens, material, opts.step)?;
    if traj.end_tension().abs() > opts.residual_tol {
        samples.push((sigma, traj.end_tension()));
        return Err(Error::Shooting { samples });
    }
    if let Some(w) = traj.big_r.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::Integration {
            r: traj.r[w + 1],
            reason: "deformed lens radius is not increasing".into(),
        });
    }
    let sol = finish(traj, surface, lens, material, samples);
    let gap = sol.formula_discrepancy();
    // below 1e-14 MPa both forms are rounding noise
    if gap > opts.consistency_tol && gap * sol.max_abs_pressure() > 1e-14 {
        return Err(Error::Consistency(format!(
            "suction pressure forms disagree by {:.3e} of max |p|",
            gap
        )));
    }
    Ok(sol)
}

/// First adjacent pair (in `S` order) of finite samples with opposite signs.
fn find_sign_change(samples: &[(f64, f64)]) -> Option<((f64, f64), (f64, f64))> {
    let mut s: Vec<(f64, f64)> = samples.iter().copied().filter(|v| v.1.is_finite()).collect();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(&z) = s.iter().find(|v| v.1 == 0.0) {
        return Some((z, z));
    }
    s.windows(2)
        .find(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0], w[1]))
}

fn finish<S: SurfaceProfile + ?Sized>(
    traj: Trajectory,
    surface: &S,
    lens: &LensGeometry,
    material: &LensMaterial,
    samples: Vec<(f64, f64)>,
) -> LensSolution {
    let Trajectory {
        sigma,
        r,
        t,
        big_r,
        dbig_r,
    } = traj;
    let n = r.len();
    let h = r[1] - r[0];
    let s = material.poisson;
    let k = material.stiffness();

    let mut eta_r = Vec::with_capacity(n);
    let mut eta_z = Vec::with_capacity(n);
    let mut eta_n = Vec::with_capacity(n);
    let mut eta_norm = Vec::with_capacity(n);
    let mut flux = Vec::with_capacity(n);
    let mut slope_factor = Vec::with_capacity(n);
    for i in 0..n {
        let [g, gp, _] = lens.posterior(r[i]);
        let er = big_r[i] - r[i];
        let ez = surface.height(big_r[i]) - g;
        let sg = (1.0 + gp * gp).sqrt();
        eta_r.push(er);
        eta_z.push(ez);
        eta_n.push((-gp * er + ez) / sg);
        eta_norm.push(er.hypot(ez));
        let hp = surface.slope(big_r[i]);
        let sh = (1.0 + hp * hp).sqrt();
        let tau = lens.thickness_at(r[i]).0;
        flux.push(k * tau * t[i] * hp / sh);
        slope_factor.push((hp / sh, sh / sg, tau));
    }
    let p = pressure_from_flux(&flux, &r, h);

    let direct: Vec<f64> = (0..n)
        .map(|i| {
            let (hs, ratio, tau) = slope_factor[i];
            let bracket = if i == 0 {
                (1.0 + s) * (sigma - 1.0)
            } else {
                dbig_r[i] * ratio - 1.0 + s * (big_r[i] - r[i]) / r[i]
            };
            r[i] * hs * k * tau * bracket
        })
        .collect();
    let p_direct = pressure_from_flux(&direct, &r, h);

    LensSolution {
        sigma,
        r,
        t,
        big_r,
        eta_r,
        eta_z,
        eta_n,
        eta_norm,
        p,
        p_direct,
        samples,
    }
}

/// `p = -flux' / r`, with the origin value `-flux''(0)` of the even flux.
fn pressure_from_flux(flux: &[f64], r: &[f64], h: f64) -> Vec<f64> {
    let d = derivative(flux, h);
    let mut p: Vec<f64> = d.iter().zip(r).map(|(d, r)| -d / r).collect();
    let f = flux;
    p[0] = -(-f[2] + 16.0 * f[1] - 30.0 * f[0] + 16.0 * f[1] - f[2]) / (12.0 * h * h);
    p
}

/// Fourth-order finite-difference derivative of an even function sampled on
/// a uniform grid starting at the axis.
fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let at = |i: isize| -> f64 {
        if i < 0 {
            f[(-i) as usize]
        } else {
            f[i as usize]
        }
    };
    (0..n)
        .map(|i| {
            let m = n - 1;
            if i + 2 <= m {
                let j = i as isize;
                (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h)
            } else if i == m - 1 {
                (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h)
            } else {
                (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / (12.0 * h)
            }
        })
        .collect()
}
