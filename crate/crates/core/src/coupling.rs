//! Staggered fixed-point coupling of the lens and the elastic eye.
//!
//! One iteration: conform the lens to the smoothed deformed surface of the
//! previous iterate, move its suction pressure onto the reference eye surface
//! through the radius correspondence `chi`, solve the eye, and rebuild the
//! deformed surface.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::{
    DeformedSurface, DisplacementField, ElasticSystem, RadialMap, SurfaceTraction, DEFAULT_SURFACE_KNOTS,
    DEFAULT_SURFACE_SPAN,
};
use crate::geometry::{LensGeometry, MaterialField, OcularSurface};
use crate::lens_shell::{shoot, LensMaterial, LensSolution, ShootingOptions};
use crate::mesh::Mesh;
use crate::spline::{CubicSpline, SplineEnd};

/// Reference eye radius `chi(r)` below each lens grid point.
#[derive(Debug, Clone)]
pub struct ChiMap {
    /// Lens reference radii.
    pub r: Vec<f64>,
    pub chi: Vec<f64>,
    inverse: CubicSpline,
}

impl ChiMap {
    /// Solves `chi + u_r(chi, h(chi)) = R_lens(r)` at every lens grid point.
    pub fn build(surface: &OcularSurface, u: &DisplacementField, lens: &LensSolution) -> Result<Self> {
        let map = RadialMap::new(surface, u)?;
        let chi = lens
            .big_r
            .iter()
            .map(|&target| map.invert(target))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(i) = chi.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Coupling(format!(
                "chi is not increasing near lens radius {:.4} cm",
                lens.r[i + 1]
            )));
        }
        let inverse = CubicSpline::new(chi.clone(), lens.r.clone(), SplineEnd::Natural, SplineEnd::Natural)?;
        Ok(Self {
            r: lens.r.clone(),
            chi,
            inverse,
        })
    }

    /// Eye reference radius under the lens edge.
    pub fn chi_end(&self) -> f64 {
        *self.chi.last().unwrap()
    }

    /// Lens reference radius above eye reference radius `x`.
    pub fn inverse(&self, x: f64) -> f64 {
        self.inverse.value(x.clamp(0.0, self.chi_end()))
    }

    /// `max |R_eye(chi) - R_lens|` over the knots.
    pub fn residual(&self, surface: &OcularSurface, u: &DisplacementField, lens: &LensSolution) -> f64 {
        self.chi
            .iter()
            .zip(&lens.big_r)
            .map(|(&c, &target)| (c + u.surface_at_r(surface, c)[0] - target).abs())
            .fold(0.0, f64::max)
    }
}

/// `P_out(x) = p(chi^-1(x))` on `[0, chi(r_lens)]`, zero beyond.
pub fn transport_pressure(lens: &LensSolution, chi: &ChiMap) -> Result<SurfaceTraction> {
    if lens.p.iter().all(|&p| p == 0.0) {
        return Ok(SurfaceTraction::zero());
    }
    SurfaceTraction::from_samples(chi.chi.clone(), lens.p.clone())
}

/// The eye side of the coupled problem: geometry, material and the factored
/// stiffness matrix. The factorisation is reused for every iteration and for
/// every lens run on the same eye.
#[derive(Debug)]
pub struct EyeModel {
    pub surface: OcularSurface,
    pub system: ElasticSystem,
}

impl EyeModel {
    pub fn new(surface: OcularSurface, mesh: Arc<Mesh>, material: &MaterialField) -> Result<Self> {
        let system = ElasticSystem::assemble(mesh, material)?;
        Ok(Self { surface, system })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.system.mesh
    }

    pub fn material(&self) -> &MaterialField {
        &self.system.material
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingOptions {
    pub epsilon: f64,
    pub max_iters: usize,
    /// Weight of the new displacement in `u^n = u^{n-1} + w (u* - u^{n-1})`.
    pub relaxation: f64,
    pub surface_knots: usize,
    pub surface_span: f64,
    pub shooting: ShootingOptions,
    /// Abort once the change grows this many iterations in a row.
    pub divergence_window: usize,
    /// Keeps the eye rigid (u = 0); the lens then sees the reference surface.
    pub rigid_eye: bool,
    /// On divergence, restart with the relaxation halved, down to this
    /// value. `None` disables the retry.
    pub min_relaxation: Option<f64>,
}

impl Default for CouplingOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            max_iters: 100,
            relaxation: 1.0,
            surface_knots: DEFAULT_SURFACE_KNOTS,
            surface_span: DEFAULT_SURFACE_SPAN,
            shooting: ShootingOptions::default(),
            divergence_window: 5,
            rigid_eye: false,
            min_relaxation: Some(0.1),
        }
    }
}

impl CouplingOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iters == 0 || self.max_iters > 100 {
            return Err(Error::Config(format!(
                "max_iters must lie in 1..=100, got {}",
                self.max_iters
            )));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::Config(format!(
                "relaxation must lie in (0, 1], got {}",
                self.relaxation
            )));
        }
        if let Some(min) = self.min_relaxation {
            if !(min > 0.0 && min <= self.relaxation) {
                return Err(Error::Config(format!(
                    "min_relaxation must lie in (0, relaxation], got {min}"
                )));
            }
        }
        if self.divergence_window == 0 {
            return Err(Error::Config("divergence window must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    /// Relative sup-norm change of `u`; NaN at `n = 1`.
    pub rel_u: f64,
    pub rel_p: f64,
    /// Shooting parameter of the lens solve.
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    MaxIterations,
    Diverged,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Converged => "converged",
            Outcome::MaxIterations => "max_iterations",
            Outcome::Diverged => "diverged",
        }
    }
}

/// Final iterate of a coupled run with its history.
#[derive(Debug, Clone)]
pub struct CoupledState {
    pub outcome: Outcome,
    /// Relaxation factor of the attempt that produced this state.
    pub relaxation: f64,
    pub history: Vec<IterationRecord>,
    pub lens: LensSolution,
    pub chi: ChiMap,
    pub traction: SurfaceTraction,
    pub u: DisplacementField,
    /// Deformed surface built from `u`.
    pub surface: DeformedSurface,
    pub warnings: Vec<String>,
}

impl CoupledState {
    pub fn converged(&self) -> bool {
        self.outcome == Outcome::Converged
    }

    pub fn iterations(&self) -> usize {
        self.history.len()
    }
}

fn relative(diff: f64, norm: f64) -> f64 {
    if norm > 0.0 {
        diff / norm
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

struct Iterate {
    lens: LensSolution,
    chi: ChiMap,
    traction: SurfaceTraction,
    u: DisplacementField,
    surface: DeformedSurface,
}

/// Steps 1-4 of one iteration starting from `(u, H)` of the previous one.
fn advance(
    eye: &EyeModel,
    lens: &LensGeometry,
    lens_material: &LensMaterial,
    opts: &CouplingOptions,
    u_prev: &DisplacementField,
    h_prev: &DeformedSurface,
) -> Result<Iterate> {
    let sol = shoot(h_prev, lens, lens_material, &opts.shooting)?;
    let chi = ChiMap::build(&eye.surface, u_prev, &sol)?;
    let traction = transport_pressure(&sol, &chi)?;
    let u = if opts.rigid_eye {
        DisplacementField::zeros(eye.mesh().clone())
    } else {
        let target = eye.system.solve_traction(&traction)?;
        u_prev.relaxed_towards(&target, opts.relaxation)
    };
    let surface = DeformedSurface::from_displacement(&eye.surface, &u, opts.surface_span, opts.surface_knots)?;
    Ok(Iterate {
        lens: sol,
        chi,
        traction,
        u,
        surface,
    })
}

/// Runs the staggered iteration until both relative changes drop below
/// `epsilon`. The test starts at the second iteration, since the first has
/// nothing to compare against. Non-convergence is reported through
/// [`CoupledState::outcome`]; sub-solver failures are errors.
///
/// Stiff lenses (large `E_lens / E_eye`) amplify short-wavelength surface
/// wiggles near the axis from one iteration to the next, and plain
/// staggering then diverges. If that is detected, the run is restarted with
/// half the relaxation, as long as `min_relaxation` allows.
pub fn run_coupled(
    eye: &EyeModel,
    lens: &LensGeometry,
    lens_material: &LensMaterial,
    opts: &CouplingOptions,
) -> Result<CoupledState> {
    opts.validate()?;
    let mut attempt = *opts;
    let mut notes = Vec::new();
    loop {
        let mut state = run_once(eye, lens, lens_material, &attempt)?;
        let next = 0.5 * attempt.relaxation;
        match opts.min_relaxation {
            Some(min) if state.outcome == Outcome::Diverged && next >= min - 1e-12 => {
                notes.push(format!(
                    "diverged after {} iterations with relaxation {}; restarting with {next}",
                    state.iterations(),
                    attempt.relaxation
                ));
                attempt.relaxation = next;
            }
            _ => {
                notes.append(&mut state.warnings);
                state.warnings = notes;
                return Ok(state);
            }
        }
    }
}

fn run_once(
    eye: &EyeModel,
    lens: &LensGeometry,
    lens_material: &LensMaterial,
    opts: &CouplingOptions,
) -> Result<CoupledState> {
    let mut u = DisplacementField::zeros(eye.mesh().clone());
    let mut h = DeformedSurface::undeformed(&eye.surface, opts.surface_span, opts.surface_knots)?;
    let mut history = Vec::new();
    let mut warnings = Vec::new();
    let mut last: Option<Iterate> = None;
    let mut growth = 0;
    let mut outcome = Outcome::MaxIterations;

    for n in 1..=opts.max_iters {
        let next = advance(eye, lens, lens_material, opts, &u, &h)?;
        let (rel_u, rel_p) = match &last {
            None => (f64::NAN, f64::NAN),
            Some(prev) => (
                relative(next.u.max_difference(&prev.u), next.u.max_magnitude()),
                relative(max_abs_diff(&next.lens.p, &prev.lens.p), next.lens.max_abs_pressure()),
            ),
        };
        history.push(IterationRecord {
            n,
            rel_u,
            rel_p,
            sigma: next.lens.sigma,
        });
        u = next.u.clone();
        h = next.surface.clone();
        last = Some(next);

        if n >= 2 {
            let change = rel_u.max(rel_p);
            let before = history[n - 2].rel_u.max(history[n - 2].rel_p);
            if n >= 3 && change > before {
                growth += 1;
                if n >= 4 {
                    warnings.push(format!(
                        "relative change grew from {before:.3e} to {change:.3e} at iteration {n}"
                    ));
                }
            } else {
                growth = 0;
            }
            if rel_u < opts.epsilon && rel_p < opts.epsilon {
                outcome = Outcome::Converged;
                break;
            }
            if growth >= opts.divergence_window {
                outcome = Outcome::Diverged;
                break;
            }
        }
    }
    let it = last.expect("at least one iteration runs");
    Ok(CoupledState {
        outcome,
        relaxation: opts.relaxation,
        history,
        lens: it.lens,
        chi: it.chi,
        traction: it.traction,
        u: it.u,
        surface: it.surface,
        warnings,
    })
}

/// Relative changes `(rel_u, rel_p)` produced by one more iteration from a
/// finished state.
pub fn fixed_point_residual(
    eye: &EyeModel,
    lens: &LensGeometry,
    lens_material: &LensMaterial,
    opts: &CouplingOptions,
    state: &CoupledState,
) -> Result<(f64, f64)> {
    let next = advance(eye, lens, lens_material, opts, &state.u, &state.surface)?;
    Ok((
        relative(next.u.max_difference(&state.u), next.u.max_magnitude()),
        relative(max_abs_diff(&next.lens.p, &state.lens.p), next.lens.max_abs_pressure()),
    ))
}

/// `(x - x_ref) / sup |x_ref|` pointwise.
pub fn relative_difference(values: &[f64], reference: &[f64]) -> Result<Vec<f64>> {
    if values.len() != reference.len() {
        return Err(Error::Consistency(format!(
            "profiles have different lengths ({} vs {})",
            values.len(),
            reference.len()
        )));
    }
    let norm = reference
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if norm == 0.0 {
        return Err(Error::Consistency("reference profile is identically zero".into()));
    }
    Ok(values.iter().zip(reference).map(|(v, r)| (v - r) / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{EyePreset, LensPreset, ThicknessProfile};
    use crate::mesh::{generate_mesh, MeshParams};

    fn setup(target: usize) -> (EyeModel, LensGeometry, LensMaterial) {
        let surface = OcularSurface::preset(EyePreset::Average);
        let mesh = Arc::new(generate_mesh(&surface, &MeshParams::with_target(target)).unwrap());
        let material = MaterialField::homogeneous(0.2, 0.49).unwrap();
        (
            EyeModel::new(surface, mesh, &material).unwrap(),
            LensGeometry::preset(LensPreset::Average, ThicknessProfile::constant_um(100.0)),
            LensMaterial::new(0.1, 0.49).unwrap(),
        )
    }

    #[test]
    fn chi_is_lens_radius_on_rigid_eye() {
        let (eye, lens, mat) = setup(400);
        let sol = shoot(&eye.surface, &lens, &mat, &ShootingOptions::default()).unwrap();
        let u = DisplacementField::zeros(eye.mesh().clone());
        let chi = ChiMap::build(&eye.surface, &u, &sol).unwrap();
        for (c, r) in chi.chi.iter().zip(&sol.big_r) {
            assert!((c - r).abs() < 1e-10);
        }
        assert!(chi.residual(&eye.surface, &u, &sol) < 1e-8);
        let p = transport_pressure(&sol, &chi).unwrap();
        for (c, v) in chi.chi.iter().zip(&sol.p) {
            assert!((p.eval(*c) - v).abs() < 1e-15);
        }
        assert_eq!(p.eval(chi.chi_end() + 1e-6), 0.0);
    }

    #[test]
    fn rigid_eye_reproduces_standalone_lens() {
        let (eye, lens, mat) = setup(400);
        let opts = CouplingOptions {
            rigid_eye: true,
            ..Default::default()
        };
        let state = run_coupled(&eye, &lens, &mat, &opts).unwrap();
        let alone = shoot(&eye.surface, &lens, &mat, &ShootingOptions::default()).unwrap();
        assert!(state.converged());
        assert_eq!(state.iterations(), 2);
        for (a, b) in state.lens.p.iter().zip(&alone.p) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn relative_difference_rejects_zero_reference() {
        assert!(relative_difference(&[1.0], &[0.0]).is_err());
        assert_eq!(relative_difference(&[2.0, 1.0], &[2.0, 1.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn bad_options_rejected() {
        let opts = CouplingOptions {
            epsilon: 0.0,
            ..Default::default()
        };
        assert!(matches!(opts.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn converged_state_is_a_fixed_point() {
        let (eye, lens, mat) = setup(600);
        let opts = CouplingOptions::default();
        let state = run_coupled(&eye, &lens, &mat, &opts).unwrap();
        assert!(state.converged());
        let (du, dp) = fixed_point_residual(&eye, &lens, &mat, &opts, &state).unwrap();
        assert!(du < 10.0 * opts.epsilon && dp < 10.0 * opts.epsilon, "{du:e} {dp:e}");
    }

    #[test]
    fn soft_lens_limit_is_linear() {
        // As E_lens -> 0 the eye barely moves: p and u scale with E_lens and
        // the coupled pressure approaches the rigid-eye one.
        let (eye, lens, _) = setup(600);
        let opts = CouplingOptions::default();
        let run = |e: f64| run_coupled(&eye, &lens, &LensMaterial::new(e, 0.49).unwrap(), &opts).unwrap();
        let (a, b) = (run(1e-4), run(2e-4));
        assert!((b.lens.p[0] / a.lens.p[0] - 2.0).abs() < 1e-3);
        assert!((b.u.max_magnitude() / a.u.max_magnitude() - 2.0).abs() < 1e-3);
        let rigid = shoot(
            &eye.surface,
            &lens,
            &LensMaterial::new(1e-4, 0.49).unwrap(),
            &ShootingOptions::default(),
        )
        .unwrap();
        let gap = a
            .lens
            .p
            .iter()
            .zip(&rigid.p)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(gap < 1e-3 * rigid.max_abs_pressure());
    }
}
