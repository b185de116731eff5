//! Post-processing of coupled runs and cross-run comparisons.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coupling::{relative_difference, CoupledState, EyeModel};
use crate::error::{Error, Result};
use crate::fem::{recover_stresses, traction_component, von_mises, StressField, SurfaceSample};
use crate::geometry::{LIMBUS_END, LIMBUS_START};
use crate::mesh::PointLocator;
use crate::output::{self, read_table, Table, P_MPA, R_CM, S_EFF_MPA, U_NORM_UM, U_N_UM};
use crate::UM_PER_CM;

/// Depth of the tissue strip below Γ_out over which stresses are averaged.
pub const STRIP_DEPTH: f64 = 0.02;
pub const STRIP_SAMPLES: usize = 11;
/// Surface samples on `[0, R_eye]`.
pub const PROFILE_SAMPLES: usize = 801;
/// Half-width of the window around the lens footprint edge searched for the
/// local compression.
pub const EDGE_WINDOW: f64 = 0.05;

/// Strip-averaged stresses below one surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripRecord {
    pub r: f64,
    pub s_eff: f64,
    /// In-plane tangential normal stress `t . S . t`.
    pub s_t: f64,
}

/// Scalar summary of a run. Displacements in µm, pressures and stresses in MPa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub iterations: usize,
    pub converged: bool,
    pub relaxation: f64,
    pub sigma: f64,
    /// Largest inward normal surface displacement, reported positive.
    pub max_inward_un_um: f64,
    pub max_inward_un_r_cm: f64,
    pub max_abs_un_um: f64,
    pub max_norm_um: f64,
    /// Largest outward normal displacement over the limbus.
    pub limbal_bulge_um: f64,
    pub limbal_bulge_r_cm: f64,
    /// Local inward normal displacement near the lens footprint edge.
    pub edge_compression_um: f64,
    pub edge_compression_r_cm: f64,
    pub chi_end_cm: f64,
    pub p_center_mpa: f64,
    pub p_min_mpa: f64,
    pub p_min_r_cm: f64,
    pub p_edge_mpa: f64,
    pub p_max_abs_mpa: f64,
    /// `∫ p r dr` over the lens.
    pub net_load: f64,
    /// Largest gap between the two suction pressure formulas over `max |p|`.
    pub pressure_form_gap: f64,
    pub peak_stress_mpa: f64,
    pub peak_von_mises_mpa: f64,
    pub peak_strip_s_eff_mpa: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub label: String,
    pub state: CoupledState,
    pub stress: StressField,
    pub profile: Vec<SurfaceSample>,
    pub strip: Vec<StripRecord>,
    pub metrics: RunMetrics,
}

fn extreme<F: Fn(&SurfaceSample) -> bool>(profile: &[SurfaceSample], keep: F, sign: f64) -> (f64, f64) {
    profile
        .iter()
        .filter(|s| keep(s))
        .map(|s| (sign * s.u_n, s.r))
        .fold((f64::NEG_INFINITY, f64::NAN), |a, b| if b.0 > a.0 { b } else { a })
}

/// Stresses, surface profile, strip averages and metrics of a coupled state.
pub fn postprocess(eye: &EyeModel, state: CoupledState, label: impl Into<String>) -> Result<RunResult> {
    let surface = &eye.surface;
    let stress = recover_stresses(&state.u, eye.material())?;
    let profile = state.u.surface_profile(surface, PROFILE_SAMPLES);

    let locator = PointLocator::new(eye.mesh());
    let r_eye = surface.r_eye();
    let radii: Vec<f64> = profile.iter().map(|s| s.r.min(r_eye * (1.0 - 1e-9))).collect();
    let eff = stress.strip_average(surface, &locator, &radii, STRIP_DEPTH, STRIP_SAMPLES, |s, _, _| {
        von_mises(s)
    });
    let tan = stress.strip_average(surface, &locator, &radii, STRIP_DEPTH, STRIP_SAMPLES, |s, t, _| {
        traction_component(s, t, t)
    });
    let strip: Vec<StripRecord> = eff
        .iter()
        .zip(&tan)
        .zip(&profile)
        .map(|((e, t), p)| StripRecord {
            r: p.r,
            s_eff: e.mean,
            s_t: t.mean,
        })
        .collect();

    let chi_end = state.chi.chi_end();
    let (inward, inward_r) = extreme(&profile, |_| true, -1.0);
    let (bulge, bulge_r) = extreme(&profile, |s| (LIMBUS_START..=LIMBUS_END).contains(&s.r), 1.0);
    let (edge, edge_r) = extreme(&profile, |s| (s.r - chi_end).abs() <= EDGE_WINDOW, -1.0);
    let lens = &state.lens;
    let (p_min_i, p_min) = lens
        .p
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |a, (i, v)| if v < a.1 { (i, v) } else { a });
    let p_max_abs = lens.max_abs_pressure();
    let last = state.history.last().copied();
    let metrics = RunMetrics {
        iterations: state.iterations(),
        converged: state.converged(),
        relaxation: state.relaxation,
        sigma: last.map_or(f64::NAN, |h| h.sigma),
        max_inward_un_um: inward * UM_PER_CM,
        max_inward_un_r_cm: inward_r,
        max_abs_un_um: profile.iter().map(|s| s.u_n.abs()).fold(0.0, f64::max) * UM_PER_CM,
        max_norm_um: profile.iter().map(|s| s.norm).fold(0.0, f64::max) * UM_PER_CM,
        limbal_bulge_um: bulge * UM_PER_CM,
        limbal_bulge_r_cm: bulge_r,
        edge_compression_um: edge * UM_PER_CM,
        edge_compression_r_cm: edge_r,
        chi_end_cm: chi_end,
        p_center_mpa: lens.p[0],
        p_min_mpa: p_min,
        p_min_r_cm: lens.r[p_min_i],
        p_edge_mpa: *lens.p.last().unwrap(),
        p_max_abs_mpa: p_max_abs,
        net_load: lens.net_load(),
        pressure_form_gap: lens.formula_discrepancy(),
        peak_stress_mpa: stress.max_abs_component(),
        peak_von_mises_mpa: stress.von_mises_vertices().into_iter().fold(0.0, f64::max),
        peak_strip_s_eff_mpa: strip
            .iter()
            .map(|s| s.s_eff)
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max),
    };
    Ok(RunResult {
        label: label.into(),
        state,
        stress,
        profile,
        strip,
        metrics,
    })
}

pub const STRIP_FILE: &str = "strip.csv";
pub const LENS_FILE: &str = "lens.csv";
pub const SURFACE_FILE: &str = "surface.csv";

pub fn write_strip(path: &Path, strip: &[StripRecord]) -> Result<()> {
    output::write_table(
        path,
        &[R_CM, S_EFF_MPA, "S_t [MPa]"],
        strip
            .iter()
            .map(|s| vec![output::fmt(s.r), output::fmt(s.s_eff), output::fmt(s.s_t)]),
    )
}

/// The profiles needed to compare runs, from memory or from a run directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunDigest {
    /// Identifies eye, lens and thickness; comparisons require a match.
    pub geometry: String,
    pub lens_r: Vec<f64>,
    pub p: Vec<f64>,
    pub surface_r: Vec<f64>,
    pub u_n_um: Vec<f64>,
    pub u_norm_um: Vec<f64>,
    pub strip_r: Vec<f64>,
    pub s_eff: Vec<f64>,
    pub peak_stress_mpa: f64,
    pub peak_von_mises_mpa: f64,
}

impl RunResult {
    pub fn digest(&self, geometry: impl Into<String>) -> RunDigest {
        RunDigest {
            geometry: geometry.into(),
            lens_r: self.state.lens.r.clone(),
            p: self.state.lens.p.clone(),
            surface_r: self.profile.iter().map(|s| s.r).collect(),
            u_n_um: self.profile.iter().map(|s| s.u_n * UM_PER_CM).collect(),
            u_norm_um: self.profile.iter().map(|s| s.norm * UM_PER_CM).collect(),
            strip_r: self.strip.iter().map(|s| s.r).collect(),
            s_eff: self.strip.iter().map(|s| s.s_eff).collect(),
            peak_stress_mpa: self.metrics.peak_stress_mpa,
            peak_von_mises_mpa: self.metrics.peak_von_mises_mpa,
        }
    }
}

impl RunDigest {
    /// Reads the CSV files written for a run; the peaks come from `metrics`.
    pub fn load(dir: &Path, geometry: impl Into<String>, metrics: &RunMetrics) -> Result<Self> {
        let lens: Table = read_table(&dir.join(LENS_FILE))?;
        let surface = read_table(&dir.join(SURFACE_FILE))?;
        let strip = read_table(&dir.join(STRIP_FILE))?;
        Ok(Self {
            geometry: geometry.into(),
            lens_r: lens.column(R_CM)?,
            p: lens.column(P_MPA)?,
            surface_r: surface.column(R_CM)?,
            u_n_um: surface.column(U_N_UM)?,
            u_norm_um: surface.column(U_NORM_UM)?,
            strip_r: strip.column(R_CM)?,
            s_eff: strip.column(S_EFF_MPA)?,
            peak_stress_mpa: metrics.peak_stress_mpa,
            peak_von_mises_mpa: metrics.peak_von_mises_mpa,
        })
    }

    fn check_compatible(&self, other: &RunDigest) -> Result<()> {
        let same_grid =
            |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12);
        if self.geometry != other.geometry
            || !same_grid(&self.lens_r, &other.lens_r)
            || !same_grid(&self.surface_r, &other.surface_r)
            || !same_grid(&self.strip_r, &other.strip_r)
        {
            return Err(Error::Config(format!(
                "runs do not share geometry: '{}' vs '{}'",
                self.geometry, other.geometry
            )));
        }
        Ok(())
    }
}

/// Relative differences against a reference run, normalised by the
/// reference's sup norm.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeProfiles {
    pub lens_r: Vec<f64>,
    pub rel_p: Vec<f64>,
    pub strip_r: Vec<f64>,
    pub rel_s_eff: Vec<f64>,
}

impl RelativeProfiles {
    /// `(value, r)` of the largest entry of `rel_p`.
    pub fn max_rel_p(&self) -> (f64, f64) {
        arg_extreme(&self.rel_p, &self.lens_r, 1.0)
    }

    /// `(value, r)` of the smallest entry of `rel_p`.
    pub fn min_rel_p(&self) -> (f64, f64) {
        let (v, r) = arg_extreme(&self.rel_p, &self.lens_r, -1.0);
        (-v, r)
    }
}

fn arg_extreme(v: &[f64], r: &[f64], sign: f64) -> (f64, f64) {
    v.iter()
        .zip(r)
        .map(|(&x, &r)| (sign * x, r))
        .fold((f64::NEG_INFINITY, f64::NAN), |a, b| if b.0 > a.0 { b } else { a })
}

pub fn relative_profiles(run: &RunDigest, reference: &RunDigest) -> Result<RelativeProfiles> {
    run.check_compatible(reference)?;
    let rel_p = relative_difference(&run.p, &reference.p)?;
    // Strip points whose segment left the domain carry NaN; they are skipped
    // in the norm and propagate as NaN.
    let norm = reference
        .s_eff
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0, |a: f64, v| a.max(v.abs()));
    if !(norm > 0.0) {
        return Err(Error::Consistency("reference effective stress is zero".into()));
    }
    let rel_s_eff = run
        .s_eff
        .iter()
        .zip(&reference.s_eff)
        .map(|(a, b)| (a - b) / norm)
        .collect();
    Ok(RelativeProfiles {
        lens_r: run.lens_r.clone(),
        rel_p,
        strip_r: run.strip_r.clone(),
        rel_s_eff,
    })
}

/// Homogeneous versus heterogeneous eye under the same lens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialComparison {
    /// Peak surface `|u|`, second over first.
    pub u_peak_ratio: f64,
    /// Peak absolute stress component over Ω.
    pub stress_ratio: f64,
    pub von_mises_ratio: f64,
    /// `max |p_2 - p_1| / max |p_1|`.
    pub max_rel_p_diff: f64,
    /// `(p_2(0) - p_1(0)) / p_1(0)`.
    pub rel_p_diff_center: f64,
}

pub fn compare_runs(first: &RunDigest, second: &RunDigest) -> Result<MaterialComparison> {
    first.check_compatible(second)?;
    let peak = |v: &[f64]| v.iter().fold(0.0, |a: f64, x| a.max(x.abs()));
    let ratio = |a: f64, b: f64| {
        if a > 0.0 {
            Ok(b / a)
        } else if b == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::Consistency("peak of the first run is zero".into()))
        }
    };
    let rel = relative_difference(&second.p, &first.p)?;
    Ok(MaterialComparison {
        u_peak_ratio: ratio(peak(&first.u_norm_um), peak(&second.u_norm_um))?,
        stress_ratio: ratio(first.peak_stress_mpa, second.peak_stress_mpa)?,
        von_mises_ratio: ratio(first.peak_von_mises_mpa, second.peak_von_mises_mpa)?,
        max_rel_p_diff: peak(&rel),
        rel_p_diff_center: if first.p[0] != 0.0 {
            (second.p[0] - first.p[0]) / first.p[0]
        } else {
            0.0
        },
    })
}

/// Largest pointwise difference of surface `|u|` between two runs, µm.
pub fn surface_norm_difference(a: &RunDigest, b: &RunDigest) -> Result<f64> {
    a.check_compatible(b)?;
    Ok(a.u_norm_um
        .iter()
        .zip(&b.u_norm_um)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublingRow {
    pub e_from: f64,
    pub e_to: f64,
    pub u_from_um: f64,
    pub u_to_um: f64,
    pub factor: f64,
}

/// Displacement growth over every exact doubling of the stiffness ratio in
/// `points` = `(E, max |u_n|)`.
pub fn doubling_factors(points: &[(f64, f64)]) -> Vec<DoublingRow> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rows = Vec::new();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if (b.0 / a.0 - 2.0).abs() < 1e-9 {
                rows.push(DoublingRow {
                    e_from: a.0,
                    e_to: b.0,
                    u_from_um: a.1,
                    u_to_um: b.1,
                    factor: b.1 / a.1,
                });
            }
        }
    }
    rows
}
