//! Scenario and sweep descriptions read from TOML.
//!
//! Keys carry their unit in the name (`tau_um`, `E_lens_MPa`); lengths inside
//! the library are cm. Every section and key is optional and falls back to the
//! baseline scenario: average eye and lens, 100 µm lens, E_eye = 0.2 MPa,
//! E_lens = 0.1 MPa, Poisson ratio 0.49 for both.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coupling::CouplingOptions;
use crate::error::{Error, Result};
use crate::geometry::{
    EyePreset, LayeredModulusParams, LensGeometry, LensPreset, MaterialField, OcularSurface, ThicknessProfile,
};
use crate::lens_shell::{LensMaterial, ShootingOptions, DEFAULT_LENS_STEP};
use crate::mesh::MeshParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialKind {
    Homogeneous,
    /// Layered modulus: stiff outer tissue over a nearly fluid centre.
    Heterogeneous,
}

impl MaterialKind {
    pub fn name(self) -> &'static str {
        match self {
            MaterialKind::Homogeneous => "homogeneous",
            MaterialKind::Heterogeneous => "heterogeneous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThicknessKind {
    Constant,
    /// Thin centre with a thick ridge near the edge; `tau_um` is ignored.
    Varying,
}

impl ThicknessKind {
    pub fn name(self) -> &'static str {
        match self {
            ThicknessKind::Constant => "constant",
            ThicknessKind::Varying => "varying",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EyeConfig {
    pub preset: String,
    pub material: MaterialKind,
    /// Homogeneous modulus, or the corneal modulus of the layered field
    /// (sclera five times stiffer).
    #[serde(rename = "E_eye_MPa")]
    pub e_eye_mpa: f64,
    pub poisson: f64,
}

impl Default for EyeConfig {
    fn default() -> Self {
        Self {
            preset: EyePreset::Average.name().into(),
            material: MaterialKind::Homogeneous,
            e_eye_mpa: 0.2,
            poisson: 0.49,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LensConfig {
    pub preset: String,
    pub thickness: ThicknessKind,
    pub tau_um: f64,
    #[serde(rename = "E_lens_MPa")]
    pub e_lens_mpa: f64,
    pub poisson: f64,
}

impl Default for LensConfig {
    fn default() -> Self {
        Self {
            preset: LensPreset::Average.name().into(),
            thickness: ThicknessKind::Constant,
            tau_um: 100.0,
            e_lens_mpa: 0.1,
            poisson: 0.49,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub target_vertices: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            target_vertices: MeshParams::default().target_vertices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub max_iters: usize,
    pub relaxation: f64,
    /// Smallest relaxation tried after a divergence; 0 disables the retry.
    pub min_relaxation: f64,
    pub surface_knots: usize,
    pub lens_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let c = CouplingOptions::default();
        Self {
            epsilon: c.epsilon,
            max_iters: c.max_iters,
            relaxation: c.relaxation,
            min_relaxation: c.min_relaxation.unwrap_or(0.0),
            surface_knots: c.surface_knots,
            lens_step: DEFAULT_LENS_STEP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub name: String,
    pub eye: EyeConfig,
    pub lens: LensConfig,
    pub mesh: MeshConfig,
    pub solver: SolverConfig,
}

/// Command-line overrides applied on top of a file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub mesh_vertices: Option<usize>,
    pub epsilon: Option<f64>,
    pub max_iters: Option<usize>,
}

/// A config with every preset looked up and every object built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub eye_preset: EyePreset,
    pub lens_preset: LensPreset,
    pub surface: OcularSurface,
    pub material: MaterialField,
    pub lens: LensGeometry,
    pub lens_material: LensMaterial,
    pub mesh: MeshParams,
    pub coupling: CouplingOptions,
}

/// 1-based line of `key = ...` inside table `section` ("" for the root).
fn line_of(source: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
        } else if current == section
            && line
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        {
            return Some(i + 1);
        }
    }
    None
}

/// Prefixes a `path: message` config error with the line of `path`.
fn with_line(err: Error, source: &str) -> Error {
    match err {
        Error::Config(msg) => {
            let line = msg.split_once(": ").and_then(|(path, _)| {
                let (section, key) = path.rsplit_once('.').unwrap_or(("", path));
                line_of(source, section, key)
            });
            match line {
                Some(line) => Error::Config(format!("line {line}: {msg}")),
                None => Error::Config(msg),
            }
        }
        other => other,
    }
}

fn parse_toml<T: serde::de::DeserializeOwned>(source: &str, what: &str) -> Result<T> {
    toml::from_str(source).map_err(|e| Error::Config(format!("invalid {what}: {e}")))
}

fn read_source(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn require(ok: bool, path: &str, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("{path}: {}", msg())))
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(source: &str) -> Result<Self> {
        let config: Self = parse_toml(source, "scenario")?;
        config.validate().map_err(|e| with_line(e, source))?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&read_source(path)?)
    }

    /// The config with all defaults filled in.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serialises")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.mesh_vertices {
            self.mesh.target_vertices = n;
        }
        if let Some(e) = o.epsilon {
            self.solver.epsilon = e;
        }
        if let Some(n) = o.max_iters {
            self.solver.max_iters = n;
        }
    }

    /// `E_lens / E_eye`.
    pub fn e_ratio(&self) -> f64 {
        self.lens.e_lens_mpa / self.eye.e_eye_mpa
    }

    /// Label used for output directories.
    pub fn label(&self) -> String {
        if !self.name.is_empty() {
            return self.name.clone();
        }
        format!(
            "{}-{}-{}-{}-E{}",
            self.eye.preset,
            self.eye.material.name(),
            self.lens.preset,
            self.lens.thickness.name(),
            self.e_ratio()
        )
    }

    /// Checks every field. Messages start with the dotted key path so that
    /// file-level callers can attach a line number.
    pub fn validate(&self) -> Result<()> {
        self.resolve().map(|_| ())
    }

    pub fn resolve(&self) -> Result<Scenario> {
        let eye_preset = EyePreset::from_name(&self.eye.preset).ok_or_else(|| {
            let known: Vec<_> = EyePreset::ALL.iter().map(|p| p.name()).collect();
            Error::Config(format!(
                "eye.preset: unknown eye preset '{}' (expected one of {})",
                self.eye.preset,
                known.join(", ")
            ))
        })?;
        let lens_preset = LensPreset::from_name(&self.lens.preset).ok_or_else(|| {
            let known: Vec<_> = LensPreset::ALL.iter().map(|p| p.name()).collect();
            Error::Config(format!(
                "lens.preset: unknown lens preset '{}' (expected one of {})",
                self.lens.preset,
                known.join(", ")
            ))
        })?;
        let s = &self.solver;
        require(s.epsilon > 0.0, "solver.epsilon", || {
            format!("epsilon must be positive, got {}", s.epsilon)
        })?;
        require((1..=100).contains(&s.max_iters), "solver.max_iters", || {
            format!("max_iters must lie in 1..=100, got {}", s.max_iters)
        })?;
        require(s.relaxation > 0.0 && s.relaxation <= 1.0, "solver.relaxation", || {
            format!("relaxation must lie in (0, 1], got {}", s.relaxation)
        })?;
        require(
            s.min_relaxation >= 0.0 && s.min_relaxation <= s.relaxation,
            "solver.min_relaxation",
            || format!("min_relaxation must lie in [0, relaxation], got {}", s.min_relaxation),
        )?;
        require(s.surface_knots >= 8, "solver.surface_knots", || {
            format!("surface_knots must be at least 8, got {}", s.surface_knots)
        })?;
        require(s.lens_step > 0.0 && s.lens_step <= 0.05, "solver.lens_step", || {
            format!("lens_step must lie in (0, 0.05] cm, got {}", s.lens_step)
        })?;
        require(self.eye.e_eye_mpa > 0.0, "eye.E_eye_MPa", || {
            format!("E_eye_MPa must be positive, got {}", self.eye.e_eye_mpa)
        })?;
        require(self.lens.e_lens_mpa > 0.0, "lens.E_lens_MPa", || {
            format!("E_lens_MPa must be positive, got {}", self.lens.e_lens_mpa)
        })?;
        require(self.lens.tau_um > 0.0, "lens.tau_um", || {
            format!("tau_um must be positive, got {}", self.lens.tau_um)
        })?;
        for (path, v) in [("eye.poisson", self.eye.poisson), ("lens.poisson", self.lens.poisson)] {
            require(v > 0.0 && v < 0.5, path, || {
                format!("Poisson ratio must lie in (0, 0.5), got {v}")
            })?;
        }

        let surface = OcularSurface::preset(eye_preset);
        let material = match self.eye.material {
            MaterialKind::Homogeneous => MaterialField::homogeneous(self.eye.e_eye_mpa, self.eye.poisson)?,
            MaterialKind::Heterogeneous => {
                let mut params = LayeredModulusParams::standard(surface.r_eye());
                params.e_cornea = self.eye.e_eye_mpa;
                params.e_sclera = 5.0 * self.eye.e_eye_mpa;
                MaterialField::layered(&surface, params, self.eye.poisson)?
            }
        };
        let thickness = match self.lens.thickness {
            ThicknessKind::Constant => ThicknessProfile::constant_um(self.lens.tau_um),
            ThicknessKind::Varying => ThicknessProfile::varying_default(),
        };
        let lens = LensGeometry::preset(lens_preset, thickness);
        let lens_material = LensMaterial::new(self.lens.e_lens_mpa, self.lens.poisson)?;
        let mesh = MeshParams::with_target(self.mesh.target_vertices);
        let coupling = CouplingOptions {
            epsilon: s.epsilon,
            max_iters: s.max_iters,
            relaxation: s.relaxation,
            surface_knots: s.surface_knots,
            min_relaxation: (s.min_relaxation > 0.0).then_some(s.min_relaxation),
            shooting: ShootingOptions {
                step: s.lens_step,
                ..ShootingOptions::default()
            },
            ..CouplingOptions::default()
        };
        coupling.validate()?;
        Ok(Scenario {
            config: self.clone(),
            eye_preset,
            lens_preset,
            surface,
            material,
            lens,
            lens_material,
            mesh,
            coupling,
        })
    }
}

/// Values swept in a batch; an absent axis keeps the base value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepAxes {
    /// `E_lens / E_eye`; E_eye stays at the base value.
    #[serde(rename = "E_ratio", skip_serializing_if = "Option::is_none")]
    pub e_ratio: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eye: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lens: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thickness: Option<Vec<ThicknessKind>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub material: Option<Vec<MaterialKind>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub axes: SweepAxes,
    /// Cross product of all axes; otherwise each axis is varied alone
    /// around the base.
    pub cross: bool,
    pub max_runs: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            base: ScenarioConfig::default(),
            axes: SweepAxes::default(),
            cross: true,
            max_runs: 64,
        }
    }
}

/// Stiffness ratios explored for the homogeneous eye.
pub const STIFFNESS_RATIOS: [f64; 8] = [0.5, 1.0, 2.0, 4.0, 8.0, 10.0, 25.0, 50.0];

impl SweepSpec {
    pub fn from_toml_str(source: &str) -> Result<Self> {
        let spec: Self = parse_toml(source, "sweep spec")?;
        spec.runs().map_err(|e| with_line(e, source))?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&read_source(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep spec serialises")
    }

    /// Baseline scenario over the eight stiffness ratios.
    pub fn stiffness() -> Self {
        Self {
            axes: SweepAxes {
                e_ratio: Some(STIFFNESS_RATIOS.to_vec()),
                ..SweepAxes::default()
            },
            ..Self::default()
        }
    }

    /// Four eyes by three lenses at the baseline stiffness.
    pub fn shape_grid() -> Self {
        Self {
            axes: SweepAxes {
                eye: Some(EyePreset::ALL.iter().map(|p| p.name().to_string()).collect()),
                lens: Some(LensPreset::ALL.iter().map(|p| p.name().to_string()).collect()),
                ..SweepAxes::default()
            },
            ..Self::default()
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        self.base.apply(o);
    }

    /// Expands the axes into validated scenario configs with unique names.
    pub fn runs(&self) -> Result<Vec<ScenarioConfig>> {
        type Setter = Box<dyn Fn(&mut ScenarioConfig)>;
        let mut axes: Vec<(&str, Vec<(String, Setter)>)> = Vec::new();
        let a = &self.axes;
        if let Some(v) = &a.e_ratio {
            let e_eye = self.base.eye.e_eye_mpa;
            axes.push((
                "E_ratio",
                v.iter()
                    .map(|&e| {
                        (
                            format!("E{e}"),
                            Box::new(move |c: &mut ScenarioConfig| c.lens.e_lens_mpa = e * e_eye) as Setter,
                        )
                    })
                    .collect(),
            ));
        }
        if let Some(v) = &a.eye {
            axes.push((
                "eye",
                v.iter()
                    .map(|name| {
                        let n = name.clone();
                        (
                            format!("eye-{name}"),
                            Box::new(move |c: &mut ScenarioConfig| c.eye.preset = n.clone()) as Setter,
                        )
                    })
                    .collect(),
            ));
        }
        if let Some(v) = &a.lens {
            axes.push((
                "lens",
                v.iter()
                    .map(|name| {
                        let n = name.clone();
                        (
                            format!("lens-{name}"),
                            Box::new(move |c: &mut ScenarioConfig| c.lens.preset = n.clone()) as Setter,
                        )
                    })
                    .collect(),
            ));
        }
        if let Some(v) = &a.thickness {
            axes.push((
                "thickness",
                v.iter()
                    .map(|&k| {
                        (
                            k.name().to_string(),
                            Box::new(move |c: &mut ScenarioConfig| c.lens.thickness = k) as Setter,
                        )
                    })
                    .collect(),
            ));
        }
        if let Some(v) = &a.material {
            axes.push((
                "material",
                v.iter()
                    .map(|&k| {
                        (
                            k.name().to_string(),
                            Box::new(move |c: &mut ScenarioConfig| c.eye.material = k) as Setter,
                        )
                    })
                    .collect(),
            ));
        }
        if axes.is_empty() {
            return Err(Error::Config("axes: a sweep needs at least one axis".into()));
        }
        if let Some((name, _)) = axes.iter().find(|(_, v)| v.is_empty()) {
            return Err(Error::Config(format!("axes.{name}: {name} axis is empty")));
        }

        let count = if self.cross {
            axes.iter().map(|(_, v)| v.len()).product()
        } else {
            axes.iter().map(|(_, v)| v.len()).sum()
        };
        require(count <= self.max_runs, "max_runs", || {
            format!("cap is {} but the sweep expands to {count} runs", self.max_runs)
        })?;

        let prefix = if self.base.name.is_empty() {
            String::new()
        } else {
            format!("{}_", self.base.name)
        };
        let mut out = Vec::with_capacity(count);
        if self.cross {
            let mut idx = vec![0usize; axes.len()];
            'outer: loop {
                let mut c = self.base.clone();
                let mut label = prefix.clone();
                for (k, (_, values)) in axes.iter().enumerate() {
                    let (tag, set) = &values[idx[k]];
                    set(&mut c);
                    if k > 0 {
                        label.push('_');
                    }
                    label.push_str(tag);
                }
                c.name = label;
                out.push(c);
                for k in (0..axes.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < axes[k].1.len() {
                        continue 'outer;
                    }
                    idx[k] = 0;
                }
                break;
            }
        } else {
            for (_, values) in &axes {
                for (tag, set) in values {
                    let mut c = self.base.clone();
                    set(&mut c);
                    c.name = format!("{prefix}{tag}");
                    out.push(c);
                }
            }
        }

        let mut seen = std::collections::HashSet::new();
        for c in &out {
            if !seen.insert(c.name.clone()) {
                return Err(Error::Config(format!("axes: duplicate run '{}'", c.name)));
            }
            c.validate().map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("run '{}': {msg}", c.name)),
                other => other,
            })?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_baseline() {
        let c = ScenarioConfig::from_toml_str("").unwrap();
        assert_eq!(c, ScenarioConfig::default());
        assert_eq!(c.solver.epsilon, 1e-6);
        assert_eq!(c.solver.max_iters, 100);
        assert!((c.e_ratio() - 0.5).abs() < 1e-15);
        let echoed = c.to_toml();
        assert!(echoed.contains("epsilon = 0.000001"), "{echoed}");
        assert!(echoed.contains("E_lens_MPa = 0.1"));
        assert_eq!(ScenarioConfig::from_toml_str(&echoed).unwrap(), c);
    }

    #[test]
    fn unknown_preset_is_named() {
        let err = ScenarioConfig::from_toml_str("[eye]\npreset = \"round\"\n").unwrap_err();
        let msg = err.to_string();
        assert_eq!(err.exit_code(), 2);
        assert!(msg.contains("'round'") && msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn bad_values_report_line() {
        let err = ScenarioConfig::from_toml_str("name = \"x\"\n\n[solver]\nepsilon = -1.0\n").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
        let err = ScenarioConfig::from_toml_str("[lens]\ntau_mm = 0.1\n").unwrap_err();
        assert!(
            err.to_string().contains("tau_mm") && err.to_string().contains("line 2"),
            "{err}"
        );
    }

    #[test]
    fn overrides_apply() {
        let mut c = ScenarioConfig::default();
        c.apply(&Overrides {
            mesh_vertices: Some(1200),
            epsilon: Some(1e-8),
            max_iters: None,
        });
        let s = c.resolve().unwrap();
        assert_eq!(s.mesh.target_vertices, 1200);
        assert_eq!(s.coupling.epsilon, 1e-8);
        assert_eq!(s.coupling.max_iters, 100);
    }

    #[test]
    fn heterogeneous_uses_corneal_modulus() {
        let mut c = ScenarioConfig::default();
        c.eye.material = MaterialKind::Heterogeneous;
        let s = c.resolve().unwrap();
        assert!(!s.material.is_homogeneous());
        let apex = s.surface.h_unchecked(0.0);
        let e = s.material.youngs_modulus(0.0, apex - 1e-4).unwrap();
        assert!((e - 0.2).abs() < 1e-12, "{e}");
    }

    #[test]
    fn stiffness_sweep_expands() {
        let runs = SweepSpec::stiffness().runs().unwrap();
        let e: Vec<f64> = runs.iter().map(|c| c.lens.e_lens_mpa).collect();
        let expected = [0.1, 0.2, 0.4, 0.8, 1.6, 2.0, 5.0, 10.0];
        assert_eq!(e.len(), 8);
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_grid_is_twelve_runs() {
        let runs = SweepSpec::shape_grid().runs().unwrap();
        assert_eq!(runs.len(), 12);
        assert_eq!(runs[0].name, "eye-flat_cornea_lens-flat");
    }

    #[test]
    fn one_at_a_time_sums_axes() {
        let mut spec = SweepSpec::shape_grid();
        spec.cross = false;
        assert_eq!(spec.runs().unwrap().len(), 7);
    }

    #[test]
    fn empty_axis_rejected() {
        let err = SweepSpec::from_toml_str("[axes]\nE_ratio = []\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("E_ratio axis is empty"), "{err}");
        let err = SweepSpec::from_toml_str("").unwrap_err();
        assert!(err.to_string().contains("at least one axis"));
    }

    #[test]
    fn run_cap_enforced() {
        let src =
            "max_runs = 4\n[axes]\neye = [\"average\", \"flat_cornea\"]\nlens = [\"flat\", \"average\", \"steep\"]\n";
        let err = SweepSpec::from_toml_str(src).unwrap_err();
        assert!(err.to_string().contains("6 runs"), "{err}");
    }

    #[test]
    fn sweep_toml_round_trip() {
        let src = "[base.lens]\ntau_um = 80.0\n[axes]\nE_ratio = [0.5, 1.0]\nthickness = [\"constant\", \"varying\"]\n";
        let spec = SweepSpec::from_toml_str(src).unwrap();
        let runs = spec.runs().unwrap();
        assert_eq!(runs.len(), 4);
        assert!(runs.iter().all(|c| c.lens.tau_um == 80.0));
        assert_eq!(SweepSpec::from_toml_str(&spec.to_toml()).unwrap(), spec);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn toml_round_trip(
                e_eye in 0.01f64..10.0,
                ratio in 0.1f64..60.0,
                tau in 20.0f64..300.0,
                n in 200usize..20000,
                eps in 1e-9f64..1e-3,
                hetero in any::<bool>(),
            ) {
                let mut c = ScenarioConfig::default();
                c.eye.e_eye_mpa = e_eye;
                c.lens.e_lens_mpa = ratio * e_eye;
                c.lens.tau_um = tau;
                c.mesh.target_vertices = n;
                c.solver.epsilon = eps;
                if hetero {
                    c.eye.material = MaterialKind::Heterogeneous;
                }
                let back = ScenarioConfig::from_toml_str(&c.to_toml()).unwrap();
                prop_assert_eq!(&back, &c);
                prop_assert_eq!(back.label(), c.label());
            }
        }
    }
}
