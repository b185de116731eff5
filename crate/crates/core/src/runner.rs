//! Runs and sweeps with their files on disk.
//!
//! A run directory holds CSV tables, SVG plots and `manifest.toml`. The
//! manifest is written last and lists every other file, so its presence marks
//! a complete directory.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{MaterialKind, Scenario, ScenarioConfig, SweepSpec};
use crate::coupling::{run_coupled, CoupledState, EyeModel, Outcome};
use crate::error::{Error, Result};
use crate::mesh::generate_mesh;
use crate::output::{self, FieldPlot, LinePlot};
use crate::study::{
    self, compare_runs, doubling_factors, postprocess, relative_profiles, MaterialComparison, RunDigest, RunMetrics,
    RunResult, LENS_FILE, STRIP_FILE, SURFACE_FILE,
};
use crate::UM_PER_CM;

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const SWEEP_MANIFEST_FILE: &str = "sweep_manifest.toml";

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub mesh_s: f64,
    pub assembly_s: f64,
    pub coupling_s: f64,
    pub post_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSummary {
    pub outcome: String,
    pub iterations: usize,
    pub relaxation: f64,
    pub final_rel_u: f64,
    pub final_rel_p: f64,
    pub warnings: Vec<String>,
}

impl ConvergenceSummary {
    fn of(state: &CoupledState) -> Self {
        let last = state.history.last();
        Self {
            outcome: state.outcome.name().to_string(),
            iterations: state.iterations(),
            relaxation: state.relaxation,
            final_rel_u: last.map_or(f64::NAN, |h| h.rel_u),
            final_rel_p: last.map_or(f64::NAN, |h| h.rel_p),
            warnings: state.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: String,
    pub label: String,
    pub geometry: String,
    pub mesh_vertices: usize,
    pub mesh_triangles: usize,
    pub outputs: Vec<String>,
    pub config: ScenarioConfig,
    pub timings: Timings,
    pub convergence: ConvergenceSummary,
    pub metrics: RunMetrics,
}

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Comparison profiles of the run stored in `dir`.
    pub fn digest(&self, dir: &Path) -> Result<RunDigest> {
        RunDigest::load(dir, self.geometry.clone(), &self.metrics)
    }
}

pub fn software() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

/// Key shared by runs on the same eye surface and lens shape.
pub fn geometry_key(config: &ScenarioConfig) -> String {
    format!(
        "eye={} lens={} thickness={} tau_um={}",
        config.eye.preset,
        config.lens.preset,
        config.lens.thickness.name(),
        config.lens.tau_um
    )
}

/// Meshes the eye and factorises its stiffness matrix.
pub fn build_eye(scenario: &Scenario) -> Result<(EyeModel, Timings)> {
    let t0 = Instant::now();
    let mesh = Arc::new(generate_mesh(&scenario.surface, &scenario.mesh)?);
    let t1 = Instant::now();
    let eye = EyeModel::new(scenario.surface.clone(), mesh, &scenario.material)?;
    let timings = Timings {
        mesh_s: (t1 - t0).as_secs_f64(),
        assembly_s: t1.elapsed().as_secs_f64(),
        ..Timings::default()
    };
    Ok((eye, timings))
}

/// Coupled solve plus post-processing on a prepared eye.
pub fn simulate(scenario: &Scenario, eye: &EyeModel, timings: &mut Timings) -> Result<RunResult> {
    let t0 = Instant::now();
    let state = run_coupled(eye, &scenario.lens, &scenario.lens_material, &scenario.coupling)?;
    let t1 = Instant::now();
    let result = postprocess(eye, state, scenario.config.label())?;
    timings.coupling_s = (t1 - t0).as_secs_f64();
    timings.post_s = t1.elapsed().as_secs_f64();
    Ok(result)
}

/// Resolves, meshes and solves one scenario in memory.
pub fn run_in_memory(config: &ScenarioConfig) -> Result<(Scenario, EyeModel, RunResult)> {
    let scenario = config.resolve()?;
    let (eye, mut timings) = build_eye(&scenario)?;
    let result = simulate(&scenario, &eye, &mut timings)?;
    Ok((scenario, eye, result))
}

fn profile(xs: &[f64], ys: impl IntoIterator<Item = f64>) -> Vec<[f64; 2]> {
    xs.iter().zip(ys).map(|(&x, y)| [x, y]).collect()
}

/// Writes all tables and plots of `result` into `dir`, then the manifest.
pub fn write_run(
    dir: &Path,
    config: &ScenarioConfig,
    eye: &EyeModel,
    result: &RunResult,
    timings: Timings,
) -> Result<RunManifest> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let state = &result.state;
    let mut outputs = Vec::new();
    let mut add = |name: &str| {
        outputs.push(name.to_string());
        dir.join(name)
    };

    output::write_surface_profile(&add(SURFACE_FILE), &result.profile)?;
    output::write_lens(&add(LENS_FILE), &state.lens)?;
    study::write_strip(&add(STRIP_FILE), &result.strip)?;
    output::write_nodal(&add("nodal.csv"), &state.u, &result.stress)?;
    output::write_convergence(&add("convergence.csv"), &state.history)?;
    let chi = &state.chi;
    output::write_table(
        &add("traction.csv"),
        &["chi [cm]", output::R_CM, output::P_MPA],
        chi.chi
            .iter()
            .zip(&chi.r)
            .zip(&state.lens.p)
            .map(|((c, r), p)| vec![output::fmt(*c), output::fmt(*r), output::fmt(*p)]),
    )?;

    let r: Vec<f64> = result.profile.iter().map(|s| s.r).collect();
    LinePlot::new("Ocular surface displacement", output::R_CM, "[µm]")
        .line("u_n", profile(&r, result.profile.iter().map(|s| s.u_n * UM_PER_CM)))
        .line("u_r", profile(&r, result.profile.iter().map(|s| s.u_r * UM_PER_CM)))
        .line("u_z", profile(&r, result.profile.iter().map(|s| s.u_z * UM_PER_CM)))
        .dashed("|u|", profile(&r, result.profile.iter().map(|s| s.norm * UM_PER_CM)))
        .write(&add("surface_displacement.svg"))?;
    let lens = &state.lens;
    LinePlot::new("Suction pressure", output::R_CM, output::P_MPA)
        .line("p(r)", profile(&lens.r, lens.p.iter().copied()))
        .dashed("P_out(chi)", profile(&chi.chi, lens.p.iter().copied()))
        .write(&add("pressure.svg"))?;
    LinePlot::new("Lens displacement", output::R_CM, "[µm]")
        .line("eta_n", profile(&lens.r, lens.eta_n.iter().map(|v| v * UM_PER_CM)))
        .line("eta_r", profile(&lens.r, lens.eta_r.iter().map(|v| v * UM_PER_CM)))
        .line("eta_z", profile(&lens.r, lens.eta_z.iter().map(|v| v * UM_PER_CM)))
        .write(&add("lens_displacement.svg"))?;
    LinePlot::new("Strip-averaged stress", output::R_CM, "[MPa]")
        .line("S_eff", profile(&r, result.strip.iter().map(|s| s.s_eff)))
        .line("S_t", profile(&r, result.strip.iter().map(|s| s.s_t)))
        .write(&add("strip_stress.svg"))?;
    let iters: Vec<f64> = state.history.iter().map(|h| h.n as f64).collect();
    LinePlot::new("Convergence", "iteration", "log10 relative change")
        .line("rel_u", profile(&iters, state.history.iter().map(|h| h.rel_u.log10())))
        .line("rel_p", profile(&iters, state.history.iter().map(|h| h.rel_p.log10())))
        .write(&add("convergence.svg"))?;

    let mesh = eye.mesh();
    let nv = mesh.n_vertices();
    let u_norm: Vec<f64> = (0..nv)
        .map(|i| {
            let d = state.u.node(i);
            d[0].hypot(d[1]) * UM_PER_CM
        })
        .collect();
    FieldPlot::new("Displacement magnitude", mesh.vertices.clone(), mesh.triangles.clone())
        .values(output::U_NORM_UM, u_norm)
        .write(&add("u_norm_field.svg"))?;
    let u_z: Vec<f64> = (0..nv).map(|i| state.u.node(i)[1] * UM_PER_CM).collect();
    FieldPlot::new("Vertical displacement", mesh.vertices.clone(), mesh.triangles.clone())
        .values(output::U_Z_UM, u_z)
        .write(&add("u_z_field.svg"))?;
    FieldPlot::new("Effective stress", mesh.vertices.clone(), mesh.triangles.clone())
        .values(output::S_EFF_MPA, result.stress.von_mises_vertices())
        .write(&add("s_eff_field.svg"))?;

    let manifest = RunManifest {
        software: software(),
        label: result.label.clone(),
        geometry: geometry_key(config),
        mesh_vertices: nv,
        mesh_triangles: mesh.n_triangles(),
        outputs,
        config: config.clone(),
        timings,
        convergence: ConvergenceSummary::of(state),
        metrics: result.metrics,
    };
    for name in &manifest.outputs {
        let path = dir.join(name);
        let len = std::fs::metadata(&path).map_err(|e| Error::io(&path, e))?.len();
        if len == 0 {
            return Err(Error::Consistency(format!("output {} is empty", path.display())));
        }
    }
    let path = dir.join(MANIFEST_FILE);
    let text = toml::to_string(&manifest).map_err(|e| Error::Consistency(format!("manifest: {e}")))?;
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

fn not_converged(state: &CoupledState) -> Option<Error> {
    match state.outcome {
        Outcome::Converged => None,
        o => Some(Error::Coupling(format!(
            "no convergence ({}) after {} iterations; see convergence.csv",
            o.name(),
            state.iterations()
        ))),
    }
}

/// Full single run into `dir`. A run that stops without converging still
/// writes its files, then reports an error.
pub fn run_to_dir(config: &ScenarioConfig, dir: &Path) -> Result<RunManifest> {
    let scenario = config.resolve()?;
    let (eye, mut timings) = build_eye(&scenario)?;
    let result = simulate(&scenario, &eye, &mut timings)?;
    let manifest = write_run(dir, config, &eye, &result, timings)?;
    match not_converged(&result.state) {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}

fn eye_key(c: &ScenarioConfig) -> String {
    format!(
        "{}|{}|{}|{}|{}",
        c.eye.preset,
        c.eye.material.name(),
        c.eye.e_eye_mpa,
        c.eye.poisson,
        c.mesh.target_vertices
    )
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// A solved scenario of a batch with the eye it ran on.
#[derive(Debug)]
pub struct BatchItem {
    pub result: RunResult,
    pub timings: Timings,
    pub eye: Arc<EyeModel>,
}

/// Solves every config in parallel. Runs that share an eye (surface,
/// material, mesh) share one factorised stiffness matrix.
pub fn run_batch(configs: &[ScenarioConfig], threads: Option<usize>) -> Result<Vec<Result<BatchItem>>> {
    let pool = thread_pool(threads)?;
    Ok(pool.install(|| {
        let scenarios: Vec<Result<Scenario>> = configs.iter().map(|c| c.resolve()).collect();
        let mut keys: Vec<String> = configs.iter().map(eye_key).collect();
        keys.sort();
        keys.dedup();
        let eyes: HashMap<String, std::result::Result<(Arc<EyeModel>, Timings), String>> = keys
            .par_iter()
            .map(|k| {
                let i = configs.iter().position(|c| &eye_key(c) == k).unwrap();
                let built = match &scenarios[i] {
                    Ok(s) => build_eye(s).map(|(e, t)| (Arc::new(e), t)).map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                };
                (k.clone(), built)
            })
            .collect();
        configs
            .par_iter()
            .zip(&scenarios)
            .map(|(c, s)| {
                let s = s.as_ref().map_err(|e| Error::Config(e.to_string()))?;
                let (eye, mut timings) = eyes[&eye_key(c)].clone().map_err(Error::Mesh)?;
                let result = simulate(s, &eye, &mut timings)?;
                Ok(BatchItem { result, timings, eye })
            })
            .collect()
    }))
}

/// One entry of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub config: ScenarioConfig,
    pub manifest: Option<RunManifest>,
    pub digest: Option<RunDigest>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRunEntry {
    pub label: String,
    pub directory: String,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub software: String,
    pub runs: Vec<SweepRunEntry>,
    pub outputs: Vec<String>,
    pub spec: SweepSpec,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub runs: Vec<SweepRun>,
    pub manifest: SweepManifest,
}

impl SweepReport {
    pub fn failed(&self) -> usize {
        self.runs.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Runs every scenario of `spec`, each into `out/runs/<label>`, then writes
/// the cross-run tables and `sweep_manifest.toml`. Failed runs are recorded
/// and the sweep carries on.
pub fn run_sweep(spec: &SweepSpec, out: &Path, threads: Option<usize>) -> Result<SweepReport> {
    let configs = spec.runs()?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let results = run_batch(&configs, threads)?;
    let pool = thread_pool(threads)?;
    let runs: Vec<SweepRun> = pool.install(|| {
        configs
            .par_iter()
            .zip(results.into_par_iter())
            .map(|(config, result)| {
                let dir = out.join("runs").join(&config.name);
                let written = result.and_then(|BatchItem { result, timings, eye }| {
                    let manifest = write_run(&dir, config, &eye, &result, timings)?;
                    let digest = result.digest(manifest.geometry.clone());
                    Ok((manifest, digest, not_converged(&result.state)))
                });
                match written {
                    Ok((manifest, digest, failure)) => SweepRun {
                        config: config.clone(),
                        manifest: Some(manifest),
                        digest: Some(digest),
                        error: failure.map(|e| e.to_string()),
                    },
                    Err(e) => SweepRun {
                        config: config.clone(),
                        manifest: None,
                        digest: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });

    let outputs = write_comparisons(out, &runs)?;
    let manifest = SweepManifest {
        software: software(),
        runs: runs
            .iter()
            .map(|r| SweepRunEntry {
                label: r.config.name.clone(),
                directory: format!("runs/{}", r.config.name),
                status: r.error.clone().unwrap_or_else(|| "ok".into()),
            })
            .collect(),
        outputs,
        spec: spec.clone(),
    };
    let path = out.join(SWEEP_MANIFEST_FILE);
    let text = toml::to_string(&manifest).map_err(|e| Error::Consistency(format!("sweep manifest: {e}")))?;
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(SweepReport { runs, manifest })
}

fn group_label(c: &ScenarioConfig, skip_material: bool) -> String {
    let mut s = format!("{}-{}-{}", c.eye.preset, c.lens.preset, c.lens.thickness.name());
    if !skip_material {
        s.push('-');
        s.push_str(c.eye.material.name());
    }
    s
}

/// Cross-run tables: summary, and where the sweep varies stiffness or the
/// eye material, doubling factors, relative profiles and material ratios.
pub fn write_comparisons(out: &Path, runs: &[SweepRun]) -> Result<Vec<String>> {
    let mut files = Vec::new();
    let f = output::fmt;

    let ok: Vec<(&ScenarioConfig, &RunManifest, &RunDigest)> = runs
        .iter()
        .filter_map(|r| Some((&r.config, r.manifest.as_ref()?, r.digest.as_ref()?)))
        .collect();
    output::write_table(
        &out.join("summary.csv"),
        &[
            "run",
            "E_ratio [1]",
            "eye",
            "lens",
            "thickness",
            "material",
            "status",
            "iterations",
            "max inward u_n [µm]",
            "max |u_n| [µm]",
            "max |u| [µm]",
            "limbal bulge [µm]",
            "edge compression [µm]",
            "p(0) [MPa]",
            "min p [MPa]",
            "p(edge) [MPa]",
            "peak S_eff [MPa]",
        ],
        runs.iter().map(|r| {
            let c = &r.config;
            let mut row = vec![
                c.name.clone(),
                c.e_ratio().to_string(),
                c.eye.preset.clone(),
                c.lens.preset.clone(),
                c.lens.thickness.name().into(),
                c.eye.material.name().into(),
                r.error.clone().unwrap_or_else(|| "ok".into()),
            ];
            match &r.manifest {
                Some(m) => {
                    let x = &m.metrics;
                    row.push(x.iterations.to_string());
                    row.extend(
                        [
                            x.max_inward_un_um,
                            x.max_abs_un_um,
                            x.max_norm_um,
                            x.limbal_bulge_um,
                            x.edge_compression_um,
                            x.p_center_mpa,
                            x.p_min_mpa,
                            x.p_edge_mpa,
                            x.peak_von_mises_mpa,
                        ]
                        .map(f),
                    );
                }
                None => row.extend(std::iter::repeat_n(String::new(), 10)),
            }
            row
        }),
    )?;
    files.push("summary.csv".to_string());

    let mut overlay_un = LinePlot::new("Normal surface displacement", output::R_CM, output::U_N_UM);
    let mut overlay_p = LinePlot::new("Suction pressure", output::R_CM, output::P_MPA);
    for (c, _, d) in &ok {
        overlay_un = overlay_un.line(c.name.clone(), profile(&d.surface_r, d.u_n_um.iter().copied()));
        overlay_p = overlay_p.line(c.name.clone(), profile(&d.lens_r, d.p.iter().copied()));
    }
    if !ok.is_empty() {
        overlay_un.write(&out.join("surface_u_n.svg"))?;
        overlay_p.write(&out.join("pressure.svg"))?;
        files.push("surface_u_n.svg".into());
        files.push("pressure.svg".into());
    }

    // Stiffness groups: everything fixed except E_lens.
    type Member<'a> = (&'a ScenarioConfig, &'a RunManifest, &'a RunDigest);
    let mut groups: Vec<(String, Vec<Member>)> = Vec::new();
    for &(c, m, d) in &ok {
        let key = group_label(c, false);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push((c, m, d)),
            None => groups.push((key, vec![(c, m, d)])),
        }
    }
    let mut doubling_rows = Vec::new();
    let mut extreme_rows = Vec::new();
    for (key, members) in &mut groups {
        members.sort_by(|a, b| a.0.e_ratio().total_cmp(&b.0.e_ratio()));
        let mut es: Vec<f64> = members.iter().map(|m| m.0.e_ratio()).collect();
        es.dedup();
        if es.len() < 2 {
            continue;
        }
        let points: Vec<(f64, f64)> = members
            .iter()
            .map(|m| (m.0.e_ratio(), m.1.metrics.max_abs_un_um))
            .collect();
        for row in doubling_factors(&points) {
            doubling_rows.push(vec![
                key.clone(),
                row.e_from.to_string(),
                row.e_to.to_string(),
                f(row.u_from_um),
                f(row.u_to_um),
                f(row.factor),
            ]);
        }
        let reference = members[0];
        let p_ref_sup = reference.2.p.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
        let p_ref_center = reference.2.p[0].abs();
        let mut rel_p_cols = vec![reference.2.lens_r.clone()];
        let mut rel_s_cols = vec![reference.2.strip_r.clone()];
        let mut heads_p = vec![output::R_CM.to_string()];
        let mut heads_s = vec![output::R_CM.to_string()];
        let mut plot_p = LinePlot::new(
            format!("Relative suction pressure change, {key}"),
            output::R_CM,
            "rel_p [1]",
        );
        let mut plot_s = LinePlot::new(
            format!("Relative effective stress change, {key}"),
            output::R_CM,
            "rel_S_eff [1]",
        );
        for m in members.iter().skip(1) {
            let rel = relative_profiles(m.2, reference.2)?;
            let e = m.0.e_ratio();
            let (max_v, max_r) = rel.max_rel_p();
            let (min_v, min_r) = rel.min_rel_p();
            let to_center = p_ref_sup / p_ref_center;
            extreme_rows.push(vec![
                key.clone(),
                reference.0.e_ratio().to_string(),
                e.to_string(),
                f(max_v),
                f(max_r),
                f(min_v),
                f(min_r),
                f(max_v * to_center),
                f(min_v * to_center),
            ]);
            heads_p.push(format!("rel_p E={e} [1]"));
            heads_s.push(format!("rel_S_eff E={e} [1]"));
            plot_p = plot_p.line(format!("E = {e}"), profile(&rel.lens_r, rel.rel_p.iter().copied()));
            plot_s = plot_s.line(format!("E = {e}"), profile(&rel.strip_r, rel.rel_s_eff.iter().copied()));
            rel_p_cols.push(rel.rel_p);
            rel_s_cols.push(rel.rel_s_eff);
        }
        for (name, heads, cols, plot) in [
            ("rel_p", heads_p, rel_p_cols, plot_p),
            ("rel_s_eff", heads_s, rel_s_cols, plot_s),
        ] {
            let csv = format!("{name}_{key}.csv");
            let refs: Vec<&str> = heads.iter().map(String::as_str).collect();
            output::write_table(
                &out.join(&csv),
                &refs,
                (0..cols[0].len()).map(|i| cols.iter().map(|c| f(c[i])).collect::<Vec<_>>()),
            )?;
            let svg = format!("{name}_{key}.svg");
            plot.write(&out.join(&svg))?;
            files.push(csv);
            files.push(svg);
        }
    }
    if !doubling_rows.is_empty() {
        output::write_table(
            &out.join("doubling.csv"),
            &[
                "group",
                "E_from [1]",
                "E_to [1]",
                "max |u_n| from [µm]",
                "max |u_n| to [µm]",
                "factor [1]",
            ],
            doubling_rows,
        )?;
        files.push("doubling.csv".into());
    }
    if !extreme_rows.is_empty() {
        output::write_table(
            &out.join("rel_p_extremes.csv"),
            &[
                "group",
                "E_ref [1]",
                "E [1]",
                "max rel_p [1]",
                "r at max [cm]",
                "min rel_p [1]",
                "r at min [cm]",
                "max rel_p, centre-normalised [1]",
                "min rel_p, centre-normalised [1]",
            ],
            extreme_rows,
        )?;
        files.push("rel_p_extremes.csv".into());
    }

    // Material pairs: same everything except the eye material.
    let mut pair_rows = Vec::new();
    for &(c, _, d) in ok.iter().filter(|r| r.0.eye.material == MaterialKind::Homogeneous) {
        let twin = ok.iter().find(|o| {
            o.0.eye.material == MaterialKind::Heterogeneous
                && group_label(o.0, true) == group_label(c, true)
                && o.0.lens.e_lens_mpa == c.lens.e_lens_mpa
        });
        if let Some(&(h, _, dh)) = twin {
            let cmp: MaterialComparison = compare_runs(d, dh)?;
            pair_rows.push(vec![
                c.name.clone(),
                h.name.clone(),
                f(cmp.u_peak_ratio),
                f(cmp.stress_ratio),
                f(cmp.von_mises_ratio),
                f(cmp.max_rel_p_diff),
                f(cmp.rel_p_diff_center),
            ]);
        }
    }
    if !pair_rows.is_empty() {
        output::write_table(&out.join("material_comparison.csv"), &COMPARISON_HEADERS, pair_rows)?;
        files.push("material_comparison.csv".into());
    }
    Ok(files)
}

pub const COMPARISON_HEADERS: [&str; 7] = [
    "first",
    "second",
    "peak |u| ratio [1]",
    "peak stress ratio [1]",
    "peak S_eff ratio [1]",
    "max rel p difference [1]",
    "rel p difference at r=0 [1]",
];

/// Compares two run directories; the first is the reference.
pub fn compare_dirs(first: &Path, second: &Path) -> Result<MaterialComparison> {
    let a = RunManifest::load(first)?;
    let b = RunManifest::load(second)?;
    compare_runs(&a.digest(first)?, &b.digest(second)?)
}
