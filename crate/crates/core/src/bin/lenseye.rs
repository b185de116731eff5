//! Batch front end: single runs, sweeps, geometry and mesh dumps, run comparison.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lenseye::config::{Overrides, ScenarioConfig, SweepSpec};
use lenseye::geometry::{EyePreset, LensGeometry, LensPreset, SurfaceProfile};
use lenseye::mesh::{generate_mesh, write_mesh_csv};
use lenseye::output::{self, fmt, FieldPlot, LinePlot};
use lenseye::runner::{self, COMPARISON_HEADERS};
use lenseye::{Error, Result};

#[derive(Parser)]
#[command(name = "lenseye", version, about = "Soft contact lens on a deformable eye")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Target number of mesh vertices.
    #[arg(long, global = true, value_name = "N")]
    mesh_vertices: Option<usize>,

    /// Relative change at which the coupling iteration stops.
    #[arg(long, global = true, value_name = "X")]
    epsilon: Option<f64>,

    /// Iteration cap of the coupling loop (at most 100).
    #[arg(long, global = true, value_name = "N")]
    max_iters: Option<usize>,

    /// Worker threads for sweeps and stress recovery.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one coupled scenario (baseline if no config is given).
    Run { config: Option<PathBuf> },
    /// Run a batch of scenarios and the cross-run comparisons.
    Sweep {
        /// Sweep spec file.
        spec: Option<PathBuf>,
        /// Built-in sweep instead of a file.
        #[arg(long, value_enum, conflicts_with = "spec")]
        builtin: Option<Builtin>,
    },
    /// Reference geometry.
    Geometry {
        #[command(subcommand)]
        action: GeometryAction,
    },
    /// Finite element mesh of the eye.
    Mesh {
        #[command(subcommand)]
        action: MeshAction,
    },
    /// Compare two run directories (the first is the reference).
    Compare { first: PathBuf, second: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    /// Eight lens stiffnesses on the baseline eye.
    Stiffness,
    /// Four eyes by three lenses.
    ShapeGrid,
}

#[derive(Subcommand)]
enum GeometryAction {
    /// Write ocular surface and lens posterior profiles.
    Dump {
        #[arg(long, default_value = "average")]
        eye: String,
        #[arg(long, default_value = "average")]
        lens: String,
        #[arg(long, default_value_t = 701)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum MeshAction {
    /// Write vertices, triangles and boundary edges as CSV plus an SVG.
    Export {
        #[arg(long, default_value = "average")]
        eye: String,
    },
}

fn overrides(cli: &Cli) -> Overrides {
    Overrides {
        mesh_vertices: cli.mesh_vertices,
        epsilon: cli.epsilon,
        max_iters: cli.max_iters,
    }
}

fn out_dir(cli: &Cli, default: &str) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from("out").join(default))
}

fn eye_preset(name: &str) -> Result<EyePreset> {
    EyePreset::from_name(name).ok_or_else(|| Error::Config(format!("unknown eye preset '{name}'")))
}

fn run(cli: &Cli, path: Option<&Path>) -> Result<()> {
    let mut config = match path {
        Some(p) => ScenarioConfig::from_file(p)?,
        None => ScenarioConfig::default(),
    };
    config.apply(&overrides(cli));
    config.validate()?;
    let dir = out_dir(cli, "run");
    let outcome = runner::run_to_dir(&config, &dir);
    match &outcome {
        Ok(m) => {
            let x = &m.metrics;
            println!("{}: converged in {} iterations", m.label, x.iterations);
            println!(
                "  max inward u_n   {:.4} µm at r = {:.3} cm",
                x.max_inward_un_um, x.max_inward_un_r_cm
            );
            println!(
                "  limbal bulge     {:.4} µm at r = {:.3} cm",
                x.limbal_bulge_um, x.limbal_bulge_r_cm
            );
            println!(
                "  edge compression {:.4} µm at r = {:.3} cm",
                x.edge_compression_um, x.edge_compression_r_cm
            );
            println!(
                "  p(0) {:.4e}  min p {:.4e}  p(edge) {:.4e} MPa",
                x.p_center_mpa, x.p_min_mpa, x.p_edge_mpa
            );
            for w in &m.convergence.warnings {
                println!("  warning: {w}");
            }
            println!("wrote {} files to {}", m.outputs.len() + 1, dir.display());
        }
        Err(_) => eprintln!("outputs (if any) are in {}", dir.display()),
    }
    outcome.map(|_| ())
}

fn sweep(cli: &Cli, spec: Option<&Path>, builtin: Option<Builtin>) -> Result<()> {
    let mut spec = match (spec, builtin) {
        (Some(p), _) => SweepSpec::from_file(p)?,
        (None, Some(Builtin::Stiffness)) => SweepSpec::stiffness(),
        (None, Some(Builtin::ShapeGrid)) => SweepSpec::shape_grid(),
        (None, None) => return Err(Error::Config("sweep needs a spec file or --builtin".into())),
    };
    spec.apply(&overrides(cli));
    let dir = out_dir(cli, "sweep");
    let report = runner::run_sweep(&spec, &dir, cli.threads)?;
    for r in &report.runs {
        match (&r.manifest, &r.error) {
            (Some(m), None) => println!(
                "{:<40} ok   {:>3} it  max |u_n| {:.4} µm  p(0) {:.4e} MPa",
                r.config.name, m.metrics.iterations, m.metrics.max_abs_un_um, m.metrics.p_center_mpa
            ),
            (_, Some(e)) => println!("{:<40} FAIL {e}", r.config.name),
            (None, None) => unreachable!(),
        }
    }
    println!("wrote sweep to {}", dir.display());
    match report.failed() {
        0 => Ok(()),
        n => Err(Error::Coupling(format!("{n} of {} runs failed", report.runs.len()))),
    }
}

fn geometry_dump(cli: &Cli, eye: &str, lens: &str, samples: usize) -> Result<()> {
    let surface = lenseye::geometry::OcularSurface::preset(eye_preset(eye)?);
    let lens_preset =
        LensPreset::from_name(lens).ok_or_else(|| Error::Config(format!("unknown lens preset '{lens}'")))?;
    let lens = LensGeometry::preset(lens_preset, lenseye::geometry::ThicknessProfile::constant_um(100.0));
    if samples < 2 {
        return Err(Error::Config("samples must be at least 2".into()));
    }
    let dir = out_dir(cli, "geometry");
    let r_eye = surface.r_eye();
    let rs: Vec<f64> = (0..samples).map(|i| r_eye * i as f64 / (samples - 1) as f64).collect();
    let mut rows = Vec::with_capacity(samples);
    for &r in &rs {
        let [h, dh, d2h] = surface.eval(r)?;
        rows.push(vec![
            fmt(r),
            fmt(h),
            fmt(dh),
            fmt(d2h),
            format!("{:?}", surface.region(r)).to_lowercase(),
        ]);
    }
    output::write_table(
        &dir.join("eye_surface.csv"),
        &["r [cm]", "h [cm]", "h' [1]", "h'' [1/cm]", "region"],
        rows,
    )?;
    let lr: Vec<f64> = (0..samples)
        .map(|i| lens.r_lens * i as f64 / (samples - 1) as f64)
        .collect();
    output::write_table(
        &dir.join("lens_posterior.csv"),
        &["r [cm]", "g [cm]", "g' [1]", "g'' [1/cm]"],
        lr.iter().map(|&r| {
            let g = lens.posterior(r);
            vec![fmt(r), fmt(g[0]), fmt(g[1]), fmt(g[2])]
        }),
    )?;
    output::write_table(
        &dir.join("limbus.csv"),
        &["coefficient", "value"],
        surface
            .limbus
            .l
            .iter()
            .enumerate()
            .map(|(i, v)| vec![format!("l{}", i + 1), fmt(*v)]),
    )?;
    LinePlot::new(format!("{eye} eye, {} lens", lens_preset.name()), "r [cm]", "z [cm]")
        .line("h (eye)", rs.iter().map(|&r| [r, surface.height(r)]).collect())
        .dashed("g (lens)", lr.iter().map(|&r| [r, lens.posterior(r)[0]]).collect())
        .write(&dir.join("geometry.svg"))?;
    println!(
        "R_eye = {r_eye} cm, lens radius {} cm; wrote {}",
        lens.r_lens,
        dir.display()
    );
    Ok(())
}

fn mesh_export(cli: &Cli, eye: &str) -> Result<()> {
    let surface = lenseye::geometry::OcularSurface::preset(eye_preset(eye)?);
    let mut config = ScenarioConfig::default();
    config.apply(&overrides(cli));
    let params = lenseye::mesh::MeshParams::with_target(config.mesh.target_vertices);
    let mesh = generate_mesh(&surface, &params)?;
    let dir = out_dir(cli, "mesh");
    write_mesh_csv(&mesh, &dir)?;
    FieldPlot::new(format!("{eye} eye mesh"), mesh.vertices.clone(), mesh.triangles.clone())
        .write(&dir.join("mesh.svg"))?;
    println!(
        "{} vertices, {} triangles, min angle {:.1} deg, area {:.5} cm^2; wrote {}",
        mesh.n_vertices(),
        mesh.n_triangles(),
        mesh.min_angle_deg(),
        mesh.area(),
        dir.display()
    );
    Ok(())
}

fn compare(cli: &Cli, first: &Path, second: &Path) -> Result<()> {
    let c = runner::compare_dirs(first, second)?;
    println!("peak |u| ratio           {:.4}", c.u_peak_ratio);
    println!("peak stress ratio        {:.4}", c.stress_ratio);
    println!("peak S_eff ratio         {:.4}", c.von_mises_ratio);
    println!("max rel p difference     {:.4e}", c.max_rel_p_diff);
    println!("rel p difference at r=0  {:.4e}", c.rel_p_diff_center);
    if let Some(dir) = &cli.out {
        let row = vec![
            first.display().to_string(),
            second.display().to_string(),
            fmt(c.u_peak_ratio),
            fmt(c.stress_ratio),
            fmt(c.von_mises_ratio),
            fmt(c.max_rel_p_diff),
            fmt(c.rel_p_diff_center),
        ];
        output::write_table(&dir.join("compare.csv"), &COMPARISON_HEADERS, [row])?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: config: threads must be at least 1");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.command {
        Command::Run { config } => run(&cli, config.as_deref()),
        Command::Sweep { spec, builtin } => sweep(&cli, spec.as_deref(), *builtin),
        Command::Geometry {
            action: GeometryAction::Dump { eye, lens, samples },
        } => geometry_dump(&cli, eye, lens, *samples),
        Command::Mesh {
            action: MeshAction::Export { eye },
        } => mesh_export(&cli, eye),
        Command::Compare { first, second } => compare(&cli, first, second),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
