//! The eye alone: a prescribed suction-like pressure over the cornea, solved
//! with the axisymmetric P2 model, for a homogeneous and a layered eye.
//!
//! cargo run --release --example eye_under_pressure [-- OUT_DIR]

use std::sync::Arc;

use lenseye::fem::{recover_stresses, ElasticSystem, SurfaceTraction};
use lenseye::geometry::{EyePreset, LayeredModulusParams, MaterialField, OcularSurface};
use lenseye::mesh::{generate_mesh, MeshParams};
use lenseye::output::{FieldPlot, LinePlot};
use lenseye::UM_PER_CM;

fn main() -> lenseye::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/examples/eye_under_pressure".into());
    let out = std::path::Path::new(&out);
    let surface = OcularSurface::preset(EyePreset::Average);
    let mesh = Arc::new(generate_mesh(&surface, &MeshParams::default())?);

    // 1 kPa, fading to zero at r = 0.6 cm
    let r: Vec<f64> = (0..=60).map(|i| 0.01 * i as f64).collect();
    let p: Vec<f64> = r.iter().map(|r| 1e-3 * (1.0 - (r / 0.6).powi(2))).collect();
    let load = SurfaceTraction::from_samples(r, p)?;

    let materials = [
        ("homogeneous", MaterialField::homogeneous(0.2, 0.49)?),
        (
            "layered",
            MaterialField::layered(&surface, LayeredModulusParams::standard(surface.r_eye()), 0.49)?,
        ),
    ];
    let mut plot = LinePlot::new("Normal surface displacement under 1 kPa", "r [cm]", "u_n [µm]");
    for (name, material) in &materials {
        let system = ElasticSystem::assemble(mesh.clone(), material)?;
        let u = system.solve_traction(&load)?;
        let stress = recover_stresses(&u, material)?;
        let profile = u.surface_profile(&surface, 401);
        let centre = profile[0].u_n * UM_PER_CM;
        println!(
            "{name:<12} u_n(0) {centre:8.4} µm  max |u| {:.4} µm  peak |S| {:.3e} MPa",
            u.max_magnitude() * UM_PER_CM,
            stress.max_abs_component()
        );
        plot = plot.line(*name, profile.iter().map(|s| [s.r, s.u_n * UM_PER_CM]).collect());
        let norm: Vec<f64> = (0..mesh.n_vertices())
            .map(|i| {
                let [a, b] = u.node(i);
                a.hypot(b) * UM_PER_CM
            })
            .collect();
        FieldPlot::new(
            format!("|u| [µm], {name} eye"),
            mesh.vertices.clone(),
            mesh.triangles.clone(),
        )
        .values("|u| [µm]", norm)
        .write(&out.join(format!("u_norm_{name}.svg")))?;
    }
    plot.write(&out.join("surface_u_n.svg"))?;
    println!("wrote {}", out.display());
    Ok(())
}
