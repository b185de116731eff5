//! Mesh of the average eye at a few vertex budgets, exported as CSV and SVG.
//!
//! cargo run --example mesh_export [-- OUT_DIR]

use lenseye::geometry::{EyePreset, OcularSurface};
use lenseye::mesh::{generate_mesh, write_mesh_csv, BoundaryTag, MeshParams};
use lenseye::output::FieldPlot;

fn main() -> lenseye::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/examples/mesh_export".into());
    let out = std::path::Path::new(&out);
    let surface = OcularSurface::preset(EyePreset::Average);
    println!("domain area {:.6} cm^2", surface.domain_area());
    for target in [800, 2806, 7700] {
        let mesh = generate_mesh(&surface, &MeshParams::with_target(target))?;
        let dir = out.join(format!("n{target}"));
        write_mesh_csv(&mesh, &dir)?;
        FieldPlot::new(
            format!("mesh, {} vertices", mesh.n_vertices()),
            mesh.vertices.clone(),
            mesh.triangles.clone(),
        )
        .write(&dir.join("mesh.svg"))?;
        println!(
            "target {target:>5}: {:>5} vertices {:>6} triangles  min angle {:.1}  area {:.6}  surface nodes {}",
            mesh.n_vertices(),
            mesh.n_triangles(),
            mesh.min_angle_deg(),
            mesh.area(),
            mesh.boundary_nodes(BoundaryTag::Out).len()
        );
    }
    Ok(())
}
