//! Baseline coupled run on successively finer meshes.
//!
//! cargo run --release --example mesh_refinement

use lenseye::config::ScenarioConfig;
use lenseye::runner::run_batch;

fn main() -> lenseye::Result<()> {
    let configs: Vec<ScenarioConfig> = [1000, 2806, 5000, 7700, 12000]
        .iter()
        .map(|&n| {
            let mut c = ScenarioConfig::default();
            c.mesh.target_vertices = n;
            c
        })
        .collect();
    let items = run_batch(&configs, None)?;
    let mut prev: Option<f64> = None;
    println!(
        "{:>6} {:>6} {:>12} {:>10} {:>10} {:>12}",
        "target", "nodes", "u_n(0) µm", "bulge µm", "change", "p(0) MPa"
    );
    for (c, item) in configs.iter().zip(items) {
        let item = item?;
        let r = &item.result;
        let u0 = -r.metrics.max_inward_un_um;
        let change = prev.map_or(f64::NAN, |p| (u0 - p).abs());
        println!(
            "{:>6} {:>6} {:>12.5} {:>10.5} {:>10.2e} {:>12.5e}",
            c.mesh.target_vertices,
            item.eye.mesh().n_nodes(),
            u0,
            r.metrics.limbal_bulge_um,
            change,
            r.metrics.p_center_mpa
        );
        prev = Some(u0);
    }
    Ok(())
}
