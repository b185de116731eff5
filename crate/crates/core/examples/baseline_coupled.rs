//! Baseline coupled run: average eye and lens, E_lens / E_eye = 0.5.
//! Prints the iteration history and writes the full output set.
//!
//! cargo run --release --example baseline_coupled [-- OUT_DIR]

use lenseye::config::ScenarioConfig;
use lenseye::runner::{run_in_memory, write_run, Timings};

fn main() -> lenseye::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/examples/baseline_coupled".into());
    let config = ScenarioConfig::default();
    let (_, eye, result) = run_in_memory(&config)?;

    println!("{:>3} {:>12} {:>12} {:>10}", "n", "rel_u", "rel_p", "S");
    for h in &result.state.history {
        println!("{:>3} {:>12.3e} {:>12.3e} {:>10.6}", h.n, h.rel_u, h.rel_p, h.sigma);
    }
    let m = &result.metrics;
    println!("{:?} after {} iterations", result.state.outcome, m.iterations);
    println!(
        "max inward u_n   {:.4} µm at r = {:.3} cm",
        m.max_inward_un_um, m.max_inward_un_r_cm
    );
    println!(
        "limbal bulge     {:.4} µm at r = {:.3} cm",
        m.limbal_bulge_um, m.limbal_bulge_r_cm
    );
    println!(
        "edge compression {:.4} µm at r = {:.3} cm",
        m.edge_compression_um, m.edge_compression_r_cm
    );
    println!(
        "p(0) {:.4e}  p_min {:.4e} at r = {:.3}  p(edge) {:.4e} MPa",
        m.p_center_mpa, m.p_min_mpa, m.p_min_r_cm, m.p_edge_mpa
    );
    println!("net load {:.3e}  formula gap {:.2e}", m.net_load, m.pressure_form_gap);

    let manifest = write_run(std::path::Path::new(&out), &config, &eye, &result, Timings::default())?;
    println!("wrote {} files to {out}", manifest.outputs.len() + 1);
    Ok(())
}
