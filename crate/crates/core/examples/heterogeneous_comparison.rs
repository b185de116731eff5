//! Homogeneous eye against a layered one with a stiffer sclera, same lens.
//!
//! cargo run --release --example heterogeneous_comparison

use lenseye::config::{MaterialKind, ScenarioConfig};
use lenseye::runner::run_batch;
use lenseye::study::compare_runs;

fn main() -> lenseye::Result<()> {
    let homogeneous = ScenarioConfig::default();
    let mut layered = homogeneous.clone();
    layered.eye.material = MaterialKind::Heterogeneous;
    let configs = [homogeneous, layered];
    let items = run_batch(&configs, None)?;
    let mut digests = Vec::new();
    for (c, item) in configs.iter().zip(items) {
        let r = item?.result;
        let m = r.metrics;
        println!(
            "{:<13} {:>2} it  max |u| {:.4} µm  peak |S| {:.3e}  peak S_eff {:.3e} MPa  p(0) {:.4e} MPa",
            c.eye.material.name(),
            m.iterations,
            m.max_norm_um,
            m.peak_stress_mpa,
            m.peak_von_mises_mpa,
            m.p_center_mpa
        );
        digests.push(r.digest("average"));
    }
    let cmp = compare_runs(&digests[0], &digests[1])?;
    println!(
        "layered / homogeneous: |u| x{:.3}  |S| x{:.3}  S_eff x{:.3}",
        cmp.u_peak_ratio, cmp.stress_ratio, cmp.von_mises_ratio
    );
    println!(
        "largest relative pressure change {:.3e} ({:.3e} at the axis)",
        cmp.max_rel_p_diff, cmp.rel_p_diff_center
    );
    Ok(())
}
