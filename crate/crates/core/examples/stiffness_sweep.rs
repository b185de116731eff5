//! Lens stiffness sweep on the baseline geometry: peak displacement,
//! centre pressure and the growth factor per doubling of E_lens / E_eye.
//!
//! cargo run --release --example stiffness_sweep

use lenseye::config::SweepSpec;
use lenseye::runner::run_batch;
use lenseye::study::doubling_factors;

fn main() -> lenseye::Result<()> {
    let configs = SweepSpec::stiffness().runs()?;
    let items = run_batch(&configs, None)?;
    let mut points = Vec::new();
    println!(
        "{:>6} {:>4} {:>6} {:>12} {:>12}",
        "E", "it", "w", "max|u_n| µm", "p(0) MPa"
    );
    for (c, item) in configs.iter().zip(items) {
        let item = item?;
        let m = item.result.metrics;
        println!(
            "{:>6} {:>4} {:>6.3} {:>12.4} {:>12.4e}",
            c.e_ratio(),
            m.iterations,
            m.relaxation,
            m.max_abs_un_um,
            m.p_center_mpa
        );
        points.push((c.e_ratio(), m.max_abs_un_um));
    }
    println!();
    for row in doubling_factors(&points) {
        println!("E {:>4} -> {:>4}: x{:.3}", row.e_from, row.e_to, row.factor);
    }
    Ok(())
}
