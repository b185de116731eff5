//! Every eye preset against every lens preset at E_lens / E_eye = 0.5:
//! centre displacement, limbal bulge and pressure.
//!
//! cargo run --release --example shape_grid

use lenseye::config::SweepSpec;
use lenseye::runner::run_batch;

fn main() -> lenseye::Result<()> {
    let configs = SweepSpec::shape_grid().runs()?;
    let items = run_batch(&configs, None)?;
    println!(
        "{:<14} {:<8} {:>10} {:>10} {:>10} {:>12}",
        "eye", "lens", "u_n(0) µm", "bulge µm", "edge µm", "p(0) MPa"
    );
    for (c, item) in configs.iter().zip(items) {
        let r = item?.result;
        let m = r.metrics;
        println!(
            "{:<14} {:<8} {:>10.4} {:>10.4} {:>10.4} {:>12.4e}",
            c.eye.preset,
            c.lens.preset,
            r.profile[0].u_n * lenseye::UM_PER_CM,
            m.limbal_bulge_um,
            m.edge_compression_um,
            m.p_center_mpa
        );
    }
    Ok(())
}
