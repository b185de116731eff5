//! Lens alone on the undeformed average eye: shooting for the initial
//! slope, then the suction pressure from both formulas.
//!
//! cargo run --release --example lens_on_rigid_eye

use lenseye::geometry::{EyePreset, LensGeometry, LensPreset, OcularSurface, ThicknessProfile};
use lenseye::lens_shell::{shoot, LensMaterial, ShootingOptions};
use lenseye::UM_PER_CM;

fn main() -> lenseye::Result<()> {
    let surface = OcularSurface::preset(EyePreset::Average);
    let material = LensMaterial::new(0.1, 0.49)?;
    for preset in [LensPreset::Flat, LensPreset::Average, LensPreset::Steep] {
        for thickness in [
            ThicknessProfile::constant_um(100.0),
            ThicknessProfile::varying_default(),
        ] {
            let lens = LensGeometry::preset(preset, thickness);
            let sol = shoot(&surface, &lens, &material, &ShootingOptions::default())?;
            let mid = sol.r.len() / 2;
            println!(
                "{:<8} {:<9} S {:.6}  T(end) {:.1e}  p(0) {:.3e}  p(mid) {:.3e}  p(end) {:.3e} MPa  max |eta| {:.3} µm  gap {:.1e}",
                preset.name(),
                if matches!(thickness, ThicknessProfile::Constant { .. }) { "constant" } else { "varying" },
                sol.sigma,
                sol.t.last().unwrap(),
                sol.p[0],
                sol.p[mid],
                sol.p.last().unwrap(),
                sol.eta_norm.iter().fold(0.0f64, |m, v| m.max(*v)) * UM_PER_CM,
                sol.formula_discrepancy()
            );
        }
    }
    Ok(())
}
