//! Ocular surface and lens presets: parameters, limbus coefficients and the
//! smoothness of the two limbal junctions.
//!
//! cargo run --example geometry_presets [-- OUT_DIR]

use lenseye::geometry::{
    EyePreset, LensGeometry, LensPreset, OcularSurface, ThicknessProfile, LIMBUS_END, LIMBUS_START,
};
use lenseye::output::LinePlot;

fn main() -> lenseye::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "out/examples/geometry_presets".into());
    let out = std::path::Path::new(&out);

    let mut plot = LinePlot::new("Ocular surface presets", "r [cm]", "h [cm]");
    println!(
        "{:<14} {:>8} {:>8} {:>8}  {:>10} {:>10}",
        "eye", "K_c", "e^2", "R_s", "jump h'", "jump h''"
    );
    for preset in [
        EyePreset::FlatCornea,
        EyePreset::Average,
        EyePreset::SteepCornea,
        EyePreset::FlatSclera,
    ] {
        let s = OcularSurface::preset(preset);
        let (k_c, e2, r_s, _, _) = preset.parameters();
        // value/slope/curvature mismatch of the neighbouring pieces at each junction
        let mut jump = [0.0f64; 2];
        for (a, b) in [
            (s.cornea.eval(LIMBUS_START), s.limbus.eval(LIMBUS_START)),
            (s.limbus.eval(LIMBUS_END), s.sclera.eval(LIMBUS_END)),
        ] {
            jump[0] = jump[0].max((a[1] - b[1]).abs());
            jump[1] = jump[1].max((a[2] - b[2]).abs());
        }
        println!(
            "{:<14} {k_c:>8.3} {e2:>8.3} {r_s:>8.3}  {:>10.2e} {:>10.2e}",
            preset.name(),
            jump[0],
            jump[1]
        );
        let pts = (0..=600).map(|i| {
            let r = s.r_eye() * i as f64 / 600.0;
            [r, s.h_unchecked(r)]
        });
        plot = plot.line(preset.name(), pts.collect());
    }
    plot.write(&out.join("eye_presets.svg"))?;

    let mut plot = LinePlot::new("Lens posterior surfaces", "r [cm]", "g [cm]");
    for preset in [LensPreset::Flat, LensPreset::Average, LensPreset::Steep] {
        let lens = LensGeometry::preset(preset, ThicknessProfile::constant_um(100.0));
        let (r_lens, k_lens, z_lens) = preset.parameters();
        println!(
            "lens {:<8} r_lens {r_lens} cm  K {k_lens} cm  sag {z_lens} cm",
            preset.name()
        );
        let pts = (0..=400).map(|i| {
            let r = lens.r_lens * i as f64 / 400.0;
            [r, lens.posterior(r)[0]]
        });
        plot = plot.line(preset.name(), pts.collect());
    }
    plot.write(&out.join("lens_presets.svg"))?;
    println!("wrote {}", out.display());
    Ok(())
}
