//! Posterior lens curve `g(r)` and thickness profile `tau(r)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::UM_PER_CM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LensPreset {
    Flat,
    Average,
    Steep,
}

impl LensPreset {
    pub const ALL: [LensPreset; 3] = [LensPreset::Flat, LensPreset::Average, LensPreset::Steep];

    pub fn name(self) -> &'static str {
        match self {
            LensPreset::Flat => "flat",
            LensPreset::Average => "average",
            LensPreset::Steep => "steep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// (R_lens, K_lens, z_lens) in cm.
    pub fn parameters(self) -> (f64, f64, f64) {
        match self {
            LensPreset::Flat => (0.7, 0.90, -0.3405),
            LensPreset::Average => (0.7, 0.87, -0.3630),
            LensPreset::Steep => (0.7, 0.84, -0.3857),
        }
    }
}

/// Lens thickness; all lengths in cm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThicknessProfile {
    Constant {
        tau: f64,
    },
    /// Thin centre, a shallow bump at `r_inc` and a thick ridge peaking at `r_max`.
    Varying {
        tau_cent: f64,
        tau_inc: f64,
        tau_max: f64,
        r_max: f64,
        r_inc: f64,
        c_max: f64,
        c_inc: f64,
    },
}

impl ThicknessProfile {
    pub fn constant_um(tau_um: f64) -> Self {
        ThicknessProfile::Constant {
            tau: tau_um / UM_PER_CM,
        }
    }

    /// The 35 µm / 269 µm ridge profile.
    pub fn varying_default() -> Self {
        ThicknessProfile::Varying {
            tau_cent: 35.0 / UM_PER_CM,
            tau_inc: 7.5 / UM_PER_CM,
            tau_max: 269.0 / UM_PER_CM,
            r_max: 0.623,
            r_inc: 0.553,
            c_max: 0.025,
            c_inc: 0.05,
        }
    }

    /// `(tau, tau')` in cm and cm/cm.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        match *self {
            ThicknessProfile::Constant { tau } => (tau, 0.0),
            ThicknessProfile::Varying {
                tau_cent,
                tau_inc,
                tau_max,
                r_max,
                r_inc,
                c_max,
                c_inc,
            } => {
                let gauss = |x: f64, c: f64| (-(x * x) / (2.0 * c * c)).exp();
                let ridge = tau_max - tau_inc * gauss(r_max - r_inc, c_inc) - tau_cent;
                let g_inc = gauss(r - r_inc, c_inc);
                let g_max = gauss(r - r_max, c_max);
                let tau = tau_inc * g_inc + ridge * g_max + tau_cent;
                let dtau =
                    -tau_inc * g_inc * (r - r_inc) / (c_inc * c_inc) - ridge * g_max * (r - r_max) / (c_max * c_max);
                (tau, dtau)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ThicknessProfile::Constant { tau } => tau > 0.0,
            ThicknessProfile::Varying {
                tau_cent, c_max, c_inc, ..
            } => tau_cent > 0.0 && c_max > 0.0 && c_inc > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Geometry(format!("invalid lens thickness profile {self:?}")))
        }
    }
}

/// Undeformed lens: elliptic posterior curve plus thickness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensGeometry {
    /// Undeformed lens radius (cm).
    pub r_lens: f64,
    /// Apical radius of curvature (cm).
    pub k_lens: f64,
    /// Sagittal height at `r_lens` (cm, negative).
    pub z_lens: f64,
    pub b_lens: f64,
    pub thickness: ThicknessProfile,
}

impl LensGeometry {
    pub fn preset(preset: LensPreset, thickness: ThicknessProfile) -> Self {
        let (r, k, z) = preset.parameters();
        Self::new(r, k, z, thickness).expect("tabulated lens presets are valid")
    }

    pub fn new(r_lens: f64, k_lens: f64, z_lens: f64, thickness: ThicknessProfile) -> Result<Self> {
        thickness.validate()?;
        if !(r_lens > 0.0 && k_lens > 0.0 && z_lens < 0.0) {
            return Err(Error::Geometry(format!(
                "lens needs R_lens > 0, K_lens > 0, z_lens < 0 (got {r_lens}, {k_lens}, {z_lens})"
            )));
        }
        let b_lens = sagittal_ellipse_b(r_lens, k_lens, z_lens);
        if !(b_lens > 0.0) || k_lens * b_lens <= r_lens * r_lens {
            return Err(Error::Geometry(format!(
                "lens ellipse parameter b_lens = {b_lens} is not admissible for R_lens = {r_lens}"
            )));
        }
        Ok(Self {
            r_lens,
            k_lens,
            z_lens,
            b_lens,
            thickness,
        })
    }

    /// `(g, g', g'')` of the posterior curve.
    pub fn posterior(&self, r: f64) -> [f64; 3] {
        let a2 = self.k_lens * self.b_lens;
        let b = self.b_lens;
        let s = (1.0 - r * r / a2).sqrt();
        [-b + b * s, -b * r / (a2 * s), -b / (a2 * s * s * s)]
    }

    pub fn thickness_at(&self, r: f64) -> (f64, f64) {
        self.thickness.eval(r)
    }
}

/// `b = -z^2 K / (2 z K + R^2)`: the semi-axis making the ellipse with apical
/// radius `K` pass through `(R, z)`.
pub fn sagittal_ellipse_b(r_lens: f64, k_lens: f64, z_lens: f64) -> f64 {
    -z_lens * z_lens * k_lens / (2.0 * z_lens * k_lens + r_lens * r_lens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_reference_values() {
        let expected = [
            (LensPreset::Flat, 0.8490),
            (LensPreset::Average, 0.8094),
            (LensPreset::Steep, 0.7910),
        ];
        for (p, b) in expected {
            let lens = LensGeometry::preset(p, ThicknessProfile::constant_um(100.0));
            assert!((lens.b_lens - b).abs() < 1e-4, "{p:?}: {}", lens.b_lens);
            assert_eq!(lens.posterior(0.0)[0], 0.0);
            // the ellipse passes through the tabulated sagittal height
            assert!((lens.posterior(lens.r_lens)[0] - lens.z_lens).abs() < 1e-12);
        }
    }

    #[test]
    fn posterior_is_decreasing() {
        let lens = LensGeometry::preset(LensPreset::Average, ThicknessProfile::constant_um(100.0));
        let mut prev = lens.posterior(0.0)[0];
        for i in 1..=700 {
            let g = lens.posterior(i as f64 * 1e-3)[0];
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn constant_thickness() {
        let t = ThicknessProfile::constant_um(100.0);
        for r in [0.0, 0.3, 0.7] {
            assert_eq!(t.eval(r), (0.01, 0.0));
        }
    }

    #[test]
    fn varying_thickness_landmarks() {
        let t = ThicknessProfile::varying_default();
        let um = |r: f64| t.eval(r).0 * UM_PER_CM;
        assert!((um(0.623) - 269.0).abs() < 1.0, "{}", um(0.623));
        assert!((um(0.0) - 35.0).abs() < 1.0, "{}", um(0.0));
    }

    #[test]
    fn varying_thickness_derivative_matches_finite_difference() {
        let t = ThicknessProfile::varying_default();
        let h = 1e-6;
        for i in 1..70 {
            let r = i as f64 * 0.01;
            let fd = (t.eval(r + h).0 - t.eval(r - h).0) / (2.0 * h);
            let d = t.eval(r).1;
            let scale = d.abs().max(1e-3 * t.eval(r).0);
            assert!(((fd - d) / scale).abs() < 1e-6, "r={r}: {d} vs {fd}");
        }
    }

    #[test]
    fn invalid_lens_rejected() {
        assert!(LensGeometry::new(0.7, 0.87, 0.1, ThicknessProfile::constant_um(100.0)).is_err());
        assert!(LensGeometry::new(0.7, 0.87, -0.363, ThicknessProfile::constant_um(-1.0)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn thickness_is_positive_with_consistent_slope(r in 0.001f64..0.699) {
                for t in [ThicknessProfile::constant_um(100.0), ThicknessProfile::varying_default()] {
                    let (tau, dtau) = t.eval(r);
                    prop_assert!(tau > 0.0);
                    let d = 1e-6;
                    let fd = (t.eval(r + d).0 - t.eval(r - d).0) / (2.0 * d);
                    prop_assert!((fd - dtau).abs() < 1e-6);
                }
            }
        }
    }
}
