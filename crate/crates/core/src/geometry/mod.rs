//! Analytic ocular surface, lens shape and elastic material fields.

pub mod lens;
pub mod material;
pub mod surface;

pub use lens::{LensGeometry, LensPreset, ThicknessProfile};
pub use material::{lame_parameters, LayeredModulus, LayeredModulusParams, MaterialField, ModulusField};
pub use surface::{EyePreset, OcularSurface, SurfaceRegion, LIMBUS_END, LIMBUS_START};

/// A curve `z = f(r)` the lens can be conformed to.
pub trait SurfaceProfile: Sync {
    fn height(&self, r: f64) -> f64;
    fn slope(&self, r: f64) -> f64;
    /// Largest radius at which the profile is defined.
    fn max_radius(&self) -> f64;
}

impl SurfaceProfile for OcularSurface {
    fn height(&self, r: f64) -> f64 {
        self.h_unchecked(r)
    }

    fn slope(&self, r: f64) -> f64 {
        self.slope_unchecked(r)
    }

    fn max_radius(&self) -> f64 {
        self.r_eye()
    }
}

/// The posterior lens curve as a surface: the conforming-identity test case.
impl SurfaceProfile for LensGeometry {
    fn height(&self, r: f64) -> f64 {
        self.posterior(r)[0]
    }

    fn slope(&self, r: f64) -> f64 {
        self.posterior(r)[1]
    }

    fn max_radius(&self) -> f64 {
        (self.k_lens * self.b_lens).sqrt() * (1.0 - 1e-9)
    }
}
