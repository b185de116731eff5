//! Elastic parameters of the eye: homogeneous, or a layered field with a stiff
//! outer shell, a linear ramp and a very soft centre.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::surface::{OcularSurface, LIMBUS_END, LIMBUS_START};
use crate::error::{Error, Result};

/// `(lambda, mu)` from Young's modulus and Poisson ratio.
pub fn lame_parameters(e: f64, poisson: f64) -> Result<(f64, f64)> {
    if !(e > 0.0) {
        return Err(Error::Material(format!("Young's modulus must be positive, got {e}")));
    }
    if poisson >= 0.5 {
        return Err(Error::Material(format!(
            "Poisson ratio {poisson} makes lambda singular (incompressible limit)"
        )));
    }
    if !(poisson > -1.0) {
        return Err(Error::Material(format!("Poisson ratio {poisson} is not admissible")));
    }
    let mu = e / (2.0 * (1.0 + poisson));
    let lambda = e * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
    Ok((lambda, mu))
}

/// Inputs of the layered modulus field, MPa and cm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayeredModulusParams {
    pub e_cornea: f64,
    pub e_sclera: f64,
    pub e_cent: f64,
    /// Thickness of the outer tissue layer.
    pub d_mid: f64,
    /// Radius of the soft centre around `(0, z_s)`.
    pub d_cent: f64,
}

impl LayeredModulusParams {
    /// Cornea 0.2 MPa, sclera five times stiffer, vitreous-like centre, for a
    /// domain of radius `r_eye`.
    pub fn standard(r_eye: f64) -> Self {
        let e_cornea = 0.2;
        Self {
            e_cornea,
            e_sclera: 5.0 * e_cornea,
            e_cent: 1.17e-6,
            d_mid: 0.05,
            d_cent: r_eye - 0.05 - 0.06,
        }
    }
}

/// Polar description `(rho, phi)` about the scleral centre, with the boundary
/// Γ_mid stored as `rho_mid(phi)`.
#[derive(Debug, Clone)]
pub struct LayeredModulus {
    pub params: LayeredModulusParams,
    pub center_z: f64,
    pub phi_limbus_start: f64,
    pub phi_limbus_end: f64,
    phi_knots: Vec<f64>,
    rho_knots: Vec<f64>,
    r_eye: f64,
    bottom_z: f64,
    // for domain checks
    surface: OcularSurface,
}

const GAMMA_MID_SAMPLES: usize = 2001;

impl LayeredModulus {
    pub fn new(surface: &OcularSurface, params: LayeredModulusParams) -> Result<Self> {
        let p = params;
        if !(p.e_cornea > 0.0 && p.e_sclera > 0.0 && p.e_cent > 0.0) {
            return Err(Error::Material("layered moduli must be positive".into()));
        }
        if !(p.d_mid > 0.0 && p.d_cent > 0.0) {
            return Err(Error::Material("layer thicknesses must be positive".into()));
        }
        let center_z = surface.sclera.z_s;
        let polar = |r: f64, z: f64| ((r).hypot(z - center_z), (z - center_z).atan2(r));

        // Γ_mid: Γ_out shifted inward along its unit normal.
        let total = surface.arc_length();
        let mut samples: Vec<(f64, f64)> = (0..GAMMA_MID_SAMPLES)
            .map(|i| {
                let s = total * i as f64 / (GAMMA_MID_SAMPLES - 1) as f64;
                let x = surface.point_at_arc(s);
                let n = surface.normal_at_arc(s);
                let (rho, phi) = polar(x[0] - p.d_mid * n[0], x[1] - p.d_mid * n[1]);
                (phi, rho)
            })
            .collect();
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        samples.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14);
        let (phi_knots, rho_knots): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();

        if rho_knots.iter().any(|&r| r <= p.d_cent) {
            return Err(Error::Material(format!(
                "centre radius d_cent = {} cm reaches the outer layer",
                p.d_cent
            )));
        }
        let phi_at = |r: f64| polar(r, surface.h_unchecked(r)).1;
        Ok(Self {
            params,
            center_z,
            phi_limbus_start: phi_at(LIMBUS_START),
            phi_limbus_end: phi_at(LIMBUS_END),
            phi_knots,
            rho_knots,
            r_eye: surface.r_eye(),
            bottom_z: surface.bottom_z(),
            surface: surface.clone(),
        })
    }

    /// `rho_mid(phi)`, linearly interpolated and clamped to the sampled range.
    pub fn rho_mid(&self, phi: f64) -> f64 {
        let k = &self.phi_knots;
        if phi <= k[0] {
            return self.rho_knots[0];
        }
        if phi >= k[k.len() - 1] {
            return self.rho_knots[k.len() - 1];
        }
        let i = k.partition_point(|&x| x <= phi) - 1;
        let t = (phi - k[i]) / (k[i + 1] - k[i]);
        self.rho_knots[i] + t * (self.rho_knots[i + 1] - self.rho_knots[i])
    }

    /// Points of Γ_mid in `(r, z)`.
    pub fn gamma_mid(&self) -> Vec<[f64; 2]> {
        self.phi_knots
            .iter()
            .zip(&self.rho_knots)
            .map(|(&phi, &rho)| [rho * phi.cos(), self.center_z + rho * phi.sin()])
            .collect()
    }

    /// Outer-layer modulus: cornea, angular blend across the limbus, sclera.
    pub fn outer_modulus(&self, phi: f64) -> f64 {
        let p = &self.params;
        let (a, b) = (self.phi_limbus_start, self.phi_limbus_end);
        if phi > a {
            p.e_cornea
        } else if phi < b {
            p.e_sclera
        } else {
            (p.e_cornea - p.e_sclera) / (a - b) * (phi - a) + p.e_cornea
        }
    }

    pub(crate) fn modulus_unchecked(&self, r: f64, z: f64) -> f64 {
        let dz = z - self.center_z;
        let rho = r.hypot(dz);
        let p = &self.params;
        if rho < p.d_cent {
            return p.e_cent;
        }
        let phi = if rho == 0.0 { FRAC_PI_2 } else { dz.atan2(r) };
        let rho_mid = self.rho_mid(phi);
        let e_out = self.outer_modulus(phi);
        if rho >= rho_mid {
            e_out
        } else {
            (p.e_cent - e_out) / (p.d_cent - rho_mid) * (rho - p.d_cent) + p.e_cent
        }
    }
}

#[derive(Debug, Clone)]
pub enum ModulusField {
    Homogeneous { e: f64 },
    Layered(Box<LayeredModulus>),
}

/// Young's modulus field plus the (uniform) Poisson ratio of the eye.
#[derive(Debug, Clone)]
pub struct MaterialField {
    pub modulus: ModulusField,
    pub poisson: f64,
}

impl MaterialField {
    pub fn homogeneous(e: f64, poisson: f64) -> Result<Self> {
        lame_parameters(e, poisson)?;
        Ok(Self {
            modulus: ModulusField::Homogeneous { e },
            poisson,
        })
    }

    pub fn layered(surface: &OcularSurface, params: LayeredModulusParams, poisson: f64) -> Result<Self> {
        lame_parameters(params.e_cornea, poisson)?;
        Ok(Self {
            modulus: ModulusField::Layered(Box::new(LayeredModulus::new(surface, params)?)),
            poisson,
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self.modulus, ModulusField::Homogeneous { .. })
    }

    /// Young's modulus at `(r, z)`, rejecting points outside Ω.
    pub fn youngs_modulus(&self, r: f64, z: f64) -> Result<f64> {
        match &self.modulus {
            ModulusField::Homogeneous { e } => Ok(*e),
            ModulusField::Layered(field) => {
                if !field.surface.contains(r, z, 1e-9) {
                    return Err(Error::Domain {
                        quantity: "z",
                        value: z,
                        min: field.bottom_z,
                        max: field.surface.h_unchecked(r.clamp(0.0, field.r_eye)),
                    });
                }
                Ok(field.modulus_unchecked(r, z))
            }
        }
    }

    /// Modulus used at quadrature points; curved elements can poke out of Ω by
    /// rounding-level amounts, so no domain check here.
    pub(crate) fn modulus_at(&self, r: f64, z: f64) -> f64 {
        match &self.modulus {
            ModulusField::Homogeneous { e } => *e,
            ModulusField::Layered(field) => field.modulus_unchecked(r, z),
        }
    }

    pub fn lame_at(&self, r: f64, z: f64) -> Result<(f64, f64)> {
        lame_parameters(self.modulus_at(r, z), self.poisson)
    }
}
