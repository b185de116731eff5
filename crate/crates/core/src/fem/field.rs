use std::sync::Arc;

use super::quadrature::edge_shape;
use crate::geometry::OcularSurface;
use crate::mesh::{p2_shape, Mesh};

/// Nodal displacements `(u_r, u_z)` in cm at every P2 node.
#[derive(Debug, Clone)]
pub struct DisplacementField {
    pub mesh: Arc<Mesh>,
    /// Interleaved `[u_r0, u_z0, u_r1, ...]`.
    pub values: Vec<f64>,
}

/// Displacement on Γ_out at one reference radius; lengths in cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub r: f64,
    pub z: f64,
    pub u_r: f64,
    pub u_z: f64,
    /// Component along the outward normal of the reference surface.
    pub u_n: f64,
    pub norm: f64,
}

impl DisplacementField {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), 2 * mesh.n_nodes());
        Self { mesh, values }
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = 2 * mesh.n_nodes();
        Self::new(mesh, vec![0.0; n])
    }

    /// Interpolates `f(r, z)` at every node.
    pub fn from_fn<F: Fn([f64; 2]) -> [f64; 2]>(mesh: Arc<Mesh>, f: F) -> Self {
        let values = mesh.nodes.iter().flat_map(|&p| f(p)).collect();
        Self::new(mesh, values)
    }

    pub fn node(&self, i: usize) -> [f64; 2] {
        [self.values[2 * i], self.values[2 * i + 1]]
    }

    /// Largest nodal displacement magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.values
            .chunks_exact(2)
            .map(|c| c[0].hypot(c[1]))
            .fold(0.0, f64::max)
    }

    /// Largest nodal magnitude of `self - other`.
    pub fn max_difference(&self, other: &DisplacementField) -> f64 {
        self.values
            .chunks_exact(2)
            .zip(other.values.chunks_exact(2))
            .map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1]))
            .fold(0.0, f64::max)
    }

    /// `self + w (other - self)`.
    pub fn relaxed_towards(&self, other: &DisplacementField, w: f64) -> DisplacementField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + w * (b - a))
            .collect();
        DisplacementField::new(self.mesh.clone(), values)
    }

    pub fn element_values(&self, t: usize) -> [[f64; 2]; 6] {
        self.mesh.triangle_nodes(t).map(|n| self.node(n))
    }

    pub fn eval_in_element(&self, t: usize, xi: f64, eta: f64) -> [f64; 2] {
        let (n, _) = p2_shape(xi, eta);
        let u = self.element_values(t);
        let mut out = [0.0; 2];
        for k in 0..6 {
            out[0] += n[k] * u[k][0];
            out[1] += n[k] * u[k][1];
        }
        out
    }

    /// Trace on Γ_out at arc coordinate `s`.
    pub fn surface_at_arc(&self, s: f64) -> [f64; 2] {
        let (be, t) = self.mesh.out_edge_at_arc(s);
        let nodes = [be.a, self.mesh.edge_node(be.edge), be.b];
        let (n, _) = edge_shape(t);
        let mut out = [0.0; 2];
        for k in 0..3 {
            let u = self.node(nodes[k]);
            out[0] += n[k] * u[0];
            out[1] += n[k] * u[1];
        }
        out
    }

    /// Trace on Γ_out above reference radius `r`.
    pub fn surface_at_r(&self, surface: &OcularSurface, r: f64) -> [f64; 2] {
        self.surface_at_arc(surface.arc_of_r(r))
    }

    pub fn surface_sample(&self, surface: &OcularSurface, r: f64) -> SurfaceSample {
        let [u_r, u_z] = self.surface_at_r(surface, r);
        let n = surface.normal_at_r(r);
        SurfaceSample {
            r,
            z: surface.h_unchecked(r),
            u_r,
            u_z,
            u_n: u_r * n[0] + u_z * n[1],
            norm: u_r.hypot(u_z),
        }
    }

    /// Surface displacement at `count` uniformly spaced radii on `[0, R_eye]`.
    pub fn surface_profile(&self, surface: &OcularSurface, count: usize) -> Vec<SurfaceSample> {
        let r_max = surface.r_eye();
        (0..count)
            .map(|i| self.surface_sample(surface, r_max * i as f64 / (count - 1) as f64))
            .collect()
    }
}
