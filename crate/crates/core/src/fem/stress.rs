//! Stress recovery by r-weighted L2 projection onto vertex (P1) values, and
//! derived scalar fields.

use std::sync::Arc;

use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use rayon::prelude::*;

use super::element::{quadrature_points, strain_at, stress_from_strain};
use super::field::DisplacementField;
use crate::error::{Error, Result};
use crate::geometry::{lame_parameters, MaterialField, OcularSurface};
use crate::mesh::{Mesh, PointLocator};

/// Vertex values of `[S_rr, S_zz, S_tt, S_rz]` in MPa.
#[derive(Debug, Clone)]
pub struct StressField {
    pub mesh: Arc<Mesh>,
    pub values: Vec<[f64; 4]>,
}

/// Component-wise von Mises stress of `[S_rr, S_zz, S_tt, S_rz]`.
pub fn von_mises(s: [f64; 4]) -> f64 {
    let mean = (s[0] + s[1] + s[2]) / 3.0;
    let d = [s[0] - mean, s[1] - mean, s[2] - mean];
    let contraction = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + 2.0 * s[3] * s[3];
    (1.5 * contraction).sqrt()
}

/// `t . S . n` for in-plane unit vectors `t`, `n` in `(r, z)` components.
pub fn traction_component(s: [f64; 4], t: [f64; 2], n: [f64; 2]) -> f64 {
    t[0] * n[0] * s[0] + (t[0] * n[1] + t[1] * n[0]) * s[3] + t[1] * n[1] * s[1]
}

/// Local P1 mass block and load rows of one element.
type ElementProjection = ([[f64; 3]; 3], [[f64; 4]; 3]);

/// Projects the element stresses of `u` onto continuous vertex values.
pub fn recover_stresses(u: &DisplacementField, material: &MaterialField) -> Result<StressField> {
    let mesh = &u.mesh;
    let nv = mesh.n_vertices();
    let per_element: Vec<ElementProjection> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|t| {
            let ue = u.element_values(t);
            let mut m = [[0.0; 3]; 3];
            let mut b = [[0.0; 4]; 3];
            for p in quadrature_points(&mesh.triangle_coords(t))? {
                let e = material.modulus_at(p.x[0], p.x[1]);
                let (lambda, mu) = lame_parameters(e, material.poisson)?;
                let s = stress_from_strain(strain_at(&p, &ue), lambda, mu);
                let phi = p1_at(&p.n);
                for i in 0..3 {
                    for j in 0..3 {
                        m[i][j] += p.weight * phi[i] * phi[j];
                    }
                    for c in 0..4 {
                        b[i][c] += p.weight * phi[i] * s[c];
                    }
                }
            }
            Ok((m, b))
        })
        .collect::<Result<_>>()?;

    let mut triplets = Vec::with_capacity(9 * mesh.n_triangles());
    let mut rhs = Mat::<f64>::zeros(nv, 4);
    for (t, (m, b)) in per_element.iter().enumerate() {
        let v = mesh.triangles[t];
        for i in 0..3 {
            for j in 0..3 {
                if v[i] >= v[j] {
                    triplets.push(Triplet::new(v[i], v[j], m[i][j]));
                }
            }
            for c in 0..4 {
                rhs[(v[i], c)] += b[i][c];
            }
        }
    }
    let mass = SparseColMat::<usize, f64>::try_new_from_triplets(nv, nv, &triplets)
        .map_err(|e| Error::Assembly(format!("mass matrix: {e:?}")))?;
    let llt = mass
        .sp_cholesky(Side::Lower)
        .map_err(|e| Error::Solver(format!("mass matrix factorisation: {e:?}")))?;
    use faer::linalg::solvers::Solve;
    let sol = llt.solve(&rhs);
    let values = (0..nv)
        .map(|i| [sol[(i, 0)], sol[(i, 1)], sol[(i, 2)], sol[(i, 3)]])
        .collect();
    Ok(StressField {
        mesh: u.mesh.clone(),
        values,
    })
}

/// Linear (vertex) shape values recovered from the quadratic ones:
/// `L_i = N_i + (N_ij + N_ki) / 2`.
fn p1_at(n: &[f64; 6]) -> [f64; 3] {
    [
        n[0] + 0.5 * (n[3] + n[5]),
        n[1] + 0.5 * (n[3] + n[4]),
        n[2] + 0.5 * (n[4] + n[5]),
    ]
}

/// Average of a scalar over the inward normal segment below one surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripValue {
    pub r: f64,
    pub mean: f64,
    /// Samples that fell outside Ω and were skipped.
    pub clipped: usize,
}

impl StressField {
    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.n_vertices();
        Self {
            mesh,
            values: vec![[0.0; 4]; n],
        }
    }

    pub fn eval_in_element(&self, t: usize, xi: f64, eta: f64) -> [f64; 4] {
        let v = self.mesh.triangles[t];
        let l = [1.0 - xi - eta, xi, eta];
        let mut out = [0.0; 4];
        for k in 0..3 {
            for c in 0..4 {
                out[c] += l[k] * self.values[v[k]][c];
            }
        }
        out
    }

    pub fn eval_at(&self, locator: &PointLocator, p: [f64; 2]) -> Option<[f64; 4]> {
        let (t, xi, eta) = locator.locate(&self.mesh, p)?;
        Some(self.eval_in_element(t, xi, eta))
    }

    pub fn von_mises_vertices(&self) -> Vec<f64> {
        self.values.iter().map(|&s| von_mises(s)).collect()
    }

    /// Largest absolute value of any stored component.
    pub fn max_abs_component(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Average of `f(S, t, n)` over `count` equally spaced depths in
    /// `[0, depth]` along the inward normal below each radius in `radii`.
    /// Depth 0 gives the surface trace.
    pub fn strip_average<F>(
        &self,
        surface: &OcularSurface,
        locator: &PointLocator,
        radii: &[f64],
        depth: f64,
        count: usize,
        f: F,
    ) -> Vec<StripValue>
    where
        F: Fn([f64; 4], [f64; 2], [f64; 2]) -> f64 + Sync,
    {
        radii
            .par_iter()
            .map(|&r| {
                let base = [r, surface.h_unchecked(r)];
                let n = surface.normal_at_r(r);
                let t = [n[1], -n[0]];
                let mut sum = 0.0;
                let mut used = 0;
                let steps = count.max(1);
                for k in 0..steps {
                    let d = if steps == 1 {
                        0.0
                    } else {
                        depth * k as f64 / (steps - 1) as f64
                    };
                    let p = [base[0] - d * n[0], base[1] - d * n[1]];
                    if let Some(s) = self.eval_at(locator, p) {
                        sum += f(s, t, n);
                        used += 1;
                    }
                }
                StripValue {
                    r,
                    mean: if used > 0 { sum / used as f64 } else { f64::NAN },
                    clipped: steps - used,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn von_mises_identities() {
        assert!((von_mises([3.0, 0.0, 0.0, 0.0]) - 3.0).abs() < 1e-15);
        assert!((von_mises([-2.5, 0.0, 0.0, 0.0]) - 2.5).abs() < 1e-15);
        assert!(von_mises([1.7, 1.7, 1.7, 0.0]).abs() < 1e-15);
        // pure shear s: sqrt(3) s
        assert!((von_mises([0.0, 0.0, 0.0, 2.0]) - 2.0 * 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn traction_component_flips_with_normal() {
        let s = [0.3, -0.2, 0.1, 0.4];
        let n = [0.6, 0.8];
        let t = [0.8, -0.6];
        let a = traction_component(s, t, n);
        let b = traction_component(s, t, [-n[0], -n[1]]);
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn p1_shapes_partition_unity() {
        let (n, _) = crate::mesh::p2_shape(0.2, 0.3);
        let l = p1_at(&n);
        assert!((l[0] - 0.5).abs() < 1e-14 && (l[1] - 0.2).abs() < 1e-14 && (l[2] - 0.3).abs() < 1e-14);
    }

    #[test]
    fn linear_field_recovers_exact_stress() {
        use crate::geometry::{EyePreset, OcularSurface};
        use crate::mesh::{generate_mesh, MeshParams};
        let s = OcularSurface::preset(EyePreset::Average);
        let mesh = Arc::new(generate_mesh(&s, &MeshParams::with_target(300)).unwrap());
        let (e, nu) = (0.2, 0.3);
        let material = MaterialField::homogeneous(e, nu).unwrap();
        let (a, b, d) = (2e-4, -3e-4, 5e-4);
        let u = DisplacementField::from_fn(mesh, |[r, z]| [a * r, b * z + d * r]);
        let stress = recover_stresses(&u, &material).unwrap();
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        let tr = 2.0 * a + b;
        let exact = [
            lambda * tr + 2.0 * mu * a,
            lambda * tr + 2.0 * mu * b,
            lambda * tr + 2.0 * mu * a,
            mu * d,
        ];
        for v in &stress.values {
            for c in 0..4 {
                assert!(
                    (v[c] - exact[c]).abs() < 1e-8 * exact[c].abs().max(1e-4),
                    "{v:?} vs {exact:?}"
                );
            }
        }
    }
}
