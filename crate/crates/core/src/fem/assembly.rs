//! Global stiffness assembly, loads and the factored linear system.

use std::sync::Arc;

use faer::sparse::linalg::solvers::Llt;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use rayon::prelude::*;

use super::element::{element_stiffness, quadrature_points};
use super::field::DisplacementField;
use super::quadrature::{edge_shape, GAUSS_4};
use crate::error::{Error, Result};
use crate::geometry::MaterialField;
use crate::mesh::{BoundaryEdge, BoundaryTag, Mesh};
use crate::spline::{CubicSpline, SplineEnd};

/// External pressure on Γ_out as a function of the reference radius: a cubic
/// spline through samples on `[0, r_end]`, zero beyond `r_end`.
#[derive(Debug, Clone)]
pub struct SurfaceTraction {
    spline: Option<CubicSpline>,
    r_end: f64,
    scale: f64,
}

impl SurfaceTraction {
    pub fn zero() -> Self {
        Self {
            spline: None,
            r_end: 0.0,
            scale: 0.0,
        }
    }

    /// Pressure samples `p[i]` at increasing radii `r[i]`, with `r[0] = 0`.
    /// The pressure is even in `r`, so the spline has zero slope at the axis.
    pub fn from_samples(r: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        let r_end = *r
            .last()
            .ok_or_else(|| Error::Consistency("empty traction samples".into()))?;
        let spline = CubicSpline::new(r, p, SplineEnd::Clamped(0.0), SplineEnd::Natural)?;
        Ok(Self {
            spline: Some(spline),
            r_end,
            scale: 1.0,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            scale: self.scale * factor,
            ..self.clone()
        }
    }

    /// End of the loaded region (where the pressure jumps to zero).
    pub fn support_end(&self) -> f64 {
        self.r_end
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.spline {
            Some(s) if r <= self.r_end => self.scale * s.value(r.max(0.0)),
            _ => 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.spline.is_none() || self.scale == 0.0
    }
}

/// Right-hand side over all `2 * n_nodes` displacement components.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadVector {
    pub values: Vec<f64>,
}

/// Point on a curved Γ_out edge: position, `(dr/dt, dz/dt)`, shape values.
fn edge_point(mesh: &Mesh, be: &BoundaryEdge, t: f64) -> ([f64; 2], [f64; 2], [f64; 3], [usize; 3]) {
    let nodes = [be.a, mesh.edge_node(be.edge), be.b];
    let (n, d) = edge_shape(t);
    let mut x = [0.0; 2];
    let mut dx = [0.0; 2];
    for k in 0..3 {
        for c in 0..2 {
            x[c] += n[k] * mesh.nodes[nodes[k]][c];
            dx[c] += d[k] * mesh.nodes[nodes[k]][c];
        }
    }
    (x, dx, n, nodes)
}

impl LoadVector {
    pub fn zeros(mesh: &Mesh) -> Self {
        Self {
            values: vec![0.0; 2 * mesh.n_nodes()],
        }
    }

    /// Adds `-int P_out (w . n) r ds` over Γ_out. Edges containing the end of
    /// the loaded region are split there so the jump is integrated exactly.
    pub fn add_pressure(&mut self, mesh: &Mesh, traction: &SurfaceTraction) {
        if traction.is_zero() {
            return;
        }
        let r_end = traction.support_end();
        for be in mesh.out_edges() {
            let r0 = mesh.nodes[be.a][0];
            let r1 = mesh.nodes[be.b][0];
            if r0 > r_end {
                continue;
            }
            let pieces: Vec<(f64, f64)> = if r1 > r_end {
                let t = split_at_radius(mesh, be, r_end);
                vec![(0.0, t), (t, 1.0)]
            } else {
                vec![(0.0, 1.0)]
            };
            for (ta, tb) in pieces {
                for &(g, w) in &GAUSS_4 {
                    let t = ta + (tb - ta) * g;
                    let (x, dx, n, nodes) = edge_point(mesh, be, t);
                    // n ds = (-dz, dr) dt for an apex-outward edge
                    let p = traction.eval(x[0]);
                    let f = -p * x[0] * w * (tb - ta);
                    for k in 0..3 {
                        self.values[2 * nodes[k]] += f * n[k] * -dx[1];
                        self.values[2 * nodes[k] + 1] += f * n[k] * dx[0];
                    }
                }
            }
        }
    }

    /// Adds `int g . w r ds` over Γ_out for a traction vector `g(r, z, n)`.
    pub fn add_boundary_traction<F>(&mut self, mesh: &Mesh, g: F)
    where
        F: Fn([f64; 2], [f64; 2]) -> [f64; 2],
    {
        for be in mesh.out_edges() {
            for &(t, w) in &GAUSS_4 {
                let (x, dx, n, nodes) = edge_point(mesh, be, t);
                let len = dx[0].hypot(dx[1]);
                let normal = [-dx[1] / len, dx[0] / len];
                let gv = g(x, normal);
                for k in 0..3 {
                    for c in 0..2 {
                        self.values[2 * nodes[k] + c] += gv[c] * n[k] * x[0] * len * w;
                    }
                }
            }
        }
    }

    /// Adds `int f . w r dA` for a body force `f(r, z)`.
    pub fn add_body_force<F>(&mut self, mesh: &Mesh, f: F) -> Result<()>
    where
        F: Fn([f64; 2]) -> [f64; 2],
    {
        for t in 0..mesh.n_triangles() {
            let nodes = mesh.triangle_nodes(t);
            for p in quadrature_points(&mesh.triangle_coords(t))? {
                let fv = f(p.x);
                for k in 0..6 {
                    for c in 0..2 {
                        self.values[2 * nodes[k] + c] += p.weight * fv[c] * p.n[k];
                    }
                }
            }
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Local edge coordinate where the curved edge crosses radius `r`.
fn split_at_radius(mesh: &Mesh, be: &BoundaryEdge, r: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if edge_point(mesh, be, mid).0[0] < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Equation numbering after eliminating `u_r` on the axis and `u_z` on the cut.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub free: Vec<Option<usize>>,
    pub n_free: usize,
}

impl DofMap {
    pub fn new(mesh: &Mesh) -> Self {
        let mut fixed = vec![false; 2 * mesh.n_nodes()];
        for n in mesh.boundary_nodes(BoundaryTag::InV) {
            fixed[2 * n] = true;
        }
        for n in mesh.boundary_nodes(BoundaryTag::InH) {
            fixed[2 * n + 1] = true;
        }
        let mut n_free = 0;
        let free = fixed
            .iter()
            .map(|&f| {
                if f {
                    None
                } else {
                    n_free += 1;
                    Some(n_free - 1)
                }
            })
            .collect();
        Self { free, n_free }
    }
}

/// Factored stiffness matrix for one mesh and material; reused for every load.
pub struct ElasticSystem {
    pub mesh: Arc<Mesh>,
    pub material: MaterialField,
    pub dofs: DofMap,
    /// Lower triangle of the reduced stiffness matrix.
    matrix: SparseColMat<usize, f64>,
    llt: Llt<usize, f64>,
}

impl std::fmt::Debug for ElasticSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ElasticSystem")
            .field("n_free", &self.dofs.n_free)
            .field("nnz", &self.matrix.compute_nnz())
            .finish()
    }
}

/// Element matrices for all triangles, computed in parallel, in element order.
pub fn element_matrices(mesh: &Mesh, material: &MaterialField) -> Result<Vec<[[f64; 12]; 12]>> {
    (0..mesh.n_triangles())
        .into_par_iter()
        .map(|t| element_stiffness(&mesh.triangle_coords(t), material))
        .collect()
}

impl ElasticSystem {
    pub fn assemble(mesh: Arc<Mesh>, material: &MaterialField) -> Result<Self> {
        let dofs = DofMap::new(&mesh);
        let elements = element_matrices(&mesh, material)?;
        let mut triplets = Vec::with_capacity(mesh.n_triangles() * 78);
        for (t, ke) in elements.iter().enumerate() {
            let nodes = mesh.triangle_nodes(t);
            let global: Vec<Option<usize>> = (0..12).map(|a| dofs.free[2 * nodes[a / 2] + a % 2]).collect();
            for a in 0..12 {
                let Some(i) = global[a] else { continue };
                for c in 0..12 {
                    let Some(j) = global[c] else { continue };
                    if i >= j {
                        triplets.push(Triplet::new(i, j, ke[a][c]));
                    }
                }
            }
        }
        let n = dofs.n_free;
        let matrix = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::Assembly(format!("sparse matrix construction failed: {e:?}")))?;
        let llt = matrix
            .sp_cholesky(Side::Lower)
            .map_err(|e| Error::Solver(format!("Cholesky factorisation failed: {e:?}")))?;
        Ok(Self {
            mesh,
            material: material.clone(),
            dofs,
            matrix,
            llt,
        })
    }

    pub fn n_free(&self) -> usize {
        self.dofs.n_free
    }

    /// Lower-triangle entries `(row, col, value)` of the reduced matrix.
    pub fn matrix_entries(&self) -> Vec<(usize, usize, f64)> {
        let m = self.matrix.as_ref();
        let mut out = Vec::new();
        for j in 0..m.ncols() {
            let rows = m.row_idx_of_col_raw(j);
            let vals = m.val_of_col(j);
            for (&i, &v) in rows.iter().zip(vals) {
                out.push((i, j, v));
            }
        }
        out
    }

    /// `y = A x` using the stored lower triangle.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for (i, j, v) in self.matrix_entries() {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
        y
    }

    pub fn reduce(&self, load: &LoadVector) -> Vec<f64> {
        let mut b = vec![0.0; self.dofs.n_free];
        for (g, slot) in self.dofs.free.iter().enumerate() {
            if let Some(i) = slot {
                b[*i] = load.values[g];
            }
        }
        b
    }

    pub fn solve(&self, load: &LoadVector) -> Result<DisplacementField> {
        use faer::linalg::solvers::Solve;
        let b = self.reduce(load);
        let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut values = vec![0.0; 2 * self.mesh.n_nodes()];
        if bnorm == 0.0 {
            return Ok(DisplacementField::new(self.mesh.clone(), values));
        }
        let solve = |v: &[f64]| {
            let sol = self.llt.solve(Mat::<f64>::from_fn(v.len(), 1, |i, _| v[i]));
            (0..v.len()).map(|i| sol[(i, 0)]).collect::<Vec<f64>>()
        };
        let residual = |x: &[f64]| -> Vec<f64> { self.apply(x).iter().zip(&b).map(|(a, c)| c - a).collect() };
        let mut x = solve(&b);
        // one refinement step; strongly layered moduli cost a few digits
        let d = solve(&residual(&x));
        x.iter_mut().zip(&d).for_each(|(x, d)| *x += d);
        let res = residual(&x).iter().map(|v| v * v).sum::<f64>().sqrt() / bnorm;
        if !(res < 1e-8) {
            return Err(Error::Solver(format!("relative residual {res:e} after direct solve")));
        }
        for (g, slot) in self.dofs.free.iter().enumerate() {
            if let Some(i) = slot {
                values[g] = x[*i];
            }
        }
        Ok(DisplacementField::new(self.mesh.clone(), values))
    }

    pub fn solve_traction(&self, traction: &SurfaceTraction) -> Result<DisplacementField> {
        let mut load = LoadVector::zeros(&self.mesh);
        load.add_pressure(&self.mesh, traction);
        self.solve(&load)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{EyePreset, OcularSurface};
    use crate::mesh::{generate_mesh, MeshParams};

    fn small() -> (OcularSurface, Arc<Mesh>) {
        let s = OcularSurface::preset(EyePreset::Average);
        let m = generate_mesh(&s, &MeshParams::with_target(300)).unwrap();
        (s, Arc::new(m))
    }

    #[test]
    fn zero_traction_gives_zero_load_and_displacement() {
        let (_, mesh) = small();
        let mut load = LoadVector::zeros(&mesh);
        load.add_pressure(&mesh, &SurfaceTraction::zero());
        assert!(load.values.iter().all(|&v| v == 0.0));
        let sys = ElasticSystem::assemble(mesh, &MaterialField::homogeneous(0.2, 0.49).unwrap()).unwrap();
        let u = sys.solve(&load).unwrap();
        assert!(u.max_magnitude() < 1e-14);
    }

    #[test]
    fn uniform_pressure_resultant() {
        // Uniform p on the whole surface: z-resultant of -p n r ds equals
        // -p * R_eye^2 / 2 (projected area), r-component is p times the
        // integral of h' r dr, which is checked via the divergence theorem.
        let (s, mesh) = small();
        let r = vec![0.0, 0.5, 1.0, s.r_eye()];
        let t = SurfaceTraction::from_samples(r, vec![2.0; 4]).unwrap();
        let mut load = LoadVector::zeros(&mesh);
        load.add_pressure(&mesh, &t);
        let fz: f64 = load.values.iter().skip(1).step_by(2).sum();
        let expect = -2.0 * s.r_eye().powi(2) / 2.0;
        assert!((fz - expect).abs() < 1e-6 * expect.abs(), "{fz} vs {expect}");
    }

    #[test]
    fn matrix_is_symmetric_positive() {
        let (_, mesh) = small();
        let sys = ElasticSystem::assemble(mesh, &MaterialField::homogeneous(0.2, 0.49).unwrap()).unwrap();
        for (i, j, v) in sys.matrix_entries() {
            if i == j {
                assert!(v > 0.0);
            }
        }
    }

    #[test]
    fn solution_is_linear_in_the_load() {
        let (_, mesh) = small();
        let sys = ElasticSystem::assemble(mesh, &MaterialField::homogeneous(0.2, 0.49).unwrap()).unwrap();
        let r: Vec<f64> = (0..=20).map(|i| 0.03 * i as f64).collect();
        let a = SurfaceTraction::from_samples(r.clone(), r.iter().map(|r| 1e-3 * (1.0 - r)).collect()).unwrap();
        let b = SurfaceTraction::from_samples(r.clone(), r.iter().map(|r| -4e-4 * r * r).collect()).unwrap();
        let both =
            SurfaceTraction::from_samples(r.clone(), r.iter().map(|r| 1e-3 * (1.0 - r) - 4e-4 * r * r).collect())
                .unwrap();
        let ua = sys.solve_traction(&a).unwrap();
        let ub = sys.solve_traction(&b).unwrap();
        let uab = sys.solve_traction(&both).unwrap();
        let scale = uab.max_magnitude();
        for i in 0..uab.values.len() {
            assert!((uab.values[i] - ua.values[i] - ub.values[i]).abs() < 1e-9 * scale);
        }
        let u3 = sys.solve_traction(&a.scaled(3.0)).unwrap();
        for i in 0..u3.values.len() {
            assert!((u3.values[i] - 3.0 * ua.values[i]).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn uniform_layered_field_matches_homogeneous() {
        use crate::geometry::LayeredModulusParams;
        let (s, mesh) = small();
        let params = LayeredModulusParams {
            e_cornea: 0.2,
            e_sclera: 0.2,
            e_cent: 0.2,
            ..LayeredModulusParams::standard(s.r_eye())
        };
        let load = SurfaceTraction::from_samples(vec![0.0, 0.3, 0.6], vec![1e-3, 8e-4, 2e-4]).unwrap();
        let homog = ElasticSystem::assemble(mesh.clone(), &MaterialField::homogeneous(0.2, 0.49).unwrap()).unwrap();
        let layered = ElasticSystem::assemble(mesh, &MaterialField::layered(&s, params, 0.49).unwrap()).unwrap();
        let a = homog.solve_traction(&load).unwrap();
        let b = layered.solve_traction(&load).unwrap();
        assert!(a.max_difference(&b) < 1e-10 * a.max_magnitude());
    }
}
