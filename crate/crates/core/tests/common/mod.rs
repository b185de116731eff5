//! Shared helpers for the integration tests.
//!
//! Manufactured solution for the axisymmetric elasticity solver.
//!
//! u_r = a sin(r) cos(z - z_c), u_z = b sin(z - z_c) cos(r) satisfies the
//! axis and cut conditions exactly and has no shear on the cut, so the body
//! force and the Γ_out traction built from it give a problem whose discrete
//! solution converges to it.

#![allow(dead_code)]

use std::sync::Arc;

use lenseye::fem::element::quadrature_points;
use lenseye::fem::{ElasticSystem, LoadVector};
use lenseye::geometry::{EyePreset, MaterialField, OcularSurface};
use lenseye::mesh::{generate_mesh, Mesh, MeshParams};

const A: f64 = 1e-3;
const B: f64 = -7e-4;
const E: f64 = 1.0;
const NU: f64 = 0.3;

fn lame() -> (f64, f64) {
    (E * NU / ((1.0 + NU) * (1.0 - 2.0 * NU)), E / (2.0 * (1.0 + NU)))
}

fn exact(z_c: f64, [r, z]: [f64; 2]) -> [f64; 2] {
    let s = z - z_c;
    [A * r.sin() * s.cos(), B * s.sin() * r.cos()]
}

/// `[S_rr, S_zz, S_tt, S_rz]` from the analytic gradients.
fn stress(z_c: f64, [r, z]: [f64; 2]) -> [f64; 4] {
    let s = z - z_c;
    let (lambda, mu) = lame();
    let e_rr = A * r.cos() * s.cos();
    let e_zz = B * s.cos() * r.cos();
    let e_tt = if r > 0.0 { A * r.sin() / r * s.cos() } else { e_rr };
    let g_rz = -A * r.sin() * s.sin() - B * s.sin() * r.sin();
    let tr = e_rr + e_zz + e_tt;
    [
        lambda * tr + 2.0 * mu * e_rr,
        lambda * tr + 2.0 * mu * e_zz,
        lambda * tr + 2.0 * mu * e_tt,
        mu * g_rz,
    ]
}

/// `-div S` in cylindrical coordinates, by central differences of `stress`.
fn body_force(z_c: f64, x: [f64; 2]) -> [f64; 2] {
    let h = 1e-5;
    let d = |dr: f64, dz: f64| stress(z_c, [x[0] + dr, x[1] + dz]);
    let (rp, rm, zp, zm) = (d(h, 0.0), d(-h, 0.0), d(0.0, h), d(0.0, -h));
    let s = stress(z_c, x);
    let r = x[0];
    let div_r = (rp[0] - rm[0]) / (2.0 * h) + (zp[3] - zm[3]) / (2.0 * h) + (s[0] - s[2]) / r;
    let div_z = (rp[3] - rm[3]) / (2.0 * h) + (zp[1] - zm[1]) / (2.0 * h) + s[3] / r;
    [-div_r, -div_z]
}

/// r-weighted L2 norm of the error and of the exact field.
fn l2_error(mesh: &Mesh, values: &[f64], z_c: f64) -> (f64, f64) {
    let (mut err, mut norm) = (0.0, 0.0);
    for t in 0..mesh.n_triangles() {
        let nodes = mesh.triangle_nodes(t);
        for p in quadrature_points(&mesh.triangle_coords(t)).unwrap() {
            let mut uh = [0.0; 2];
            for k in 0..6 {
                uh[0] += p.n[k] * values[2 * nodes[k]];
                uh[1] += p.n[k] * values[2 * nodes[k] + 1];
            }
            let u = exact(z_c, p.x);
            err += p.weight * ((uh[0] - u[0]).powi(2) + (uh[1] - u[1]).powi(2));
            norm += p.weight * (u[0] * u[0] + u[1] * u[1]);
        }
    }
    (err.sqrt(), norm.sqrt())
}

fn solve(mesh: Mesh, z_c: f64) -> (f64, f64) {
    let mesh = Arc::new(mesh);
    let material = MaterialField::homogeneous(E, NU).unwrap();
    let system = ElasticSystem::assemble(mesh.clone(), &material).unwrap();
    let mut load = LoadVector::zeros(&mesh);
    load.add_body_force(&mesh, |x| body_force(z_c, x)).unwrap();
    load.add_boundary_traction(&mesh, |x, n| {
        let s = stress(z_c, x);
        [s[0] * n[0] + s[3] * n[1], s[3] * n[0] + s[1] * n[1]]
    });
    let u = system.solve(&load).unwrap();
    let (e, norm) = l2_error(&mesh, &u.values, z_c);
    let h = (mesh.area() / mesh.n_triangles() as f64).sqrt();
    (h, e / norm)
}

/// `(h, relative L2 error)` on a mesh and two uniform refinements.
pub fn mms_errors(target: usize) -> Vec<(f64, f64)> {
    let surface = OcularSurface::preset(EyePreset::Average);
    let z_c = surface.bottom_z();
    let coarse = generate_mesh(&surface, &MeshParams::with_target(target)).unwrap();
    let mid = coarse.refine_uniform(&surface).unwrap();
    let fine = mid.refine_uniform(&surface).unwrap();
    [coarse, mid, fine].into_iter().map(|m| solve(m, z_c)).collect()
}

/// Observed orders between consecutive levels.
pub fn orders(errors: &[(f64, f64)]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect()
}
