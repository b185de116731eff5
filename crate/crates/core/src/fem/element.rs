//! Six-node isoparametric triangle for axisymmetric elasticity.

use super::quadrature::TRIANGLE_7;
use crate::error::{Error, Result};
use crate::geometry::MaterialField;
use crate::mesh::{p2_geometry, p2_shape};

/// Shape data at one quadrature point.
#[derive(Debug, Clone, Copy)]
pub struct PointEval {
    pub x: [f64; 2],
    /// Quadrature weight times `r |J|`.
    pub weight: f64,
    pub n: [f64; 6],
    /// Physical gradients `(d/dr, d/dz)`.
    pub grad: [[f64; 2]; 6],
}

pub fn eval_point(coords: &[[f64; 2]; 6], xi: f64, eta: f64) -> Result<(PointEval, f64)> {
    let (n, d) = p2_shape(xi, eta);
    let (x, j) = p2_geometry(coords, xi, eta);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det > 0.0) {
        return Err(Error::Assembly(format!("non-positive Jacobian {det:e} at {x:?}")));
    }
    let mut grad = [[0.0; 2]; 6];
    for k in 0..6 {
        grad[k][0] = (j[1][1] * d[k][0] - j[1][0] * d[k][1]) / det;
        grad[k][1] = (-j[0][1] * d[k][0] + j[0][0] * d[k][1]) / det;
    }
    Ok((
        PointEval {
            x,
            weight: 0.0,
            n,
            grad,
        },
        det,
    ))
}

/// Quadrature points of an element with axisymmetric weights.
pub fn quadrature_points(coords: &[[f64; 2]; 6]) -> Result<[PointEval; 7]> {
    let mut out = [PointEval {
        x: [0.0; 2],
        weight: 0.0,
        n: [0.0; 6],
        grad: [[0.0; 2]; 6],
    }; 7];
    for (q, &(xi, eta, w)) in TRIANGLE_7.iter().enumerate() {
        let (mut p, det) = eval_point(coords, xi, eta)?;
        p.weight = w * det * p.x[0];
        out[q] = p;
    }
    Ok(out)
}

/// Strain operator row-block for node `k`: `[e_rr, e_zz, e_tt, g_rz]` as
/// coefficients of `(u_r, u_z)` at that node.
pub fn strain_rows(p: &PointEval, k: usize) -> [[f64; 2]; 4] {
    let [dr, dz] = p.grad[k];
    let hoop = if p.x[0] < 1e-12 { dr } else { p.n[k] / p.x[0] };
    [[dr, 0.0], [0.0, dz], [hoop, 0.0], [dz, dr]]
}

/// `[e_rr, e_zz, e_tt, g_rz]` from nodal displacements.
pub fn strain_at(p: &PointEval, u: &[[f64; 2]; 6]) -> [f64; 4] {
    let mut e = [0.0; 4];
    for k in 0..6 {
        let rows = strain_rows(p, k);
        for (i, row) in rows.iter().enumerate() {
            e[i] += row[0] * u[k][0] + row[1] * u[k][1];
        }
    }
    e
}

/// `[S_rr, S_zz, S_tt, S_rz]` from engineering strains.
pub fn stress_from_strain(e: [f64; 4], lambda: f64, mu: f64) -> [f64; 4] {
    let tr = e[0] + e[1] + e[2];
    [
        lambda * tr + 2.0 * mu * e[0],
        lambda * tr + 2.0 * mu * e[1],
        lambda * tr + 2.0 * mu * e[2],
        mu * e[3],
    ]
}

/// 12x12 element stiffness, local dof `2k + c` for node `k`, component `c`.
pub fn element_stiffness(coords: &[[f64; 2]; 6], material: &MaterialField) -> Result<[[f64; 12]; 12]> {
    let mut ke = [[0.0; 12]; 12];
    for p in quadrature_points(coords)? {
        let e = material.modulus_at(p.x[0], p.x[1]);
        if !(e > 0.0) {
            return Err(Error::Assembly(format!(
                "non-positive Young's modulus {e} at {:?}",
                p.x
            )));
        }
        let (lambda, mu) = crate::geometry::lame_parameters(e, material.poisson)?;
        let d = [
            [lambda + 2.0 * mu, lambda, lambda, 0.0],
            [lambda, lambda + 2.0 * mu, lambda, 0.0],
            [lambda, lambda, lambda + 2.0 * mu, 0.0],
            [0.0, 0.0, 0.0, mu],
        ];
        let mut b = [[0.0; 12]; 4];
        for k in 0..6 {
            let rows = strain_rows(&p, k);
            for i in 0..4 {
                b[i][2 * k] = rows[i][0];
                b[i][2 * k + 1] = rows[i][1];
            }
        }
        // D B
        let mut db = [[0.0; 12]; 4];
        for i in 0..4 {
            for j in 0..12 {
                db[i][j] = (0..4).map(|m| d[i][m] * b[m][j]).sum();
            }
        }
        for a in 0..12 {
            for c in 0..12 {
                let v: f64 = (0..4).map(|i| b[i][a] * db[i][c]).sum();
                ke[a][c] += p.weight * v;
            }
        }
    }
    Ok(ke)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight(v: [[f64; 2]; 3]) -> [[f64; 2]; 6] {
        let m = |a: [f64; 2], b: [f64; 2]| [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        [v[0], v[1], v[2], m(v[0], v[1]), m(v[1], v[2]), m(v[2], v[0])]
    }

    #[test]
    fn quadrature_integrates_r_over_triangle() {
        let c = straight([[0.2, 0.0], [1.0, 0.1], [0.4, 0.8]]);
        let area: f64 = quadrature_points(&c).unwrap().iter().map(|p| p.weight / p.x[0]).sum();
        let exact = 0.5 * ((0.8) * (0.8) - (0.2) * (0.1));
        assert!((area - exact).abs() < 1e-14);
        // int r dA = area * centroid_r
        let mom: f64 = quadrature_points(&c).unwrap().iter().map(|p| p.weight).sum();
        assert!((mom - exact * (0.2 + 1.0 + 0.4) / 3.0).abs() < 1e-14);
    }

    #[test]
    fn stiffness_is_symmetric_and_kills_axial_translation() {
        let c = straight([[0.2, 0.0], [1.0, 0.1], [0.4, 0.8]]);
        let m = MaterialField::homogeneous(0.2, 0.49).unwrap();
        let k = element_stiffness(&c, &m).unwrap();
        let scale = k.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        for a in 0..12 {
            for b in 0..12 {
                assert!((k[a][b] - k[b][a]).abs() < 1e-12 * scale);
            }
            // rigid translation along z produces no force
            let f: f64 = (0..6).map(|n| k[a][2 * n + 1]).sum();
            assert!(f.abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn inverted_element_rejected() {
        let c = straight([[0.2, 0.0], [0.4, 0.8], [1.0, 0.1]]);
        let m = MaterialField::homogeneous(0.2, 0.49).unwrap();
        assert!(element_stiffness(&c, &m).is_err());
    }
}
