use super::Mesh;

/// P2 shape functions and their reference gradients at `(xi, eta)`.
pub fn p2_shape(xi: f64, eta: f64) -> ([f64; 6], [[f64; 2]; 6]) {
    let l1 = 1.0 - xi - eta;
    let n = [
        l1 * (2.0 * l1 - 1.0),
        xi * (2.0 * xi - 1.0),
        eta * (2.0 * eta - 1.0),
        4.0 * l1 * xi,
        4.0 * xi * eta,
        4.0 * eta * l1,
    ];
    let d = [
        [1.0 - 4.0 * l1, 1.0 - 4.0 * l1],
        [4.0 * xi - 1.0, 0.0],
        [0.0, 4.0 * eta - 1.0],
        [4.0 * (l1 - xi), -4.0 * xi],
        [4.0 * eta, 4.0 * xi],
        [-4.0 * eta, 4.0 * (l1 - eta)],
    ];
    (n, d)
}

/// Position and Jacobian `[[dr/dxi, dr/deta], [dz/dxi, dz/deta]]` of the
/// isoparametric map of a six-node triangle.
pub fn p2_geometry(coords: &[[f64; 2]; 6], xi: f64, eta: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let (n, d) = p2_shape(xi, eta);
    let mut x = [0.0; 2];
    let mut j = [[0.0; 2]; 2];
    for k in 0..6 {
        for c in 0..2 {
            x[c] += n[k] * coords[k][c];
            j[c][0] += d[k][0] * coords[k][c];
            j[c][1] += d[k][1] * coords[k][c];
        }
    }
    (x, j)
}

/// Bucket grid over the (curved) triangles for point queries.
#[derive(Debug, Clone)]
pub struct PointLocator {
    origin: [f64; 2],
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl PointLocator {
    pub fn new(mesh: &Mesh) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &mesh.nodes {
            for c in 0..2 {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        let pad = 1e-6;
        lo = [lo[0] - pad, lo[1] - pad];
        hi = [hi[0] + pad, hi[1] + pad];
        let area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
        let cell = (area / mesh.n_triangles().max(1) as f64).sqrt() * 1.5;
        let nx = ((hi[0] - lo[0]) / cell).ceil().max(1.0) as usize;
        let ny = ((hi[1] - lo[1]) / cell).ceil().max(1.0) as usize;
        let mut buckets = vec![Vec::new(); nx * ny];
        for t in 0..mesh.n_triangles() {
            let c = mesh.triangle_coords(t);
            let (mut a, mut b) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for p in &c {
                for k in 0..2 {
                    a[k] = a[k].min(p[k]);
                    b[k] = b[k].max(p[k]);
                }
            }
            let i0 = (((a[0] - lo[0]) / cell).floor() as usize).min(nx - 1);
            let i1 = (((b[0] - lo[0]) / cell).floor() as usize).min(nx - 1);
            let j0 = (((a[1] - lo[1]) / cell).floor() as usize).min(ny - 1);
            let j1 = (((b[1] - lo[1]) / cell).floor() as usize).min(ny - 1);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    buckets[j * nx + i].push(t);
                }
            }
        }
        Self {
            origin: lo,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    /// Triangle containing `p` and the reference coordinates of `p` in it.
    /// Points within `1e-8` (in reference coordinates) of a triangle count.
    pub fn locate(&self, mesh: &Mesh, p: [f64; 2]) -> Option<(usize, f64, f64)> {
        let fi = (p[0] - self.origin[0]) / self.cell;
        let fj = (p[1] - self.origin[1]) / self.cell;
        if fi < 0.0 || fj < 0.0 {
            return None;
        }
        let (i, j) = (fi as usize, fj as usize);
        if i >= self.nx || j >= self.ny {
            return None;
        }
        let mut best: Option<(f64, usize, f64, f64)> = None;
        for &t in &self.buckets[j * self.nx + i] {
            let coords = mesh.triangle_coords(t);
            let Some((xi, eta)) = invert(&coords, p) else { continue };
            let violation = (-xi).max(-eta).max(xi + eta - 1.0).max(0.0);
            if violation == 0.0 {
                return Some((t, xi, eta));
            }
            if best.is_none_or(|b| violation < b.0) {
                best = Some((violation, t, xi, eta));
            }
        }
        best.filter(|b| b.0 < 1e-8).map(|b| (b.1, b.2, b.3))
    }
}

fn invert(coords: &[[f64; 2]; 6], p: [f64; 2]) -> Option<(f64, f64)> {
    // affine guess from the vertices
    let (a, b, c) = (coords[0], coords[1], coords[2]);
    let m = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let d = [p[0] - a[0], p[1] - a[1]];
    let mut xi = (m[1][1] * d[0] - m[0][1] * d[1]) / det;
    let mut eta = (-m[1][0] * d[0] + m[0][0] * d[1]) / det;
    for _ in 0..30 {
        let (x, j) = p2_geometry(coords, xi, eta);
        let res = [x[0] - p[0], x[1] - p[1]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let dxi = (j[1][1] * res[0] - j[0][1] * res[1]) / det;
        let deta = (-j[1][0] * res[0] + j[0][0] * res[1]) / det;
        xi -= dxi;
        eta -= deta;
        if dxi.abs() + deta.abs() < 1e-14 {
            return Some((xi, eta));
        }
        if !(xi.abs() < 10.0 && eta.abs() < 10.0) {
            return None;
        }
    }
    Some((xi, eta))
}
