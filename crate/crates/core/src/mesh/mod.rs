//! Triangular meshes of the eye quadrant with quadratic (P2) node numbering.
//!
//! Node numbering: vertices first, then one node per edge at `n_vertices + edge`.
//! Midpoints of edges on Γ_out sit on the analytic surface (at the arc-length
//! midpoint), so elements touching Γ_out are curved isoparametric triangles.

mod export;
mod generate;
mod locate;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{OcularSurface, LIMBUS_END};

pub use export::{write_mesh_csv, MeshCsvPaths};
pub use generate::{generate_mesh, MeshParams};
pub use locate::{p2_geometry, p2_shape, PointLocator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryTag {
    /// Ocular surface.
    Out,
    /// Symmetry axis r = 0.
    InV,
    /// Horizontal cut z = h(R_eye).
    InH,
}

impl BoundaryTag {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryTag::Out => "out",
            BoundaryTag::InV => "in_v",
            BoundaryTag::InH => "in_h",
        }
    }
}

/// Tagged boundary edge; Γ_out edges run apex-outward (`a` has the smaller arc
/// coordinate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub edge: usize,
    pub a: usize,
    pub b: usize,
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// Unique edges, smaller vertex index first.
    pub edges: Vec<[usize; 2]>,
    /// Local edge `k` of a triangle joins its local vertices `k` and `(k + 1) % 3`.
    pub triangle_edges: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Positions of all P2 nodes.
    pub nodes: Vec<[f64; 2]>,
    /// Arc-length coordinate for every vertex on Γ_out.
    pub vertex_arc: Vec<Option<f64>>,
    /// Γ_out boundary edges ordered from the apex outward.
    out_sequence: Vec<usize>,
    /// Arc coordinate where each edge of `out_sequence` starts.
    out_start_arcs: Vec<f64>,
}

impl Mesh {
    /// Assembles a mesh from vertices, triangles and tagged boundary segments.
    /// Γ_out vertices must carry their arc-length coordinate.
    pub fn from_parts(
        surface: &OcularSurface,
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary: &[(usize, usize, BoundaryTag)],
        vertex_arc: Vec<Option<f64>>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if vertex_arc.len() != nv {
            return Err(Error::Mesh("vertex_arc length differs from vertex count".into()));
        }
        let mut edge_map: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_count: Vec<u8> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::Mesh(format!("triangle {t} references a missing vertex")));
            }
            if signed_area(&vertices, tri) <= 0.0 {
                return Err(Error::Mesh(format!("triangle {t} is not positively oriented")));
            }
            let mut te = [0; 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let id = *edge_map.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edge_count.push(0);
                    edges.len() - 1
                });
                edge_count[id] += 1;
                te[k] = id;
            }
            triangle_edges.push(te);
        }
        if edge_count.iter().any(|&c| c > 2) {
            return Err(Error::Mesh(
                "non-manifold edge shared by more than two triangles".into(),
            ));
        }

        let mut boundary_edges = Vec::with_capacity(boundary.len());
        let mut tagged = vec![false; edges.len()];
        for &(a, b, tag) in boundary {
            let key = (a.min(b), a.max(b));
            let Some(&edge) = edge_map.get(&key) else {
                return Err(Error::Mesh(format!("boundary segment ({a}, {b}) is not a mesh edge")));
            };
            if edge_count[edge] != 1 || tagged[edge] {
                return Err(Error::Mesh(format!(
                    "segment ({a}, {b}) is not a free edge or tagged twice"
                )));
            }
            tagged[edge] = true;
            let (a, b) = match (tag, vertex_arc[a], vertex_arc[b]) {
                (BoundaryTag::Out, Some(sa), Some(sb)) if sa > sb => (b, a),
                _ => (a, b),
            };
            boundary_edges.push(BoundaryEdge { edge, a, b, tag });
        }
        if let Some(e) = (0..edges.len()).find(|&e| edge_count[e] == 1 && !tagged[e]) {
            return Err(Error::Mesh(format!("free edge {:?} carries no boundary tag", edges[e])));
        }

        let mut nodes = vertices.clone();
        nodes.extend(edges.iter().map(|&[a, b]| midpoint(vertices[a], vertices[b])));
        for be in &boundary_edges {
            if be.tag == BoundaryTag::Out {
                let (Some(sa), Some(sb)) = (vertex_arc[be.a], vertex_arc[be.b]) else {
                    return Err(Error::Mesh("Γ_out vertex without arc coordinate".into()));
                };
                nodes[nv + be.edge] = surface.point_at_arc(0.5 * (sa + sb));
            }
        }
        let mut out_sequence: Vec<usize> = (0..boundary_edges.len())
            .filter(|&i| boundary_edges[i].tag == BoundaryTag::Out)
            .collect();
        out_sequence.sort_by(|&i, &j| {
            let key = |k: usize| vertex_arc[boundary_edges[k].a].unwrap();
            key(i).partial_cmp(&key(j)).unwrap()
        });

        let out_start_arcs = out_sequence
            .iter()
            .map(|&i| vertex_arc[boundary_edges[i].a].unwrap())
            .collect();
        let mesh = Self {
            out_start_arcs,
            vertices,
            triangles,
            edges,
            triangle_edges,
            boundary_edges,
            nodes,
            vertex_arc,
            out_sequence,
        };
        mesh.check_boundary_geometry(surface)?;
        Ok(mesh)
    }

    fn check_boundary_geometry(&self, surface: &OcularSurface) -> Result<()> {
        let zb = surface.bottom_z();
        for be in &self.boundary_edges {
            let pts = [self.nodes[be.a], self.nodes[be.b], self.nodes[self.edge_node(be.edge)]];
            for p in pts {
                let off = match be.tag {
                    // distance to the circle on the sclera, where the curve can be vertical
                    BoundaryTag::Out if p[0] > LIMBUS_END => {
                        (p[0].hypot(p[1] - surface.sclera.z_s) - surface.sclera.r_s).abs()
                    }
                    BoundaryTag::Out => (p[1] - surface.h_unchecked(p[0].max(0.0))).abs(),
                    BoundaryTag::InV => p[0].abs(),
                    BoundaryTag::InH => (p[1] - zb).abs(),
                };
                let tol = 1e-8;
                if off > tol {
                    return Err(Error::Mesh(format!(
                        "{:?} node {p:?} is {off:e} cm off its boundary",
                        be.tag
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_node(&self, edge: usize) -> usize {
        self.vertices.len() + edge
    }

    /// Six P2 nodes: three vertices, then the midpoints of edges (0,1), (1,2), (2,0).
    pub fn triangle_nodes(&self, t: usize) -> [usize; 6] {
        let v = self.triangles[t];
        let e = self.triangle_edges[t];
        let nv = self.vertices.len();
        [v[0], v[1], v[2], nv + e[0], nv + e[1], nv + e[2]]
    }

    pub fn triangle_coords(&self, t: usize) -> [[f64; 2]; 6] {
        self.triangle_nodes(t).map(|n| self.nodes[n])
    }

    /// Γ_out edges from the apex outward.
    pub fn out_edges(&self) -> impl Iterator<Item = &BoundaryEdge> + '_ {
        self.out_sequence.iter().map(move |&i| &self.boundary_edges[i])
    }

    /// Γ_out edge containing arc coordinate `s` and the local coordinate
    /// `t = (s - s_a) / (s_b - s_a)` along it.
    pub fn out_edge_at_arc(&self, s: f64) -> (&BoundaryEdge, f64) {
        let k = self.out_start_arcs.partition_point(|&a| a <= s).saturating_sub(1);
        let be = &self.boundary_edges[self.out_sequence[k]];
        let (sa, sb) = self.out_edge_arc(be);
        (be, ((s - sa) / (sb - sa)).clamp(0.0, 1.0))
    }

    /// Arc-length interval `(s_a, s_b)` of a Γ_out edge.
    pub fn out_edge_arc(&self, be: &BoundaryEdge) -> (f64, f64) {
        (self.vertex_arc[be.a].unwrap(), self.vertex_arc[be.b].unwrap())
    }

    /// P2 nodes lying on boundary edges with the given tag (sorted, unique).
    pub fn boundary_nodes(&self, tag: BoundaryTag) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|be| be.tag == tag)
            .flat_map(|be| [be.a, be.b, self.edge_node(be.edge)])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Sum of straight-sided triangle areas.
    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| signed_area(&self.vertices, t)).sum()
    }

    /// Smallest interior angle over all (straight) triangles, degrees.
    pub fn min_angle_deg(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| triangle_min_angle(&self.vertices, t))
            .fold(f64::INFINITY, f64::min)
            .to_degrees()
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        dist(self.vertices[a], self.vertices[b])
    }

    /// Splits every triangle into four. New Γ_out vertices are the former
    /// curved midpoints, so they stay on the analytic surface.
    pub fn refine_uniform(&self, surface: &OcularSurface) -> Result<Mesh> {
        let nv = self.vertices.len();
        let vertices: Vec<[f64; 2]> = self.nodes.clone();
        let mut vertex_arc = self.vertex_arc.clone();
        vertex_arc.resize(vertices.len(), None);
        for be in &self.boundary_edges {
            if be.tag == BoundaryTag::Out {
                let (sa, sb) = self.out_edge_arc(be);
                vertex_arc[nv + be.edge] = Some(0.5 * (sa + sb));
            }
        }
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for t in 0..self.triangles.len() {
            let [a, b, c, ab, bc, ca] = self.triangle_nodes(t);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        let boundary: Vec<(usize, usize, BoundaryTag)> = self
            .boundary_edges
            .iter()
            .flat_map(|be| {
                let m = nv + be.edge;
                [(be.a, m, be.tag), (m, be.b, be.tag)]
            })
            .collect();
        Mesh::from_parts(surface, vertices, triangles, &boundary, vertex_arc)
    }
}

pub(crate) fn signed_area(v: &[[f64; 2]], t: &[usize; 3]) -> f64 {
    let (p, q, r) = (v[t[0]], v[t[1]], v[t[2]]);
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
}

fn triangle_min_angle(v: &[[f64; 2]], t: &[usize; 3]) -> f64 {
    (0..3)
        .map(|k| {
            let p = v[t[k]];
            let q = v[t[(k + 1) % 3]];
            let r = v[t[(k + 2) % 3]];
            let u = [q[0] - p[0], q[1] - p[1]];
            let w = [r[0] - p[0], r[1] - p[1]];
            let cross = u[0] * w[1] - u[1] * w[0];
            let dot = u[0] * w[0] + u[1] * w[1];
            cross.abs().atan2(dot)
        })
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn midpoint(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
