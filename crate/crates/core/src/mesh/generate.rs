use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use spade::handles::FixedVertexHandle;
use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

use super::{BoundaryTag, Mesh};
use crate::error::{Error, Result};
use crate::geometry::OcularSurface;

/// Mesh size controls. Spacing along Γ_out is uniform; the interior spacing is
/// `interior_ratio` times coarser and is reached along the straight cuts by
/// geometric growth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshParams {
    pub target_vertices: usize,
    pub interior_ratio: f64,
    pub growth: f64,
    pub min_angle_deg: f64,
}

impl Default for MeshParams {
    fn default() -> Self {
        Self {
            target_vertices: 2806,
            interior_ratio: 4.0,
            growth: 1.25,
            min_angle_deg: 25.0,
        }
    }
}

impl MeshParams {
    pub fn with_target(target_vertices: usize) -> Self {
        Self {
            target_vertices,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.target_vertices < 100 {
            return Err(Error::Config(format!(
                "mesh target of {} vertices is below the minimum of 100",
                self.target_vertices
            )));
        }
        if !(self.interior_ratio >= 1.0) || !(self.growth > 1.0) {
            return Err(Error::Config(format!(
                "degenerate mesh grading: interior_ratio = {}, growth = {}",
                self.interior_ratio, self.growth
            )));
        }
        if !(self.min_angle_deg > 0.0 && self.min_angle_deg <= 30.0) {
            return Err(Error::Config(format!(
                "angle limit {} deg outside (0, 30]",
                self.min_angle_deg
            )));
        }
        Ok(())
    }
}

/// Builds a mesh of Ω whose vertex count is within 10% of the target, by
/// bisecting on the surface spacing.
pub fn generate_mesh(surface: &OcularSurface, params: &MeshParams) -> Result<Mesh> {
    params.validate()?;
    let target = params.target_vertices as f64;
    let mut lo = 1e-4_f64.ln();
    let mut hi = 0.3_f64.ln();
    let mut best: Option<(f64, Mesh)> = None;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let mesh = build(surface, params, mid.exp())?;
        let n = mesh.n_vertices() as f64;
        let miss = (n - target).abs() / target;
        if best.as_ref().is_none_or(|(m, _)| miss < *m) {
            best = Some((miss, mesh));
        }
        if miss < 0.01 {
            break;
        }
        if n > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (miss, mesh) = best.unwrap();
    if miss > 0.1 {
        return Err(Error::Mesh(format!(
            "could not reach {} vertices (closest {})",
            params.target_vertices,
            mesh.n_vertices()
        )));
    }
    Ok(mesh)
}

/// Positions `0 = x_0 < ... < x_n = length` with steps growing from `h0` by
/// `growth` up to `hmax`.
fn graded(length: f64, h0: f64, hmax: f64, growth: f64) -> Vec<f64> {
    let mut steps = Vec::new();
    let mut sum = 0.0;
    let mut h = h0.min(hmax);
    while sum + 0.5 * h < length {
        steps.push(h);
        sum += h;
        h = (h * growth).min(hmax);
    }
    if steps.is_empty() {
        steps.push(length);
        sum = length;
    }
    let scale = length / sum;
    let mut out = vec![0.0];
    let mut x = 0.0;
    for s in &steps {
        x += s * scale;
        out.push(x);
    }
    *out.last_mut().unwrap() = length;
    out
}

fn build(surface: &OcularSurface, params: &MeshParams, s_b: f64) -> Result<Mesh> {
    let s_int = params.interior_ratio * s_b;
    let total = surface.arc_length();
    let zb = surface.bottom_z();
    let r_eye = surface.r_eye();

    // Closed counter-clockwise boundary: axis down, bottom out, surface back in.
    let mut poly: Vec<([f64; 2], Option<f64>)> = Vec::new();
    let mut tags: Vec<BoundaryTag> = Vec::new();
    let axis = graded(-zb, s_b, s_int, params.growth);
    for &d in &axis[..axis.len() - 1] {
        poly.push(([0.0, -d], if d == 0.0 { Some(0.0) } else { None }));
        tags.push(BoundaryTag::InV);
    }
    let bottom = graded(r_eye, s_b, s_int, params.growth);
    for &d in bottom.iter().rev().take(bottom.len() - 1) {
        poly.push(([r_eye - d, zb], None));
        tags.push(BoundaryTag::InH);
    }
    let n_out = (total / s_b).ceil().max(4.0) as usize;
    for i in (1..=n_out).rev() {
        let s = total * i as f64 / n_out as f64;
        let p = if i == n_out {
            [r_eye, zb]
        } else {
            surface.point_at_arc(s)
        };
        poly.push((p, Some(s)));
        tags.push(BoundaryTag::Out);
    }

    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::new();
    let mut handles: Vec<FixedVertexHandle> = Vec::with_capacity(poly.len());
    for (p, _) in &poly {
        let h = cdt
            .insert(Point2::new(p[0], p[1]))
            .map_err(|e| Error::Mesh(format!("boundary insertion failed: {e:?}")))?;
        handles.push(h);
    }
    if cdt.num_vertices() != poly.len() {
        return Err(Error::Mesh("duplicate boundary vertices".into()));
    }
    let mut segment_tag: HashMap<(usize, usize), BoundaryTag> = HashMap::new();
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        cdt.add_constraint(handles[i], handles[j]);
        let (a, b) = (handles[i].index(), handles[j].index());
        segment_tag.insert((a.min(b), a.max(b)), tags[i]);
    }

    let area_cap = 3f64.sqrt() / 4.0 * s_int * s_int;
    let refinement = cdt.refine(
        RefinementParameters::<f64>::new()
            .with_angle_limit(AngleLimit::from_deg(params.min_angle_deg))
            .with_max_allowed_area(area_cap)
            .exclude_outer_faces(true)
            .keep_constraint_edges()
            .with_max_additional_vertices(40 * params.target_vertices + 20 * poly.len()),
    );
    if !refinement.refinement_complete {
        return Err(Error::Mesh("refinement ran out of vertices".into()));
    }
    let excluded: HashSet<_> = refinement.excluded_faces.into_iter().collect();

    let arc_of_handle: HashMap<usize, Option<f64>> =
        handles.iter().zip(&poly).map(|(h, (_, s))| (h.index(), *s)).collect();
    let mut renumber: Vec<Option<usize>> = vec![None; cdt.num_vertices()];
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for face in cdt.inner_faces() {
        if excluded.contains(&face.fix()) {
            continue;
        }
        faces.push(face.vertices().map(|v| v.fix().index()));
    }
    faces.sort_unstable();
    for f in &faces {
        for &v in f {
            renumber[v] = Some(0);
        }
    }
    let mut vertices = Vec::new();
    let mut vertex_arc = Vec::new();
    for (old, slot) in renumber.iter_mut().enumerate() {
        if slot.is_some() {
            let p = cdt.vertex(FixedVertexHandle::from_index(old)).position();
            *slot = Some(vertices.len());
            vertices.push([p.x, p.y]);
            vertex_arc.push(arc_of_handle.get(&old).copied().flatten());
        }
    }
    // exact boundary coordinates (spade stores what was inserted, but keep the
    // surface points authoritative)
    for (h, (p, _)) in handles.iter().zip(&poly) {
        if let Some(new) = renumber[h.index()] {
            vertices[new] = *p;
        }
    }
    let mut triangles: Vec<[usize; 3]> = faces.iter().map(|f| f.map(|v| renumber[v].unwrap())).collect();
    for t in &mut triangles {
        if super::signed_area(&vertices, t) < 0.0 {
            t.swap(1, 2);
        }
    }
    let boundary: Vec<(usize, usize, BoundaryTag)> = segment_tag
        .iter()
        .map(|(&(a, b), &tag)| (renumber[a].unwrap(), renumber[b].unwrap(), tag))
        .collect::<Vec<_>>();
    let mut boundary = boundary;
    boundary.sort_unstable_by_key(|&(a, b, _)| (a, b));
    Mesh::from_parts(surface, vertices, triangles, &boundary, vertex_arc)
}
