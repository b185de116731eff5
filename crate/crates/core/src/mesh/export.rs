use std::path::{Path, PathBuf};

use super::Mesh;
use crate::error::{Error, Result};

/// The three files written by [`write_mesh_csv`].
#[derive(Debug, Clone)]
pub struct MeshCsvPaths {
    pub vertices: PathBuf,
    pub triangles: PathBuf,
    pub boundary: PathBuf,
}

/// Writes `vertices.csv`, `triangles.csv` and `boundary.csv` into `dir`.
pub fn write_mesh_csv(mesh: &Mesh, dir: &Path) -> Result<MeshCsvPaths> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = MeshCsvPaths {
        vertices: dir.join("vertices.csv"),
        triangles: dir.join("triangles.csv"),
        boundary: dir.join("boundary.csv"),
    };

    let mut w = csv::Writer::from_path(&paths.vertices)?;
    w.write_record(["id", "r [cm]", "z [cm]", "arc [cm]"])?;
    for (i, (p, s)) in mesh.vertices.iter().zip(&mesh.vertex_arc).enumerate() {
        let arc = s.map(|v| format!("{v:.12e}")).unwrap_or_default();
        w.write_record([i.to_string(), format!("{:.12e}", p[0]), format!("{:.12e}", p[1]), arc])?;
    }
    w.flush().map_err(|e| Error::io(&paths.vertices, e))?;

    let mut w = csv::Writer::from_path(&paths.triangles)?;
    w.write_record(["id", "v0", "v1", "v2"])?;
    for (i, t) in mesh.triangles.iter().enumerate() {
        w.write_record([i, t[0], t[1], t[2]].map(|v| v.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(&paths.triangles, e))?;

    let mut w = csv::Writer::from_path(&paths.boundary)?;
    w.write_record(["v0", "v1", "tag"])?;
    for be in &mesh.boundary_edges {
        w.write_record([be.a.to_string(), be.b.to_string(), be.tag.name().to_string()])?;
    }
    w.flush().map_err(|e| Error::io(&paths.boundary, e))?;
    Ok(paths)
}
