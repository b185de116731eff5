use std::path::Path;

use super::{P_MPA, R_CM, S_EFF_MPA, U_NORM_UM, U_N_UM, U_R_UM, U_Z_UM, Z_CM};
use crate::coupling::IterationRecord;
use crate::error::{Error, Result};
use crate::fem::{von_mises, DisplacementField, StressField, SurfaceSample};
use crate::lens_shell::LensSolution;
use crate::UM_PER_CM;

/// Fixed-width scientific notation, so that identical runs give identical
/// files.
pub fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

fn create(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    Ok(csv::Writer::from_path(path)?)
}

/// Writes a header row followed by `rows`.
pub fn write_table<I, R>(path: &Path, headers: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = create(path)?;
    w.write_record(headers)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// A CSV file read back as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Numeric column by header.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self
            .headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("column '{name}' missing (have {:?})", self.headers)))?;
        self.rows
            .iter()
            .map(|row| {
                row.get(k)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("column '{name}': bad value in row {row:?}")))
            })
            .collect()
    }
}

pub fn read_table(path: &Path) -> Result<Table> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
    Ok(Table { headers, rows })
}

pub fn write_surface_profile(path: &Path, samples: &[SurfaceSample]) -> Result<()> {
    write_table(
        path,
        &[R_CM, Z_CM, U_R_UM, U_Z_UM, U_N_UM, U_NORM_UM],
        samples.iter().map(|s| {
            [s.r, s.z]
                .into_iter()
                .map(fmt)
                .chain([s.u_r, s.u_z, s.u_n, s.norm].map(|v| fmt(v * UM_PER_CM)))
                .collect::<Vec<_>>()
        }),
    )
}

pub fn write_lens(path: &Path, lens: &LensSolution) -> Result<()> {
    write_table(
        path,
        &[
            R_CM,
            "R [cm]",
            "T [1]",
            "eta_r [µm]",
            "eta_z [µm]",
            "eta_n [µm]",
            P_MPA,
            "p_direct [MPa]",
        ],
        (0..lens.r.len()).map(|i| {
            vec![
                fmt(lens.r[i]),
                fmt(lens.big_r[i]),
                fmt(lens.t[i]),
                fmt(lens.eta_r[i] * UM_PER_CM),
                fmt(lens.eta_z[i] * UM_PER_CM),
                fmt(lens.eta_n[i] * UM_PER_CM),
                fmt(lens.p[i]),
                fmt(lens.p_direct[i]),
            ]
        }),
    )
}

pub fn write_convergence(path: &Path, history: &[IterationRecord]) -> Result<()> {
    write_table(
        path,
        &["n", "rel_u [1]", "rel_p [1]", "sigma [1]"],
        history
            .iter()
            .map(|h| vec![h.n.to_string(), fmt(h.rel_u), fmt(h.rel_p), fmt(h.sigma)]),
    )
}

/// Displacement and recovered stress at the mesh vertices.
pub fn write_nodal(path: &Path, u: &DisplacementField, stress: &StressField) -> Result<()> {
    let mesh = &u.mesh;
    write_table(
        path,
        &[
            R_CM,
            Z_CM,
            U_R_UM,
            U_Z_UM,
            U_NORM_UM,
            "S_rr [MPa]",
            "S_zz [MPa]",
            "S_tt [MPa]",
            "S_rz [MPa]",
            S_EFF_MPA,
        ],
        mesh.vertices.iter().enumerate().map(|(i, p)| {
            let d = u.node(i);
            let s = stress.values[i];
            let mut row = vec![fmt(p[0]), fmt(p[1])];
            row.extend([d[0], d[1], d[0].hypot(d[1])].map(|v| fmt(v * UM_PER_CM)));
            row.extend(s.map(fmt));
            row.push(fmt(von_mises(s)));
            row
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip_with_quoting() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_table(
            &path,
            &["name", R_CM],
            [
                vec!["a, \"quoted\"".to_string(), fmt(0.25)],
                vec!["b".into(), fmt(-1e-7)],
            ],
        )
        .unwrap();
        let raw = std::fs::read_to_string(&path).unwrap();
        assert!(raw.starts_with("name,r [cm]\n\"a, \"\"quoted\"\"\","), "{raw}");
        let t = read_table(&path).unwrap();
        assert_eq!(t.rows[0][0], "a, \"quoted\"");
        assert_eq!(t.column(R_CM).unwrap(), vec![0.25, -1e-7]);
        assert!(t.column("missing").is_err());
    }
}
