//! CSV and SVG emitters. Every CSV column header names its quantity and unit.

mod csv;
pub mod svg;

pub use self::csv::{
    fmt, read_table, write_convergence, write_lens, write_nodal, write_surface_profile, write_table, Table,
};
pub use svg::{FieldPlot, LinePlot};

pub const R_CM: &str = "r [cm]";
pub const Z_CM: &str = "z [cm]";
pub const U_R_UM: &str = "u_r [µm]";
pub const U_Z_UM: &str = "u_z [µm]";
pub const U_N_UM: &str = "u_n [µm]";
pub const U_NORM_UM: &str = "|u| [µm]";
pub const P_MPA: &str = "p [MPa]";
pub const S_EFF_MPA: &str = "S_eff [MPa]";
