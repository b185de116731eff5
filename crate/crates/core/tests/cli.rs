//! End-to-end checks of the `lenseye` binary: outputs, exit codes, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lenseye::output::read_table;
use lenseye::runner::{RunManifest, MANIFEST_FILE, SWEEP_MANIFEST_FILE};

fn lenseye(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lenseye")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn run_writes_outputs_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let res = lenseye(&["run", "--out", path(&out), "--mesh-vertices", "800"]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));

    let manifest = RunManifest::load(&out).unwrap();
    assert!(manifest.convergence.outcome == "converged");
    assert_eq!(manifest.config.mesh.target_vertices, 800);
    for f in &manifest.outputs {
        assert!(fs::metadata(out.join(f)).unwrap().len() > 0, "{f}");
    }
    let surface = read_table(&out.join("surface.csv")).unwrap();
    assert_eq!(surface.headers[0], "r [cm]");
    assert!(surface.headers.iter().any(|h| h == "u_n [µm]"));
    let lens = read_table(&out.join("lens.csv")).unwrap();
    assert!(lens.headers.iter().any(|h| h == "p [MPa]"));
    let strip = read_table(&out.join("strip.csv")).unwrap();
    assert!(strip.headers.iter().any(|h| h == "S_eff [MPa]"));

    let svg = fs::read_to_string(out.join("pressure.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("version=\"1.1\""));
}

#[test]
fn runs_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(code(&lenseye(&["run", "--out", path(d), "--mesh-vertices", "800"])), 0);
    }
    for f in [
        "surface.csv",
        "lens.csv",
        "strip.csv",
        "nodal.csv",
        "convergence.csv",
        "pressure.svg",
    ] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("x");
    let bad_key = write(tmp.path(), "bad.toml", "[eye]\nmodulus = 3\n");
    let res = lenseye(&["run", &bad_key, "--out", path(&out)]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    let bad_value = write(tmp.path(), "neg.toml", "[lens]\nE_lens_MPa = -1.0\n");
    assert_eq!(code(&lenseye(&["run", &bad_value, "--out", path(&out)])), 2);
    assert_eq!(code(&lenseye(&["run", "/no/such/file.toml"])), 2);
    assert_eq!(code(&lenseye(&["run", "--epsilon=0", "--out", path(&out)])), 2);
    assert_eq!(code(&lenseye(&["run", "--threads", "0", "--out", path(&out)])), 2);
    assert_eq!(
        code(&lenseye(&["geometry", "dump", "--eye", "round", "--out", path(&out)])),
        2
    );
    assert_eq!(code(&lenseye(&["frobnicate"])), 2);
}

#[test]
fn unconverged_run_exits_3_but_keeps_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("short");
    let res = lenseye(&["run", "--out", path(&out), "--mesh-vertices", "800", "--max-iters", "2"]);
    assert_eq!(code(&res), 3);
    let manifest = RunManifest::load(&out).unwrap();
    assert_eq!(manifest.convergence.outcome, "max_iterations");
    assert!(out.join("convergence.csv").exists());
}

#[test]
fn geometry_and_mesh_dumps() {
    let tmp = tempfile::tempdir().unwrap();
    let g = tmp.path().join("g");
    assert_eq!(
        code(&lenseye(&[
            "geometry",
            "dump",
            "--eye",
            "flat_sclera",
            "--lens",
            "steep",
            "--out",
            path(&g)
        ])),
        0
    );
    let eye = read_table(&g.join("eye_surface.csv")).unwrap();
    assert_eq!(eye.rows.len(), 701);
    assert_eq!(eye.headers[1], "h [cm]");
    assert!(g.join("lens_posterior.csv").exists() && g.join("geometry.svg").exists());

    let m = tmp.path().join("m");
    assert_eq!(
        code(&lenseye(&[
            "mesh",
            "export",
            "--mesh-vertices",
            "600",
            "--out",
            path(&m)
        ])),
        0
    );
    let v = read_table(&m.join("vertices.csv")).unwrap();
    assert!((550..700).contains(&v.rows.len()), "{}", v.rows.len());
    assert!(m.join("triangles.csv").exists() && m.join("mesh.svg").exists());
}

#[test]
fn compare_two_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("homogeneous");
    let b = tmp.path().join("layered");
    let layered = write(tmp.path(), "layered.toml", "[eye]\nmaterial = \"heterogeneous\"\n");
    assert_eq!(code(&lenseye(&["run", "--out", path(&a), "--mesh-vertices", "800"])), 0);
    assert_eq!(
        code(&lenseye(&[
            "run",
            &layered,
            "--out",
            path(&b),
            "--mesh-vertices",
            "800"
        ])),
        0
    );

    let c = tmp.path().join("cmp");
    let res = lenseye(&["compare", path(&a), path(&b), "--out", path(&c)]);
    assert_eq!(code(&res), 0);
    let table = read_table(&c.join("compare.csv")).unwrap();
    let ratio: f64 = table.rows[0][2].parse().unwrap();
    assert!(ratio > 5.0 && ratio < 7.5, "{ratio}");

    // different eye geometry cannot be compared pointwise
    let other = tmp.path().join("flat");
    let flat = write(tmp.path(), "flat.toml", "[eye]\npreset = \"flat_sclera\"\n");
    assert_eq!(
        code(&lenseye(&[
            "run",
            &flat,
            "--out",
            path(&other),
            "--mesh-vertices",
            "800"
        ])),
        0
    );
    assert_eq!(code(&lenseye(&["compare", path(&a), path(&other)])), 2);
}

#[test]
fn sweep_writes_runs_and_comparisons() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(
        tmp.path(),
        "sweep.toml",
        "[base.mesh]\ntarget_vertices = 800\n\n[axes]\nE_ratio = [0.5, 1.0, 2.0]\n",
    );
    let out = tmp.path().join("sweep");
    let res = lenseye(&["sweep", &spec, "--out", path(&out), "--threads", "2"]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert!(out.join(SWEEP_MANIFEST_FILE).exists());
    for label in ["E0.5", "E1", "E2"] {
        assert!(out.join("runs").join(label).join(MANIFEST_FILE).exists(), "{label}");
    }
    let summary = read_table(&out.join("summary.csv")).unwrap();
    assert_eq!(summary.rows.len(), 3);
    let doubling = read_table(&out.join("doubling.csv")).unwrap();
    assert_eq!(doubling.rows.len(), 2);
}

#[test]
fn sweep_with_failed_run_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write(
        tmp.path(),
        "sweep.toml",
        "[base.mesh]\ntarget_vertices = 800\n\n[base.solver]\nmax_iters = 3\n\n[axes]\nE_ratio = [0.5, 8.0]\n",
    );
    let out = tmp.path().join("sweep");
    let res = lenseye(&["sweep", &spec, "--out", path(&out)]);
    assert_eq!(code(&res), 3);
    assert!(String::from_utf8_lossy(&res.stdout).contains("FAIL"));
    assert!(out.join(SWEEP_MANIFEST_FILE).exists());
}
