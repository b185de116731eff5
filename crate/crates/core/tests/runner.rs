//! Batch runner behaviour and the shipped sample configs.

use std::path::PathBuf;

use lenseye::config::{ScenarioConfig, SweepSpec};
use lenseye::runner::run_batch;

fn small(e_ratio: f64) -> ScenarioConfig {
    let mut c = ScenarioConfig::default();
    c.mesh.target_vertices = 800;
    c.lens.e_lens_mpa = e_ratio * c.eye.e_eye_mpa;
    c
}

#[test]
fn batch_results_do_not_depend_on_thread_count() {
    let configs: Vec<ScenarioConfig> = [0.5, 2.0, 4.0].into_iter().map(small).collect();
    let one = run_batch(&configs, Some(1)).unwrap();
    let many = run_batch(&configs, Some(3)).unwrap();
    for (a, b) in one.iter().zip(&many) {
        let (a, b) = (&a.as_ref().unwrap().result, &b.as_ref().unwrap().result);
        assert_eq!(a.state.u.values, b.state.u.values);
        assert_eq!(a.state.lens.p, b.state.lens.p);
    }
    // the three runs share one eye
    let eyes: Vec<_> = one
        .iter()
        .map(|r| std::sync::Arc::as_ptr(&r.as_ref().unwrap().eye))
        .collect();
    assert!(eyes.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn stiff_lens_falls_back_to_under_relaxation() {
    let items = run_batch(&[small(50.0)], None).unwrap();
    let r = &items[0].as_ref().unwrap().result;
    assert!(r.state.converged());
    assert!(r.state.relaxation < 1.0);
    assert!(
        r.state.warnings.iter().any(|w| w.contains("restarting")),
        "{:?}",
        r.state.warnings
    );
}

#[test]
fn disabled_fallback_reports_divergence() {
    let mut c = small(50.0);
    c.solver.min_relaxation = 0.0;
    let items = run_batch(&[c], None).unwrap();
    let r = &items[0].as_ref().unwrap().result;
    assert!(!r.state.converged());
}

#[test]
fn sample_configs_load() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        if text.contains("[axes]") {
            let runs = SweepSpec::from_file(&path).unwrap().runs().unwrap();
            assert!(!runs.is_empty(), "{}", path.display());
        } else {
            ScenarioConfig::from_file(&path).unwrap().validate().unwrap();
        }
        seen += 1;
    }
    assert!(seen >= 5);
}
