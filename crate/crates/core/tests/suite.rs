use commgraph::verify::{run_suite, SuiteConfig, Workspace};
use commgraph::{Error, Limits};
use tempfile::TempDir;

#[test]
fn fast_suite_is_deterministic_with_and_without_cache() {
    let dir = TempDir::new().unwrap();
    let config = SuiteConfig {
        fast: true,
        cache_dir: Some(dir.path().to_path_buf()),
        ..SuiteConfig::default()
    };
    let cold = run_suite(&config);
    assert!(cold.overall, "{}", cold.to_json().unwrap());
    let warm = run_suite(&config);
    let uncached = run_suite(&SuiteConfig { cache_dir: None, ..config });
    assert_eq!(cold.without_durations(), warm.without_durations());
    assert_eq!(cold.without_durations(), uncached.without_durations());

    let round = commgraph::verify::VerificationReport::from_json(&cold.to_json().unwrap()).unwrap();
    assert_eq!(round, cold);
}

#[test]
fn corrupted_cache_surfaces_with_path() {
    let dir = TempDir::new().unwrap();
    let ws = Workspace::new(Limits::default(), Some(dir.path().to_path_buf()));
    let fresh = ws.lattice("alt:4").unwrap();
    let file = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();

    let again = Workspace::new(Limits::default(), Some(dir.path().to_path_buf()));
    assert_eq!(again.lattice("alt:4").unwrap().len(), fresh.len());

    std::fs::write(&file, "[1, 2").unwrap();
    let broken = Workspace::new(Limits::default(), Some(dir.path().to_path_buf()));
    match broken.lattice("alt:4") {
        Err(Error::CacheCorrupt { path, .. }) => assert_eq!(path, file),
        other => panic!("expected a corrupt-cache error, got {other:?}"),
    }
}
