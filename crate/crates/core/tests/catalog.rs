use k3lat::catalog;
use k3lat::graph;

#[test]
fn shipped_catalog_verifies() {
    let entries = catalog::shipped_catalog().unwrap();
    assert!(entries.len() >= 12);
    for e in &entries {
        let r = catalog::verify_entry(e);
        let bad: Vec<_> = r.checks.iter().filter(|c| !c.ok()).collect();
        assert!(r.ok(), "{}: {bad:?} {:?}", r.name, r.certificate_failures);
        assert!(!r.checks.is_empty(), "{} checks nothing", r.name);
    }
}

#[test]
fn entries_resolve() {
    let entries = catalog::shipped_catalog().unwrap();
    let d6 = catalog::find(&entries, "example-D6tilde").unwrap();
    let cfg = catalog::entry_config(d6).unwrap();
    assert_eq!(cfg.len(), 10);
    assert_eq!(graph::classify(&cfg).kind, graph::LatticeKind::Hyperbolic);
    assert!(catalog::find(&entries, "no-such-entry").is_none());
    let names: std::collections::BTreeSet<_> = entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names.len(), entries.len(), "duplicate names");
}

#[test]
fn directory_catalog_matches_embedded() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let from_disk = catalog::load_catalog_dir(&dir).unwrap();
    let embedded = catalog::shipped_catalog().unwrap();
    let a: Vec<_> = from_disk.iter().map(|e| (&e.name, &e.config, &e.profile)).collect();
    let b: Vec<_> = embedded.iter().map(|e| (&e.name, &e.config, &e.profile)).collect();
    assert_eq!(a, b);
}
