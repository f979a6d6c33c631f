//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::path::PathBuf;

use k3lat::bounds::{self, ExclusionStatus, Witness};
use k3lat::catalog;
use k3lat::exact::{self, fmt_rational, ratio, Rational, SymMatrix};
use k3lat::fibration::{self, FibrationProfile};
use k3lat::format;
use k3lat::graph::{self, CurveConfig};
use k3lat::kodaira::FiberType;
use k3lat::roots::{self, RootKind};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel)
}

fn config(name: &str) -> CurveConfig {
    let text = std::fs::read_to_string(data(&format!("configs/{name}.json"))).unwrap();
    format::parse_config(&text).unwrap().to_config().unwrap()
}

fn cli(args: &[&str]) -> k3lat_cli::Output {
    let mut all = vec!["k3lat"];
    all.extend_from_slice(args);
    k3lat_cli::run(all)
}

fn cli_json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&cli(&all).stdout).unwrap()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn status_of(cfg: &CurveConfig, d: u64, h: u64) -> ExclusionStatus {
    bounds::exclude(cfg, d, h, bounds::DEFAULT_SUBGRAPH_CAP, false).unwrap().status
}

fn box_witness_ok(cfg: &CurveConfig, d: u64, expected: &Rational) -> Result<(), String> {
    let c = bounds::box_certificate(cfg, d).map_err(|e| e.to_string())?;
    ensure(&c.bound_on_2h == expected, format!("box bound {} at d={d}", fmt_rational(&c.bound_on_2h)))?;
    ensure(matches!(c.witness, Witness::Box { .. }), "witness is not a box decomposition")?;
    c.verify(cfg)
}

fn criterion_1() -> Outcome {
    let path = data("configs/example-D6tilde.json");
    let p = path.to_str().unwrap();
    let b = cli_json(&["bound", p, "--d", "1", "--method", "rough"]);
    ensure(b["bound_on_2h"] == "1640/21", format!("rough bound {}", b["bound_on_2h"]))?;
    ensure(b["verified"] == true, "rough certificate did not verify")?;
    let e = cli(&["exclude", p, "--d", "1", "--h", "43"]);
    ensure(e.stdout.starts_with("HyperbolicExcluded"), e.stdout.lines().next().unwrap_or("").to_string())?;
    Ok("rough 1640/21, exclude(d=1,h=43) = HyperbolicExcluded".into())
}

fn criterion_2() -> Outcome {
    let cfg = config("char3-I3star-4sections");
    box_witness_ok(&cfg, 1, &ratio(86, 1))?;
    ensure(status_of(&cfg, 1, 43) == ExclusionStatus::HyperbolicUndecided, "h=43 not undecided")?;
    ensure(status_of(&cfg, 1, 44) == ExclusionStatus::HyperbolicExcluded, "h=44 not excluded")?;
    Ok("box 86 with verified witness, h=43 undecided, h=44 excluded".into())
}

fn criterion_3() -> Outcome {
    let cfg = config("char2-IVstar-3xA2");
    box_witness_ok(&cfg, 1, &ratio(185, 2))?;
    box_witness_ok(&cfg, 2, &ratio(370, 1))?;
    ensure(status_of(&cfg, 2, 185) == ExclusionStatus::HyperbolicUndecided, "d=2 h=185 not undecided")?;
    ensure(status_of(&cfg, 2, 186) == ExclusionStatus::HyperbolicExcluded, "d=2 h=186 not excluded")?;
    Ok("box 185/2 (d=1), 370 (d=2), h=185 undecided, h=186 excluded".into())
}

fn criterion_4() -> Outcome {
    let names = |rho| fibration::enumerate_uniform(rho).iter().map(|u| u.to_string()).collect::<Vec<_>>();
    let r22 = names(22);
    let r20 = names(20);
    ensure(r22 == ["12xI2", "8xI3", "6xI4", "4xI6"], format!("rho 22: {r22:?}"))?;
    ensure(r20 == ["12xI2", "8xI3", "6xI4"], format!("rho 20: {r20:?}"))?;
    let out = cli(&["enum-uniform", "--rho-max", "22"]);
    ensure(out.code == 0 && out.stdout.lines().count() == 4, "CLI enum-uniform disagrees")?;
    Ok(format!("rho 22 {r22:?}, rho 20 {r20:?}"))
}

fn criterion_5() -> Outcome {
    let cases = [
        (FibrationProfile::elliptic(0, &[(FiberType::I(4), 6)]), 24),
        (FibrationProfile::quasi_elliptic(2, &[(FiberType::III, 20)]), 40),
        (FibrationProfile::quasi_elliptic(3, &[(FiberType::IV, 10)]), 30),
    ];
    for (p, want) in &cases {
        let r = fibration::budget_check(p);
        ensure(r.ok, format!("budget failed for {p}: {:?}", r.problems))?;
        let got = fibration::rational_component_bound(p).map_err(|e| e.to_string())?;
        ensure(got == *want, format!("{p}: {got} != {want}"))?;
    }
    Ok("6xI4 -> 24, 20xIII (p=2) -> 40, 10xIV (p=3) -> 30".into())
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut types: Vec<(FiberType, u32)> = vec![
        (FiberType::IVStar, 12),
        (FiberType::IIIStar, 18),
        (FiberType::IIStar, 30),
        (FiberType::II, 1),
        (FiberType::III, 2),
        (FiberType::IV, 3),
    ];
    for n in 1..=24 {
        types.push((FiberType::I(n), n));
        types.push((FiberType::IStar(n), 2 * n + 6));
    }
    types.push((FiberType::IStar(0), 6));
    for (t, wt) in types {
        ensure(t.weight() == wt, format!("wt({t}) = {} != {wt}", t.weight()))?;
        let m = t.component_count();
        let e = if t.is_additive() { m + 1 } else { m };
        ensure(t.euler_number() == e, format!("e({t}) = {} != {e}", t.euler_number()))?;
        ensure(t.multiplicities().iter().sum::<u32>() == wt, format!("multiplicities of {t}"))?;
        checked += 1;
    }
    Ok(format!("{checked} fiber types"))
}

fn random_symmetric(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let n = rng.gen_range(1..=6);
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-4..=4);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b33_6c61);
    let mut mismatches = Vec::new();
    for k in 0..1000 {
        let m = random_symmetric(&mut rng);
        let s = exact::signature(&SymMatrix::from_integer_rows(&m).unwrap());
        let o = k3lat_oracle::signature(&m);
        if (s.n_plus, s.n_minus, s.n_zero) != o {
            mismatches.push(format!("#{k} {m:?}: {s} vs {o:?}"));
        }
    }
    ensure(mismatches.is_empty(), format!("{} mismatches, first {:?}", mismatches.len(), mismatches.first()))?;
    Ok("1000 matrices, 0 mismatches".into())
}

/// Random hyperbolic configuration of rank at most 4.
fn random_hyperbolic(rng: &mut ChaCha8Rng) -> Option<CurveConfig> {
    let n = rng.gen_range(2..=4);
    let squares: Vec<i64> = (0..n).map(|_| [-2, -2, -2, 0, 2][rng.gen_range(0..5)]).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = rng.gen_range(0..=3u32);
            if m > 0 {
                edges.push((i, j, m));
            }
        }
    }
    let cfg = CurveConfig::from_graph(&squares, &edges).ok()?;
    let class = graph::classify(&cfg);
    (class.kind == graph::LatticeKind::Hyperbolic && class.signature.n_zero == 0).then_some(cfg)
}

fn criterion_8() -> Outcome {
    let mut certs = 0;
    for e in catalog::shipped_catalog().map_err(|e| e.to_string())? {
        let r = catalog::verify_entry(&e);
        ensure(r.certificate_failures.is_empty(), format!("{}: {:?}", r.name, r.certificate_failures))?;
        let cfg = catalog::entry_config(&e);
        for c in &r.certificates {
            c.verify(cfg.as_ref().unwrap())?;
            certs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut brute = 0;
    while brute < 300 {
        let Some(cfg) = random_hyperbolic(&mut rng) else { continue };
        let g: Vec<Vec<i64>> = graph::gram(&cfg).rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        let inv = k3lat_oracle::inverse(&g).ok_or("oracle found singular matrix")?;
        for d in 1..=3 {
            let max = k3lat_oracle::box_max(&inv, d);
            let mut found = vec![bounds::rough_bound(&cfg, d).map_err(|e| e.to_string())?];
            if let Ok(b) = bounds::box_certificate(&cfg, d) {
                found.push(b);
            }
            for c in found {
                c.verify(&cfg).map_err(|e| format!("{g:?}: {e}"))?;
                ensure(max <= c.bound_on_2h, format!("{g:?} d={d}: box max {max} > {} ({})", c.bound_on_2h, c.kind))?;
            }
        }
        brute += 1;
    }
    Ok(format!("{certs} catalog certificates re-verified, {brute} random lattices brute-forced"))
}

fn criterion_9() -> Outcome {
    let mut kinds = vec![RootKind::IsotropicVertex, RootKind::A1Tilde];
    for n in 1..=21 {
        kinds.push(RootKind::A(n));
        if n >= 2 {
            kinds.push(RootKind::AffineA(n));
        }
        if n >= 4 {
            kinds.push(RootKind::D(n));
            kinds.push(RootKind::AffineD(n));
        }
    }
    for k in 6..=8 {
        kinds.push(RootKind::E(k));
        kinds.push(RootKind::AffineE(k));
    }
    for &kind in &kinds {
        let sd = roots::standard_diagram(kind);
        let dec = roots::decompose(&sd.config).map_err(|e| format!("{kind}: {e}"))?;
        ensure(dec.components.len() == 1 && dec.unrecognized.is_empty(), format!("{kind}: split"))?;
        let c = &dec.components[0];
        ensure(c.kind == kind, format!("{kind} recognized as {}", c.kind))?;
        ensure(c.kernel == sd.kernel, format!("{kind}: kernel {:?} vs table {:?}", c.kernel, sd.kernel))?;
        if let Some(k) = &c.kernel {
            let g = graph::gram(&sd.config);
            let kq: Vec<Rational> = k.iter().map(|&x| exact::int(x)).collect();
            ensure(g.mul_vec(&kq).iter().all(num_traits::Zero::is_zero), format!("{kind}: kernel not annihilated"))?;
        }
    }
    let d4 = roots::decompose(&roots::standard_diagram(RootKind::AffineD(4)).config).unwrap();
    ensure(d4.components[0].kernel == Some(vec![2, 1, 1, 1, 1]), "AffineD(4) kernel")?;
    Ok(format!("{} diagrams", kinds.len()))
}

fn criterion_10() -> Outcome {
    let out = cli(&["catalog", "verify"]);
    ensure(out.code == 0, out.stdout.clone())?;
    let entries = catalog::shipped_catalog().map_err(|e| e.to_string())?;
    ensure(entries.len() >= 12, format!("only {} entries", entries.len()))?;
    let mut hits = 0;
    for e in &entries {
        if let Some(want) = &e.expected.extremal_hits {
            let profile = e.profile.as_ref().ok_or("extremal entry without profile")?.to_profile().unwrap();
            let got: Vec<&str> = fibration::extremal_lookup(&profile).iter().map(|x| x.name).collect();
            ensure(want.iter().all(|w| got.contains(&w.as_str())), format!("{}: {got:?}", e.name))?;
            hits += want.len();
        }
    }
    let table = fibration::extremal_table();
    ensure(table.len() == 7, "extremal table size")?;
    for t in table {
        ensure(fibration::extremal_lookup(&t.profile()).iter().any(|x| x.name == t.name), format!("{} not found", t.name))?;
    }
    let i7 = FibrationProfile::elliptic(7, &[(FiberType::I(7), 2), (FiberType::IIStar, 1)]);
    ensure(!fibration::extremal_lookup(&i7).is_empty(), "I7,I7,II* at p=7 missing")?;
    Ok(format!("{} entries verified, {hits} expected extremal hits", entries.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("D6tilde rough certificate and exclusion", criterion_1),
        ("char 3 box certificate", criterion_2),
        ("char 2 box certificate", criterion_3),
        ("uniform fiber enumeration", criterion_4),
        ("budget maxima", criterion_5),
        ("Kodaira weight and Euler tables", criterion_6),
        ("signature vs Sturm oracle", criterion_7),
        ("certificate soundness", criterion_8),
        ("recognition round trip", criterion_9),
        ("catalog verify", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
