//! Shipped catalog of named configurations and profiles with expected results.
//!
//! The index `catalog.json` lists entries; each points at a config file, a profile
//! file, or both, relative to the catalog directory. The shipped files are compiled
//! in; setting `K3LAT_CATALOG_DIR` reads a directory with the same layout instead.

use std::path::Path;

use serde::Deserialize;

use crate::bounds::{self, BoundCertificate};
use crate::exact::{self, fmt_rational, Rational};
use crate::fibration;
use crate::format::{self, ConfigFile, FormatError, ProfileFile};
use crate::graph::{self, CurveConfig};
use crate::kodaira;
use crate::roots;

pub const CATALOG_ENV: &str = "K3LAT_CATALOG_DIR";

const EMBEDDED: &[(&str, &str)] = &[
    ("catalog.json", include_str!("../data/catalog.json")),
    ("configs/example-D6tilde.json", include_str!("../data/configs/example-D6tilde.json")),
    ("configs/char3-I3star-4sections.json", include_str!("../data/configs/char3-I3star-4sections.json")),
    ("configs/char2-IVstar-3xA2.json", include_str!("../data/configs/char2-IVstar-3xA2.json")),
    ("configs/fermat-I4-cycle.json", include_str!("../data/configs/fermat-I4-cycle.json")),
    ("profiles/uniform-12xI2.json", include_str!("../data/profiles/uniform-12xI2.json")),
    ("profiles/uniform-8xI3.json", include_str!("../data/profiles/uniform-8xI3.json")),
    ("profiles/uniform-6xI4.json", include_str!("../data/profiles/uniform-6xI4.json")),
    ("profiles/uniform-4xI6.json", include_str!("../data/profiles/uniform-4xI6.json")),
    ("profiles/qe3-10xIV.json", include_str!("../data/profiles/qe3-10xIV.json")),
    ("profiles/qe2-20xIII.json", include_str!("../data/profiles/qe2-20xIII.json")),
    ("profiles/extremal-I7-I7-IIstar.json", include_str!("../data/profiles/extremal-I7-I7-IIstar.json")),
    ("profiles/qe3-3xIVstar-IV.json", include_str!("../data/profiles/qe3-3xIVstar-IV.json")),
    ("profiles/qe2-3xIstar2-2xIII.json", include_str!("../data/profiles/qe2-3xIstar2-2xIII.json")),
    ("profiles/qe2-2xIIIstar-Istar2.json", include_str!("../data/profiles/qe2-2xIIIstar-Istar2.json")),
    ("profiles/ell2-I12-IVstar-I4.json", include_str!("../data/profiles/ell2-I12-IVstar-I4.json")),
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("catalog entry `{0}` has neither a config nor a profile")]
    EmptyEntry(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundExpectation {
    pub d: u64,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcludeExpectation {
    pub d: u64,
    pub h: u64,
    pub status: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub classification: Option<String>,
    pub vertices: Option<usize>,
    pub signature: Option<String>,
    pub entry_sum: Option<String>,
    #[serde(default)]
    pub rough_bound: Vec<BoundExpectation>,
    #[serde(default)]
    pub box_bound: Vec<BoundExpectation>,
    #[serde(default)]
    pub exclude: Vec<ExcludeExpectation>,
    pub decomposition: Option<Vec<String>>,
    pub kodaira: Option<Vec<String>>,
    pub budget_ok: Option<bool>,
    pub components: Option<u64>,
    pub rational_component_bound: Option<u64>,
    pub shioda_tate: Option<u64>,
    pub extremal_hits: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexEntry {
    name: String,
    citation: String,
    config: Option<String>,
    profile: Option<String>,
    #[serde(default)]
    expected: Expected,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Index {
    entries: Vec<IndexEntry>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub citation: String,
    pub config_path: Option<String>,
    pub profile_path: Option<String>,
    pub config: Option<ConfigFile>,
    pub profile: Option<ProfileFile>,
    pub expected: Expected,
}

/// Entries from `K3LAT_CATALOG_DIR` when set, otherwise the compiled-in catalog.
pub fn shipped_catalog() -> Result<Vec<CatalogEntry>, CatalogError> {
    match std::env::var_os(CATALOG_ENV) {
        Some(dir) => load_catalog_dir(Path::new(&dir)),
        None => load_with(|rel| {
            EMBEDDED
                .iter()
                .find(|(p, _)| *p == rel)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| CatalogError::Io { path: rel.to_string(), message: "not in the shipped catalog".into() })
        }),
    }
}

pub fn load_catalog_dir(dir: &Path) -> Result<Vec<CatalogEntry>, CatalogError> {
    load_with(|rel| {
        let path = dir.join(rel);
        std::fs::read_to_string(&path)
            .map_err(|e| CatalogError::Io { path: path.display().to_string(), message: e.to_string() })
    })
}

fn load_with(read: impl Fn(&str) -> Result<String, CatalogError>) -> Result<Vec<CatalogEntry>, CatalogError> {
    let text = read("catalog.json")?;
    let index: Index = serde_json::from_str(&text)
        .map_err(|e| CatalogError::Format { path: "catalog.json".into(), source: e.into() })?;
    let mut out = Vec::new();
    for e in index.entries {
        if e.config.is_none() && e.profile.is_none() {
            return Err(CatalogError::EmptyEntry(e.name));
        }
        let config = match &e.config {
            Some(p) => Some(format::parse_config(&read(p)?).map_err(|source| CatalogError::Format { path: p.clone(), source })?),
            None => None,
        };
        let profile = match &e.profile {
            Some(p) => Some(format::parse_profile(&read(p)?).map_err(|source| CatalogError::Format { path: p.clone(), source })?),
            None => None,
        };
        out.push(CatalogEntry {
            name: e.name,
            citation: e.citation,
            config_path: e.config,
            profile_path: e.profile,
            config,
            profile,
            expected: e.expected,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub what: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone)]
pub struct EntryReport {
    pub name: String,
    pub checks: Vec<Check>,
    /// Certificates produced while checking, each already re-verified.
    pub certificates: Vec<BoundCertificate>,
    pub certificate_failures: Vec<String>,
}

impl EntryReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok) && self.certificate_failures.is_empty()
    }
}

fn rational_text(s: &str) -> String {
    s.parse::<Rational>().map(|q| fmt_rational(&q)).unwrap_or_else(|_| format!("unparseable `{s}`"))
}

/// Recomputes every expectation of `entry`.
pub fn verify_entry(entry: &CatalogEntry) -> EntryReport {
    let mut rep = EntryReport { name: entry.name.clone(), checks: vec![], certificates: vec![], certificate_failures: vec![] };
    let ex = &entry.expected;
    let mut check = |what: String, expected: String, actual: String| rep.checks.push(Check { what, expected, actual });

    let mut certs = Vec::new();
    if let Some(file) = &entry.config {
        let cfg = file.to_config().expect("validated on load");
        let class = graph::classify(&cfg);
        if let Some(c) = &ex.classification {
            check("classification".into(), c.clone(), class.kind.to_string());
        }
        if let Some(n) = ex.vertices {
            check("vertices".into(), n.to_string(), cfg.len().to_string());
        }
        if let Some(s) = &ex.signature {
            check("signature".into(), s.clone(), class.signature.to_string());
        }
        if let Some(s) = &ex.entry_sum {
            let actual = exact::inverse(&graph::gram(&cfg))
                .map(|inv| fmt_rational(&inv.entry_sum()))
                .unwrap_or_else(|_| "singular".into());
            check("entry sum of inverse Gram".into(), rational_text(s), actual);
        }
        for b in &ex.rough_bound {
            let actual = match bounds::rough_bound(&cfg, b.d) {
                Ok(c) => {
                    let v = fmt_rational(&c.bound_on_2h);
                    certs.push((cfg.clone(), c));
                    v
                }
                Err(e) => e.to_string(),
            };
            check(format!("rough bound d={}", b.d), rational_text(&b.value), actual);
        }
        for b in &ex.box_bound {
            let actual = match bounds::box_certificate(&cfg, b.d) {
                Ok(c) => {
                    let v = fmt_rational(&c.bound_on_2h);
                    certs.push((cfg.clone(), c));
                    v
                }
                Err(e) => e.to_string(),
            };
            check(format!("box bound d={}", b.d), rational_text(&b.value), actual);
        }
        for x in &ex.exclude {
            let actual = match bounds::exclude(&cfg, x.d, x.h, bounds::DEFAULT_SUBGRAPH_CAP, false) {
                Ok(v) => {
                    certs.extend(v.certificates.into_iter().map(|c| (cfg.clone(), c)));
                    v.status.to_string()
                }
                Err(e) => e.to_string(),
            };
            check(format!("exclude d={} h={}", x.d, x.h), x.status.clone(), actual);
        }
        if let Some(kinds) = &ex.decomposition {
            let actual = match roots::decompose(&cfg) {
                Ok(d) => d.kinds().iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "),
                Err(e) => e.to_string(),
            };
            check("decomposition".into(), kinds.join(", "), actual);
        }
        if let Some(tags) = &ex.kodaira {
            let actual: Vec<String> = kodaira::find_kodaira_divisors(&cfg, None).iter().map(|d| d.tag.to_string()).collect();
            check("kodaira divisors".into(), tags.join(", "), actual.join(", "));
        }
    }

    if let Some(file) = &entry.profile {
        let profile = file.to_profile().expect("validated on load");
        let budget = fibration::budget_check(&profile);
        if let Some(ok) = ex.budget_ok {
            check("budget".into(), ok.to_string(), budget.ok.to_string());
        }
        if let Some(c) = ex.components {
            check("components".into(), c.to_string(), budget.components.to_string());
        }
        if let Some(b) = ex.rational_component_bound {
            let actual = fibration::rational_component_bound(&profile).map_or_else(|e| e.to_string(), |v| v.to_string());
            check("rational component bound".into(), b.to_string(), actual);
        }
        if let Some(r) = ex.shioda_tate {
            let actual = fibration::shioda_tate_rank(&profile, 0).map_or_else(|e| e.to_string(), |v| v.to_string());
            check("Shioda-Tate rank".into(), r.to_string(), actual);
        }
        if let Some(hits) = &ex.extremal_hits {
            let actual: Vec<&str> = fibration::extremal_lookup(&profile).iter().map(|e| e.name).collect();
            check("extremal hits".into(), hits.join(", "), actual.join(", "));
        }
    }

    for (cfg, c) in certs {
        match c.verify(&cfg) {
            Ok(()) => rep.certificates.push(c),
            Err(e) => rep.certificate_failures.push(format!("{} on {}: {e}", c.kind, cfg.ids(&c.vertices).join(","))),
        }
    }
    rep
}

pub fn find<'a>(entries: &'a [CatalogEntry], name: &str) -> Option<&'a CatalogEntry> {
    entries.iter().find(|e| e.name == name)
}

/// Configuration of a catalog entry, if it has one.
pub fn entry_config(entry: &CatalogEntry) -> Option<CurveConfig> {
    entry.config.as_ref().map(|f| f.to_config().expect("validated on load"))
}
