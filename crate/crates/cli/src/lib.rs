//! Command-line front end. [`run`] is the whole program minus process I/O.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use k3lat::bounds::{self, BoundCertificate, ExclusionStatus, Witness};
use k3lat::catalog;
use k3lat::exact::{fmt_rational, Rational, SymMatrix};
use k3lat::fibration::{self, SurfaceContext};
use k3lat::format::{self, ConfigFile};
use k3lat::graph::{self, CurveConfig};
use k3lat::kodaira;
use k3lat::roots;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REPORTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "k3lat", version, about = "Exact checks for rational curve configurations on K3 surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signature, lattice type and pairing constraints of a configuration.
    Classify {
        file: PathBuf,
        /// Also check degree and Hodge index constraints for curves of degree at most D.
        #[arg(long, requires = "h")]
        d: Option<u64>,
        #[arg(long, requires = "d")]
        h: Option<u64>,
    },
    /// Root system decomposition of a negative semi-definite configuration.
    Decompose { file: PathBuf },
    /// Divisors of Kodaira type supported on a configuration.
    Kodaira {
        file: PathBuf,
        #[arg(long)]
        max_weight: Option<u32>,
    },
    /// Intrinsic polarization and the resulting bound on h.
    Polarize { file: PathBuf },
    /// Upper bound on 2h for curves of degree at most D.
    Bound {
        file: PathBuf,
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Decide whether a configuration can occur on a K3 surface of degree 2h.
    Exclude {
        file: PathBuf,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        h: u64,
        /// Largest subgraph examined.
        #[arg(long, default_value_t = bounds::DEFAULT_SUBGRAPH_CAP)]
        cap: usize,
        /// Treat the degrees in the file as exact rather than as bounded by D.
        #[arg(long)]
        pinned: bool,
    },
    /// Euler number and rank bookkeeping of a fibration profile.
    Budget {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        mw_rank: u64,
    },
    /// Uniform multiplicative fiber configurations k x I_n within a Picard rank.
    EnumUniform {
        #[arg(long)]
        rho_max: u64,
    },
    /// Bound on the number of rational curves of degree at most d.
    SdBound(SdArgs),
    /// Check a declared model against the very-ampleness criterion.
    VeryAmple { file: PathBuf },
    /// Shipped catalog of configurations and profiles.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Args)]
pub struct SdArgs {
    #[arg(long = "char")]
    pub characteristic: u64,
    #[arg(long, conflicts_with = "unirational")]
    pub non_unirational: bool,
    #[arg(long)]
    pub unirational: bool,
    #[arg(long)]
    pub sigma: Option<u32>,
    #[arg(long)]
    pub rho_max: Option<u64>,
    /// Ask for a bound on the restricted count S_d'.
    #[arg(long)]
    pub restricted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Rough,
    Box,
    /// Box bound when a decomposition is found, rough bound otherwise.
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show { name: String },
    Verify,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Output { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

type CmdResult = Result<Report, String>;

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match &cli.command {
        Command::Classify { file, d, h } => classify(file, d.zip(*h)),
        Command::Decompose { file } => decompose(file),
        Command::Kodaira { file, max_weight } => kodaira_cmd(file, *max_weight),
        Command::Polarize { file } => polarize(file),
        Command::Bound { file, d, method } => bound(file, *d, *method),
        Command::Exclude { file, d, h, cap, pinned } => exclude(file, *d, *h, *cap, *pinned),
        Command::Budget { file, mw_rank } => budget(file, *mw_rank),
        Command::EnumUniform { rho_max } => Ok(enum_uniform(*rho_max)),
        Command::SdBound(a) => sd_bound(a),
        Command::VeryAmple { file } => very_ample(file),
        Command::Catalog { action } => catalog_cmd(action),
    };
    match result {
        Ok(r) => {
            let stdout = match cli.format {
                OutputFormat::Text => r.text,
                OutputFormat::Json => serde_json::to_string_pretty(&r.json).expect("json") + "\n",
            };
            Output { code: r.code, stdout, stderr: String::new() }
        }
        Err(msg) => Output::input_error(msg),
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_config(path: &PathBuf) -> Result<(ConfigFile, CurveConfig), String> {
    let file = format::parse_config(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg = file.to_config().map_err(|e| e.to_string())?;
    Ok((file, cfg))
}

fn q(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

fn qs(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

fn matrix(m: &SymMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| qs(r)).collect())
}

fn vec_text(xs: &[Rational]) -> String {
    format!("({})", xs.iter().map(fmt_rational).collect::<Vec<_>>().join(", "))
}

fn classify(path: &PathBuf, dh: Option<(u64, u64)>) -> CmdResult {
    let (file, cfg) = load_config(path)?;
    let class = graph::classify(&cfg);
    let mut violations = graph::validate_pairings(&cfg, &class);
    if let Some((d, h)) = dh {
        violations.extend(graph::hodge_filter(&cfg, d, h));
    }
    let mut six_d = Vec::new();
    if let Some((d, h)) = dh {
        if h > 42 * d * d && class.kind == graph::LatticeKind::Hyperbolic {
            six_d = kodaira::exclusion_6d(&cfg, d, h).violations;
        }
    }
    let mut text = String::new();
    writeln!(text, "config: {}", file.name).unwrap();
    writeln!(text, "vertices: {}", cfg.len()).unwrap();
    writeln!(text, "signature: {}", class.signature).unwrap();
    writeln!(text, "kind: {}", class.kind).unwrap();
    for v in &class.positive_vectors {
        writeln!(text, "positive vector: ({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")).unwrap();
    }
    for v in &violations {
        writeln!(text, "violation: {v}").unwrap();
    }
    for s in &six_d {
        writeln!(
            text,
            "violation: Kodaira divisor {} on [{}] has degree {} <= 6d",
            s.divisor.tag,
            cfg.ids(&s.divisor.support).join(", "),
            s.degree
        )
        .unwrap();
    }
    let code = if violations.is_empty() && six_d.is_empty() { EXIT_OK } else { EXIT_REPORTED };
    let json = json!({
        "config": file.name,
        "vertices": cfg.len(),
        "signature": [class.signature.n_plus, class.signature.n_minus, class.signature.n_zero],
        "kind": class.kind.name(),
        "positive_vectors": class.positive_vectors.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "violations": violations.iter().map(|v| json!({
            "rule": v.rule.label(),
            "vertices": v.vertices,
            "excess": q(&v.slack),
        })).collect::<Vec<_>>(),
        "small_kodaira_divisors": six_d.iter().map(|s| json!({
            "type": s.divisor.tag.to_string(),
            "support": cfg.ids(&s.divisor.support),
            "degree": s.degree,
        })).collect::<Vec<_>>(),
    });
    Ok(Report { code, text, json })
}

fn decompose(path: &PathBuf) -> CmdResult {
    let (_, cfg) = load_config(path)?;
    let dec = match roots::decompose(&cfg) {
        Ok(d) => d,
        Err(e) => {
            return Ok(Report {
                code: EXIT_REPORTED,
                text: format!("{e}\n"),
                json: json!({ "error": e.to_string() }),
            })
        }
    };
    let mut text = String::new();
    for c in &dec.components {
        write!(text, "{}: [{}]", c.kind, cfg.ids(&c.vertices).join(", ")).unwrap();
        if let Some(k) = &c.kernel {
            write!(text, " kernel ({})", k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")).unwrap();
        }
        text.push('\n');
    }
    for u in &dec.unrecognized {
        writeln!(text, "unrecognized: [{}]", cfg.ids(u).join(", ")).unwrap();
    }
    writeln!(text, "total rank: {}", dec.total_rank()).unwrap();
    let json = json!({
        "components": dec.components.iter().map(|c| json!({
            "kind": c.kind.to_string(),
            "vertices": cfg.ids(&c.vertices),
            "kernel": c.kernel,
        })).collect::<Vec<_>>(),
        "unrecognized": dec.unrecognized.iter().map(|u| cfg.ids(u)).collect::<Vec<_>>(),
        "total_rank": dec.total_rank(),
    });
    let code = if dec.unrecognized.is_empty() { EXIT_OK } else { EXIT_REPORTED };
    Ok(Report { code, text, json })
}

fn kodaira_cmd(path: &PathBuf, max_weight: Option<u32>) -> CmdResult {
    let (_, cfg) = load_config(path)?;
    let divs = kodaira::find_kodaira_divisors(&cfg, max_weight);
    let mut text = String::new();
    let mut items = Vec::new();
    for d in &divs {
        let deg = kodaira::divisor_degree(d, &cfg);
        let parts: Vec<String> = d
            .support
            .iter()
            .zip(&d.multiplicities)
            .map(|(&v, &m)| if m == 1 { cfg.vertex(v).id.clone() } else { format!("{m}{}", cfg.vertex(v).id) })
            .collect();
        let flag = if d.isotropic_vertex { " (nodal or cuspidal)" } else { "" };
        writeln!(text, "{}{flag}: {} weight {} degree {deg}", d.tag, parts.join(" + "), d.weight()).unwrap();
        items.push(json!({
            "type": d.tag.to_string(),
            "isotropic_vertex": d.isotropic_vertex,
            "support": cfg.ids(&d.support),
            "multiplicities": d.multiplicities,
            "weight": d.weight(),
            "degree": deg,
        }));
    }
    if divs.is_empty() {
        text.push_str("no Kodaira divisors\n");
    }
    Ok(Report { code: EXIT_OK, text, json: json!({ "divisors": items }) })
}

fn polarize(path: &PathBuf) -> CmdResult {
    let (_, cfg) = load_config(path)?;
    let p = bounds::intrinsic_polarization(&cfg);
    let (range, note) = bounds::admissible_h_range(&cfg);
    let mut text = String::new();
    writeln!(text, "exists: {}", p.exists).unwrap();
    writeln!(text, "basis: [{}]", cfg.ids(&p.basis).join(", ")).unwrap();
    if p.exists {
        writeln!(text, "coords: {}", vec_text(&p.coords)).unwrap();
        writeln!(text, "square: {}", fmt_rational(&p.square)).unwrap();
    }
    writeln!(text, "h at most: {range}").unwrap();
    if let Some(n) = &note {
        writeln!(text, "note: {n}").unwrap();
    }
    let json = json!({
        "exists": p.exists,
        "basis": cfg.ids(&p.basis),
        "coords": qs(&p.coords),
        "square": if p.exists { q(&p.square) } else { Value::Null },
        "h_max": match &range { bounds::HRange::Unbounded => Value::String("unbounded".into()), bounds::HRange::AtMost(h) => Value::String(h.to_string()) },
        "note": note,
    });
    Ok(Report { code: EXIT_OK, text, json })
}

fn certificate_json(cfg: &CurveConfig, c: &BoundCertificate) -> Value {
    let witness = match &c.witness {
        Witness::Intrinsic { coords } => json!({ "coords": qs(coords) }),
        Witness::Rough { inverse } => json!({ "inverse": matrix(inverse) }),
        Witness::Box { inverse, g0, g_plus, x_max, method } => json!({
            "inverse": matrix(inverse),
            "g0": matrix(g0),
            "g_plus": matrix(g_plus),
            "x_max": qs(x_max),
            "split": format!("{method:?}"),
        }),
    };
    json!({
        "kind": c.kind.name(),
        "vertices": cfg.ids(&c.vertices),
        "d": c.d,
        "bound_on_2h": q(&c.bound_on_2h),
        "verified": c.verify(cfg).is_ok(),
        "witness": witness,
    })
}

fn certificate_text(cfg: &CurveConfig, c: &BoundCertificate) -> String {
    let mut t = String::new();
    writeln!(t, "certificate: {}", c.kind).unwrap();
    writeln!(t, "subgraph: [{}]", cfg.ids(&c.vertices).join(", ")).unwrap();
    writeln!(t, "bound on 2h: {}", fmt_rational(&c.bound_on_2h)).unwrap();
    if let Witness::Box { method, g0, .. } = &c.witness {
        let nonzero = g0.entries().filter(|x| !x.is_zero()).count();
        writeln!(t, "split: {method:?}, G0 has {nonzero} nonzero entries").unwrap();
    }
    let v = match c.verify(cfg) {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("FAILED ({e})"),
    };
    writeln!(t, "verified: {v}").unwrap();
    t
}

fn bound(path: &PathBuf, d: u64, method: Method) -> CmdResult {
    let (_, cfg) = load_config(path)?;
    let cert = match method {
        Method::Rough => bounds::rough_bound(&cfg, d),
        Method::Box => bounds::box_certificate(&cfg, d),
        Method::Auto => match bounds::box_certificate(&cfg, d) {
            Err(bounds::BoundsError::NoDecompositionFound) => bounds::rough_bound(&cfg, d),
            other => other,
        },
    }
    .map_err(|e| e.to_string())?;
    Ok(Report { code: EXIT_OK, text: certificate_text(&cfg, &cert), json: certificate_json(&cfg, &cert) })
}

fn exclude(path: &PathBuf, d: u64, h: u64, cap: usize, pinned: bool) -> CmdResult {
    let (_, cfg) = load_config(path)?;
    let v = bounds::exclude(&cfg, d, h, cap, pinned).map_err(|e| e.to_string())?;
    let two_h = Rational::from_integer((2 * h).into());
    let mut text = match (v.status, v.certificates.first()) {
        (ExclusionStatus::HyperbolicExcluded, Some(c)) => {
            format!("{}, bound {} < {}\n", v.status, fmt_rational(&c.bound_on_2h), fmt_rational(&two_h))
        }
        (ExclusionStatus::HyperbolicUndecided, Some(c)) => {
            format!("{}, best bound {} >= {}\n", v.status, fmt_rational(&c.bound_on_2h), fmt_rational(&two_h))
        }
        _ => format!("{}\n", v.status),
    };
    for c in &v.certificates {
        text.push_str(&certificate_text(&cfg, c));
    }
    for n in &v.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    let json = json!({
        "status": v.status.name(),
        "two_h": q(&two_h),
        "certificates": v.certificates.iter().map(|c| certificate_json(&cfg, c)).collect::<Vec<_>>(),
        "notes": v.notes,
    });
    let code = if v.status.is_excluded() { EXIT_REPORTED } else { EXIT_OK };
    Ok(Report { code, text, json })
}

fn budget(path: &PathBuf, mw_rank: u64) -> CmdResult {
    let file = format::parse_profile(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let profile = file.to_profile().map_err(|e| e.to_string())?;
    let r = fibration::budget_check(&profile);
    let bound = fibration::rational_component_bound(&profile).ok();
    let st = fibration::shioda_tate_rank(&profile, mw_rank).ok();
    let hits = fibration::extremal_lookup(&profile);
    let mut text = String::new();
    writeln!(text, "profile: {profile}").unwrap();
    writeln!(text, "budget: {}", if r.ok { "ok" } else { "FAILED" }).unwrap();
    writeln!(text, "euler total: {}", r.euler_total).unwrap();
    writeln!(text, "components: {}", r.components).unwrap();
    if let Some(b) = bound {
        writeln!(text, "rational component bound: {b}").unwrap();
    }
    if let Some(s) = st {
        writeln!(text, "Shioda-Tate rank: {s}").unwrap();
    }
    for p in &r.problems {
        writeln!(text, "problem: {p}").unwrap();
    }
    for w in &r.warnings {
        writeln!(text, "warning: {w}").unwrap();
    }
    for h in &hits {
        writeln!(text, "extremal: {} ({}), MW {}", h.name, h.root_type, h.mordell_weil).unwrap();
    }
    let json = json!({
        "profile": profile.to_string(),
        "ok": r.ok,
        "euler_total": r.euler_total,
        "components": r.components,
        "rational_component_bound": bound,
        "shioda_tate_rank": st,
        "problems": r.problems,
        "warnings": r.warnings,
        "extremal": hits.iter().map(|h| json!({
            "name": h.name,
            "root_type": h.root_type,
            "mordell_weil": h.mordell_weil,
            "note": h.note,
        })).collect::<Vec<_>>(),
    });
    Ok(Report { code: if r.ok { EXIT_OK } else { EXIT_REPORTED }, text, json })
}

fn enum_uniform(rho_max: u64) -> Report {
    let list = fibration::enumerate_uniform(rho_max);
    let mut text = String::new();
    for u in &list {
        writeln!(text, "{u} (Shioda-Tate rank {})", u.shioda_tate).unwrap();
    }
    let json = json!({
        "rho_max": rho_max,
        "profiles": list.iter().map(|u| json!({
            "fiber": u.fiber().to_string(),
            "count": u.count,
            "shioda_tate_rank": u.shioda_tate,
        })).collect::<Vec<_>>(),
    });
    Report { code: EXIT_OK, text, json }
}

fn sd_bound(a: &SdArgs) -> CmdResult {
    let mut ctx = SurfaceContext::new(a.characteristic);
    if a.non_unirational {
        ctx.unirational = Some(false);
    }
    if a.unirational {
        ctx.unirational = Some(true);
    }
    ctx.artin_invariant = a.sigma;
    if let Some(r) = a.rho_max {
        ctx.rho_max = r;
    }
    let b = fibration::sd_bound(&ctx, a.restricted).map_err(|e| e.to_string())?;
    let mut text = String::new();
    writeln!(text, "{} <= {} for h > {} d^2", b.count, b.bound, fmt_rational(&b.threshold)).unwrap();
    writeln!(text, "regime: {}", b.regime).unwrap();
    if let Some(l) = b.lines_bound {
        writeln!(text, "lines (d = 1): at most {l}").unwrap();
    }
    for n in &b.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    let json = json!({
        "count": b.count.to_string(),
        "bound": b.bound,
        "h_threshold_over_d2": q(&b.threshold),
        "regime": b.regime,
        "lines_bound": b.lines_bound,
        "notes": b.notes,
    });
    Ok(Report { code: EXIT_OK, text, json })
}

fn very_ample(path: &PathBuf) -> CmdResult {
    let file = format::parse_model(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let v = fibration::very_ample_check(&file.to_model());
    let mut text = format!("{}\n", if v.pass { "pass" } else { "fail" });
    for f in &v.failed {
        writeln!(text, "condition ({}) failed: {}", f.condition, f.detail).unwrap();
    }
    for n in &v.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    let json = json!({
        "pass": v.pass,
        "failed": v.failed.iter().map(|f| json!({ "condition": f.condition, "detail": f.detail })).collect::<Vec<_>>(),
        "notes": v.notes,
    });
    Ok(Report { code: if v.pass { EXIT_OK } else { EXIT_REPORTED }, text, json })
}

fn catalog_cmd(action: &CatalogAction) -> CmdResult {
    let entries = catalog::shipped_catalog().map_err(|e| e.to_string())?;
    match action {
        CatalogAction::List => {
            let mut text = String::new();
            for e in &entries {
                writeln!(text, "{}: {}", e.name, e.citation).unwrap();
            }
            let json = json!({
                "entries": entries.iter().map(|e| json!({ "name": e.name, "citation": e.citation })).collect::<Vec<_>>(),
            });
            Ok(Report { code: EXIT_OK, text, json })
        }
        CatalogAction::Show { name } => {
            let e = catalog::find(&entries, name).ok_or_else(|| format!("no catalog entry named `{name}`"))?;
            let mut text = format!("{}\n{}\n", e.name, e.citation);
            let mut json = json!({ "name": e.name, "citation": e.citation });
            if let Some(c) = &e.config {
                writeln!(text, "config: {}", e.config_path.as_deref().unwrap_or("")).unwrap();
                text.push_str(&c.to_json());
                text.push('\n');
                json["config"] = serde_json::from_str(&c.to_json()).expect("json");
            }
            if let Some(p) = &e.profile {
                writeln!(text, "profile: {}", e.profile_path.as_deref().unwrap_or("")).unwrap();
                text.push_str(&p.to_json());
                text.push('\n');
                json["profile"] = serde_json::from_str(&p.to_json()).expect("json");
            }
            Ok(Report { code: EXIT_OK, text, json })
        }
        CatalogAction::Verify => {
            let mut text = String::new();
            let mut items = Vec::new();
            let mut all_ok = true;
            for e in &entries {
                let r = catalog::verify_entry(e);
                all_ok &= r.ok();
                writeln!(
                    text,
                    "{} {} ({} checks, {} certificates)",
                    if r.ok() { "ok  " } else { "FAIL" },
                    r.name,
                    r.checks.len(),
                    r.certificates.len()
                )
                .unwrap();
                for c in r.checks.iter().filter(|c| !c.ok()) {
                    writeln!(text, "  {}: expected {}, got {}", c.what, c.expected, c.actual).unwrap();
                }
                for f in &r.certificate_failures {
                    writeln!(text, "  certificate: {f}").unwrap();
                }
                items.push(json!({
                    "name": r.name,
                    "ok": r.ok(),
                    "checks": r.checks.iter().map(|c| json!({
                        "what": c.what, "expected": c.expected, "actual": c.actual, "ok": c.ok(),
                    })).collect::<Vec<_>>(),
                    "certificates_verified": r.certificates.len(),
                    "certificate_failures": r.certificate_failures,
                }));
            }
            writeln!(text, "{} entries, {}", entries.len(), if all_ok { "all verified" } else { "mismatches found" }).unwrap();
            let json = json!({ "entries": items, "all_ok": all_ok });
            Ok(Report { code: if all_ok { EXIT_OK } else { EXIT_REPORTED }, text, json })
        }
    }
}
