//! Euler characteristic and rank bookkeeping for genus one fibrations on K3 surfaces.

use std::collections::BTreeMap;
use std::fmt;

use crate::exact::{int, ratio, Rational};
use crate::kodaira::FiberType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiberInstance {
    pub fiber: FiberType,
    /// Wild ramification contribution to the Euler number.
    pub delta: u32,
}

impl FiberInstance {
    pub fn new(fiber: FiberType) -> Self {
        Self { fiber, delta: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationProfile {
    pub fibers: Vec<FiberInstance>,
    pub quasi_elliptic: bool,
    pub characteristic: u64,
}

impl FibrationProfile {
    pub fn elliptic(characteristic: u64, fibers: &[(FiberType, usize)]) -> Self {
        Self { fibers: expand(fibers), quasi_elliptic: false, characteristic }
    }

    pub fn quasi_elliptic(characteristic: u64, fibers: &[(FiberType, usize)]) -> Self {
        Self { fibers: expand(fibers), quasi_elliptic: true, characteristic }
    }

    /// Singular fiber types with multiplicity, sorted.
    pub fn fiber_multiset(&self) -> BTreeMap<FiberType, usize> {
        let mut m = BTreeMap::new();
        for f in self.fibers.iter().filter(|f| f.fiber.is_singular()) {
            *m.entry(f.fiber).or_insert(0) += 1;
        }
        m
    }

    fn singular(&self) -> impl Iterator<Item = &FiberInstance> {
        self.fibers.iter().filter(|f| f.fiber.is_singular())
    }
}

impl fmt::Display for FibrationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .fiber_multiset()
            .iter()
            .map(|(t, k)| if *k == 1 { t.to_string() } else { format!("{k}x{t}") })
            .collect();
        let mode = if self.quasi_elliptic { "quasi-elliptic" } else { "elliptic" };
        write!(f, "{mode} p={}: {}", self.characteristic, parts.join(", "))
    }
}

fn expand(fibers: &[(FiberType, usize)]) -> Vec<FiberInstance> {
    fibers
        .iter()
        .flat_map(|&(t, k)| std::iter::repeat(FiberInstance::new(t)).take(k))
        .collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetReport {
    pub ok: bool,
    /// Left-hand side of the Euler identity (24 when it holds).
    pub euler_total: u64,
    /// Σ m_t over singular fibers (elliptic) or reducible fibers (quasi-elliptic).
    pub components: u64,
    pub problems: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn budget_check(profile: &FibrationProfile) -> BudgetReport {
    let p = profile.characteristic;
    let mut problems = Vec::new();
    let mut warnings = Vec::new();
    if p != 0 && !is_prime(p) {
        problems.push(format!("characteristic {p} is neither 0 nor prime"));
    }
    let (euler_total, components) = if profile.quasi_elliptic {
        if p != 2 && p != 3 {
            problems.push(format!("quasi-elliptic fibrations need characteristic 2 or 3, not {p}"));
        }
        let mut total = 4u64;
        let mut comps = 0u64;
        for f in &profile.fibers {
            let t = f.fiber;
            if !t.is_additive() {
                problems.push(format!("fiber {t} is not additive"));
            }
            if f.delta != 0 {
                problems.push(format!("fiber {t} has wild ramification {} on a quasi-elliptic fibration", f.delta));
            }
            let e = t.euler_number() as u64;
            if e > 2 {
                total += e - 2;
            }
            if t.is_reducible() {
                comps += t.component_count() as u64;
                match p {
                    3 if !matches!(t, FiberType::IV | FiberType::IVStar | FiberType::IIStar) => {
                        problems.push(format!("reducible fiber {t} cannot occur on a quasi-elliptic fibration in characteristic 3"));
                    }
                    2 if t == FiberType::IV => {
                        warnings.push(format!("fiber {t} in characteristic 2 is accepted without a classification check"));
                    }
                    _ => {}
                }
            }
        }
        (total, comps)
    } else {
        let mut total = 0u64;
        let mut comps = 0u64;
        for f in profile.singular() {
            let t = f.fiber;
            if f.delta != 0 && (!t.is_additive() || (p != 2 && p != 3)) {
                problems.push(format!("wild ramification on {t} needs an additive fiber in characteristic 2 or 3"));
            }
            total += t.euler_number() as u64 + f.delta as u64;
            comps += t.component_count() as u64;
        }
        (total, comps)
    };
    if euler_total != 24 {
        problems.push(format!("Euler numbers add up to {euler_total}, not 24"));
    }
    BudgetReport { ok: problems.is_empty(), euler_total, components, problems, warnings }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibrationError {
    #[error("profile fails the Euler budget: {0}")]
    BudgetFailed(String),
    #[error("unsupported surface context: {0}")]
    UnsupportedContext(String),
}

fn require_budget(profile: &FibrationProfile) -> Result<BudgetReport, FibrationError> {
    let r = budget_check(profile);
    if r.ok {
        Ok(r)
    } else {
        Err(FibrationError::BudgetFailed(r.problems.join("; ")))
    }
}

/// Upper bound on the number of rational curves that can be fiber components.
///
/// Quasi-elliptic: 20 plus the number of reducible fibers; irreducible cuspidal
/// fibers are not counted.
pub fn rational_component_bound(profile: &FibrationProfile) -> Result<u64, FibrationError> {
    let r = require_budget(profile)?;
    if profile.quasi_elliptic {
        Ok(20 + profile.fibers.iter().filter(|f| f.fiber.is_reducible()).count() as u64)
    } else {
        Ok(r.components)
    }
}

/// `2 + Σ (m_t − 1) + mw_rank`.
pub fn shioda_tate_rank(profile: &FibrationProfile, mw_rank: u64) -> Result<u64, FibrationError> {
    require_budget(profile)?;
    Ok(trivial_rank(profile) + mw_rank)
}

fn trivial_rank(profile: &FibrationProfile) -> u64 {
    2 + profile.singular().map(|f| f.fiber.component_count() as u64 - 1).sum::<u64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformProfile {
    /// Components per fiber, i.e. the fibers are `I_n`.
    pub n: u32,
    pub count: u32,
    pub shioda_tate: u64,
}

impl UniformProfile {
    pub fn fiber(&self) -> FiberType {
        FiberType::I(self.n)
    }

    pub fn to_profile(&self, characteristic: u64) -> FibrationProfile {
        FibrationProfile::elliptic(characteristic, &[(self.fiber(), self.count as usize)])
    }
}

impl fmt::Display for UniformProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.count, self.fiber())
    }
}

/// All `k × I_n` with `n·k = 24`, `n ≥ 2` and Shioda–Tate rank at most `rho_max`.
pub fn enumerate_uniform(rho_max: u64) -> Vec<UniformProfile> {
    (2..=24u32)
        .filter(|n| 24 % n == 0)
        .map(|n| {
            let count = 24 / n;
            UniformProfile { n, count, shioda_tate: 2 + (count * (n - 1)) as u64 }
        })
        .filter(|u| u.shioda_tate <= rho_max)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceContext {
    pub characteristic: u64,
    pub unirational: Option<bool>,
    pub artin_invariant: Option<u32>,
    pub rho_max: u64,
}

impl SurfaceContext {
    pub fn new(characteristic: u64) -> Self {
        let rho_max = if characteristic == 0 { 20 } else { 22 };
        Self { characteristic, unirational: None, artin_invariant: None, rho_max }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveCount {
    /// All rational curves of degree ≤ d.
    Sd,
    /// Rational curves of degree ≤ d other than cuspidal genus one curves.
    SdPrime,
}

impl fmt::Display for CurveCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveCount::Sd => "S_d",
            CurveCount::SdPrime => "S_d'",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdBound {
    pub bound: u64,
    /// The bound holds for `h > threshold·d²`.
    pub threshold: Rational,
    pub count: CurveCount,
    pub regime: &'static str,
    /// Bound on lines (d = 1) when sharper than `bound`.
    pub lines_bound: Option<u64>,
    pub notes: Vec<String>,
}

pub fn sd_bound(ctx: &SurfaceContext, restricted: bool) -> Result<SdBound, FibrationError> {
    let p = ctx.characteristic;
    if p != 0 && !is_prime(p) {
        return Err(FibrationError::UnsupportedContext(format!("characteristic {p} is neither 0 nor prime")));
    }
    if p == 0 {
        if ctx.unirational == Some(true) {
            return Err(FibrationError::UnsupportedContext("K3 surfaces in characteristic 0 are not unirational".into()));
        }
        if ctx.artin_invariant.is_some() {
            return Err(FibrationError::UnsupportedContext("Artin invariant needs positive characteristic".into()));
        }
        if ctx.rho_max != 20 {
            return Err(FibrationError::UnsupportedContext("Picard rank is at most 20 in characteristic 0".into()));
        }
    } else if ctx.rho_max != 20 && ctx.rho_max != 22 {
        return Err(FibrationError::UnsupportedContext(format!("rho_max must be 20 or 22, not {}", ctx.rho_max)));
    }
    if let Some(s) = ctx.artin_invariant {
        if !(1..=10).contains(&s) {
            return Err(FibrationError::UnsupportedContext(format!("Artin invariant {s} outside 1..=10")));
        }
    }

    let general = SdBound {
        bound: 24,
        threshold: int(42),
        count: CurveCount::Sd,
        regime: "characteristic other than 2 and 3",
        lines_bound: None,
        notes: vec![],
    };
    let non_unirational = ctx.unirational == Some(false);
    let mut out = match p {
        2 if non_unirational => SdBound { regime: "characteristic 2, not unirational", ..general },
        2 => SdBound {
            bound: 40,
            threshold: ratio(185, 4),
            count: CurveCount::SdPrime,
            regime: "characteristic 2, general",
            lines_bound: Some(25),
            notes: vec!["at most 25 lines; a surface attaining 25 is expected, not proven".into()],
        },
        3 if non_unirational || ctx.artin_invariant.is_some_and(|s| s > 6) => {
            SdBound { regime: "characteristic 3, not unirational or Artin invariant above 6", ..general }
        }
        3 => SdBound {
            bound: 30,
            threshold: int(43),
            count: CurveCount::SdPrime,
            regime: "characteristic 3, general",
            lines_bound: None,
            notes: vec![],
        },
        _ => general,
    };
    if out.count == CurveCount::SdPrime {
        out.notes.push("for d <= 2 every rational curve is smooth, so S_d' = S_d".into());
        if !restricted {
            out.notes.push("no bound on the unrestricted count S_d is known here; returning the S_d' bound".into());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalEntry {
    pub name: &'static str,
    pub characteristic: u64,
    pub quasi_elliptic: bool,
    pub fibers: &'static [(FiberType, usize)],
    /// Root type of the curves supported on the configuration.
    pub root_type: &'static str,
    pub mordell_weil: &'static str,
    pub note: &'static str,
}

impl ExtremalEntry {
    pub fn profile(&self) -> FibrationProfile {
        FibrationProfile {
            fibers: expand(self.fibers),
            quasi_elliptic: self.quasi_elliptic,
            characteristic: self.characteristic,
        }
    }
}

const EXTREMAL: &[ExtremalEntry] = &[
    ExtremalEntry {
        name: "extremal-I7-I7-IIstar",
        characteristic: 7,
        quasi_elliptic: false,
        fibers: &[(FiberType::I(7), 2), (FiberType::IIStar, 1)],
        root_type: "2A6~+E8~",
        mordell_weil: "trivial",
        note: "only extremal elliptic K3 with three singular fibres fully supported on the configuration",
    },
    ExtremalEntry {
        name: "qe3-3E6~+A2-two-sections",
        characteristic: 3,
        quasi_elliptic: true,
        fibers: &[(FiberType::IVStar, 3), (FiberType::IV, 1)],
        root_type: "3E6~+A2",
        mordell_weil: "Z/3Z",
        note: "two sections from the Mordell-Weil group",
    },
    ExtremalEntry {
        name: "qe2-3D6~+2A1",
        characteristic: 2,
        quasi_elliptic: true,
        fibers: &[(FiberType::IStar(2), 3), (FiberType::III, 2)],
        root_type: "3D6~+2A1",
        mordell_weil: "contains Z/2Z",
        note: "",
    },
    ExtremalEntry {
        name: "qe2-2E7~+D6~",
        characteristic: 2,
        quasi_elliptic: true,
        fibers: &[(FiberType::IIIStar, 2), (FiberType::IStar(2), 1)],
        root_type: "2E7~+D6~",
        mordell_weil: "Z/2Z",
        note: "",
    },
    ExtremalEntry {
        name: "ell2-A11~+E6~+A3",
        characteristic: 2,
        quasi_elliptic: false,
        fibers: &[(FiberType::I(12), 1), (FiberType::IVStar, 1), (FiberType::I(4), 1)],
        root_type: "A11~+E6~+A3",
        mordell_weil: "Z/3Z",
        note: "fewer than three fibres fully supported on the configuration",
    },
    ExtremalEntry {
        name: "qe3-2E6~+E6+A2",
        characteristic: 3,
        quasi_elliptic: true,
        fibers: &[(FiberType::IVStar, 3), (FiberType::IV, 1)],
        root_type: "2E6~+E6+A2",
        mordell_weil: "Z/3Z",
        note: "fewer than three fibres fully supported on the configuration",
    },
    ExtremalEntry {
        name: "qe3-3E6~+A2-three-sections",
        characteristic: 3,
        quasi_elliptic: true,
        fibers: &[(FiberType::IVStar, 3), (FiberType::IV, 1)],
        root_type: "3E6~+A2",
        mordell_weil: "Z/3Z",
        note: "all three sections contained in the configuration",
    },
];

pub fn extremal_table() -> &'static [ExtremalEntry] {
    EXTREMAL
}

/// Table entries with the same characteristic, fibration kind and singular fiber multiset.
pub fn extremal_lookup(profile: &FibrationProfile) -> Vec<&'static ExtremalEntry> {
    let key = profile.fiber_multiset();
    EXTREMAL
        .iter()
        .filter(|e| {
            e.characteristic == profile.characteristic
                && e.quasi_elliptic == profile.quasi_elliptic
                && e.profile().fiber_multiset() == key
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredCurve {
    pub label: String,
    pub pa: u32,
    pub h_dot: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredModel {
    pub h_square: i64,
    pub h_two_divisible: bool,
    pub curves: Vec<DeclaredCurve>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedCondition {
    /// 1: positive on curves; 2: more than 2 on genus one curves; 3: square condition.
    pub condition: u8,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VeryAmpleVerdict {
    pub pass: bool,
    pub failed: Vec<FailedCondition>,
    pub notes: Vec<String>,
}

pub fn very_ample_check(model: &DeclaredModel) -> VeryAmpleVerdict {
    let mut failed = Vec::new();
    for c in &model.curves {
        if c.h_dot <= 0 {
            failed.push(FailedCondition { condition: 1, detail: format!("H.{} = {} is not positive", c.label, c.h_dot) });
        }
    }
    for c in model.curves.iter().filter(|c| c.pa == 1) {
        if c.h_dot <= 2 {
            failed.push(FailedCondition { condition: 2, detail: format!("H.{} = {} is at most 2 on a genus one curve", c.label, c.h_dot) });
        }
    }
    if model.h_square < 4 {
        failed.push(FailedCondition { condition: 3, detail: format!("H^2 = {} is below 4", model.h_square) });
    } else if model.h_square == 8 && model.h_two_divisible {
        failed.push(FailedCondition { condition: 3, detail: "H^2 = 8 and H is 2-divisible".into() });
    }
    VeryAmpleVerdict {
        pass: failed.is_empty(),
        failed,
        notes: vec![
            "verified on declared classes, not a proof of very-ampleness".into(),
            "the criterion assumes characteristic other than 2".into(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FiberType::*;

    #[test]
    fn budget_examples() {
        let p = FibrationProfile::elliptic(0, &[(I(4), 6)]);
        let r = budget_check(&p);
        assert!(r.ok);
        assert_eq!(r.components, 24);
        assert_eq!(rational_component_bound(&p), Ok(24));

        let p = FibrationProfile::quasi_elliptic(3, &[(IV, 10)]);
        assert!(budget_check(&p).ok);
        assert_eq!(rational_component_bound(&p), Ok(30));

        let p = FibrationProfile::quasi_elliptic(2, &[(III, 20)]);
        assert!(budget_check(&p).ok);
        assert_eq!(rational_component_bound(&p), Ok(40));
    }

    #[test]
    fn budget_failures() {
        let p = FibrationProfile::elliptic(0, &[(I(4), 5)]);
        assert!(!budget_check(&p).ok);
        assert!(rational_component_bound(&p).is_err());
        assert!(!budget_check(&FibrationProfile::quasi_elliptic(5, &[(IV, 10)])).ok);
        assert!(!budget_check(&FibrationProfile::quasi_elliptic(3, &[(III, 20)])).ok);
        let mut p = FibrationProfile::elliptic(5, &[(II, 10)]);
        p.fibers.push(FiberInstance { fiber: II, delta: 2 });
        assert!(!budget_check(&p).ok);
        p.characteristic = 3;
        assert!(budget_check(&p).ok);
    }

    #[test]
    fn shioda_tate_examples() {
        let st = |n, k| shioda_tate_rank(&FibrationProfile::elliptic(0, &[(I(n), k)]), 0).unwrap();
        assert_eq!(st(4, 6), 20);
        assert_eq!(st(6, 4), 22);
        assert_eq!(st(8, 3), 23);
    }

    #[test]
    fn uniform() {
        let names = |r| enumerate_uniform(r).iter().map(|u| u.to_string()).collect::<Vec<_>>();
        assert_eq!(names(22), ["12xI2", "8xI3", "6xI4", "4xI6"]);
        assert_eq!(names(20), ["12xI2", "8xI3", "6xI4"]);
        assert_eq!(names(14), ["12xI2"]);
    }

    #[test]
    fn sd_examples() {
        let b = sd_bound(&SurfaceContext::new(5), true).unwrap();
        assert_eq!((b.bound, b.threshold, b.count), (24, int(42), CurveCount::Sd));
        let b = sd_bound(&SurfaceContext::new(3), true).unwrap();
        assert_eq!((b.bound, b.threshold, b.count), (30, int(43), CurveCount::SdPrime));
        let b = sd_bound(&SurfaceContext::new(2), true).unwrap();
        assert_eq!((b.bound, b.threshold, b.count), (40, ratio(185, 4), CurveCount::SdPrime));
        assert_eq!(b.lines_bound, Some(25));
        let mut ctx = SurfaceContext::new(3);
        ctx.artin_invariant = Some(7);
        assert_eq!(sd_bound(&ctx, true).unwrap().bound, 24);
        let mut ctx = SurfaceContext::new(0);
        ctx.unirational = Some(true);
        assert!(matches!(sd_bound(&ctx, true), Err(FibrationError::UnsupportedContext(_))));
        let b = sd_bound(&SurfaceContext::new(2), false).unwrap();
        assert_eq!(b.bound, 40);
        assert_eq!(b.notes.len(), 3);
    }

    #[test]
    fn extremal() {
        let p = FibrationProfile::elliptic(7, &[(I(7), 2), (IIStar, 1)]);
        let hits = extremal_lookup(&p);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].mordell_weil, "trivial");
        assert!(extremal_lookup(&FibrationProfile::elliptic(5, &[(I(7), 2), (IIStar, 1)])).is_empty());
        let p = FibrationProfile::quasi_elliptic(3, &[(IVStar, 3), (IV, 1)]);
        let hits = extremal_lookup(&p);
        assert_eq!(hits.len(), 3);
        assert!(hits.iter().all(|h| h.mordell_weil == "Z/3Z"));
        for e in extremal_table() {
            assert!(budget_check(&e.profile()).ok, "{}", e.name);
        }
    }

    #[test]
    fn very_ample() {
        let model = |h_e, two_div| DeclaredModel {
            h_square: 8,
            h_two_divisible: two_div,
            curves: vec![
                DeclaredCurve { label: "C".into(), pa: 0, h_dot: 1 },
                DeclaredCurve { label: "E".into(), pa: 1, h_dot: h_e },
            ],
        };
        assert!(very_ample_check(&model(5, false)).pass);
        let v = very_ample_check(&model(2, false));
        assert_eq!(v.failed.iter().map(|f| f.condition).collect::<Vec<_>>(), vec![2]);
        let v = very_ample_check(&model(5, true));
        assert_eq!(v.failed.iter().map(|f| f.condition).collect::<Vec<_>>(), vec![3]);
    }
}
