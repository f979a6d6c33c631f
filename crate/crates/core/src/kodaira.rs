//! Kodaira fiber types and Kodaira-type divisors supported on curve configurations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::graph::{self, CurveConfig, LatticeKind};
use crate::roots::{self, RootKind};

/// Default weight cap for the divisor search (the weight of II*).
pub const DEFAULT_MAX_WEIGHT: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberType {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl FiberType {
    pub fn is_multiplicative(&self) -> bool {
        matches!(self, FiberType::I(n) if *n >= 1)
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, FiberType::I(_))
    }

    pub fn is_singular(&self) -> bool {
        *self != FiberType::I(0)
    }

    pub fn is_reducible(&self) -> bool {
        self.component_count() > 1
    }

    /// Number of irreducible components; the smooth fiber I0 counts as one.
    pub fn component_count(&self) -> u32 {
        match *self {
            FiberType::I(0) => 1,
            FiberType::I(n) => n,
            FiberType::IStar(n) => n + 5,
            FiberType::II => 1,
            FiberType::III => 2,
            FiberType::IV => 3,
            FiberType::IVStar => 7,
            FiberType::IIIStar => 8,
            FiberType::IIStar => 9,
        }
    }

    pub fn euler_number(&self) -> u32 {
        match *self {
            FiberType::I(n) => n,
            FiberType::IStar(n) => n + 6,
            FiberType::II => 2,
            FiberType::III => 3,
            FiberType::IV => 4,
            FiberType::IVStar => 8,
            FiberType::IIIStar => 9,
            FiberType::IIStar => 10,
        }
    }

    /// Component multiplicities in canonical order (the order of [`FiberType::diagram`]).
    pub fn multiplicities(&self) -> Vec<u32> {
        match *self {
            FiberType::I(0) => vec![1],
            FiberType::I(n) => vec![1; n as usize],
            FiberType::IStar(n) => {
                let mut m = vec![2; n as usize + 1];
                m.extend([1, 1, 1, 1]);
                m
            }
            FiberType::II => vec![1],
            FiberType::III => vec![1, 1],
            FiberType::IV => vec![1, 1, 1],
            FiberType::IVStar => vec![3, 2, 1, 2, 1, 2, 1],
            FiberType::IIIStar => vec![4, 2, 3, 2, 1, 3, 2, 1],
            FiberType::IIStar => vec![6, 3, 4, 2, 5, 4, 3, 2, 1],
        }
    }

    pub fn weight(&self) -> u32 {
        self.multiplicities().iter().sum()
    }

    /// Dual graph of the components; `None` for the smooth fiber.
    pub fn diagram(&self) -> Option<RootKind> {
        Some(match *self {
            FiberType::I(0) => return None,
            FiberType::I(1) | FiberType::II => RootKind::IsotropicVertex,
            FiberType::I(2) | FiberType::III => RootKind::A1Tilde,
            FiberType::I(n) => RootKind::AffineA(n as usize - 1),
            FiberType::IV => RootKind::AffineA(2),
            FiberType::IStar(n) => RootKind::AffineD(n as usize + 4),
            FiberType::IVStar => RootKind::AffineE(6),
            FiberType::IIIStar => RootKind::AffineE(7),
            FiberType::IIStar => RootKind::AffineE(8),
        })
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::IStar(n) => write!(f, "I*{n}"),
            FiberType::II => f.write_str("II"),
            FiberType::III => f.write_str("III"),
            FiberType::IV => f.write_str("IV"),
            FiberType::IVStar => f.write_str("IV*"),
            FiberType::IIIStar => f.write_str("III*"),
            FiberType::IIStar => f.write_str("II*"),
        }
    }
}

impl FromStr for FiberType {
    type Err = String;

    /// Accepts `I4`, `I(4)`, `I*2`, `I*(2)`, `I2*`, `IV*` and friends.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let fixed = match t {
            "II" => Some(FiberType::II),
            "III" => Some(FiberType::III),
            "IV" => Some(FiberType::IV),
            "IV*" => Some(FiberType::IVStar),
            "III*" => Some(FiberType::IIIStar),
            "II*" => Some(FiberType::IIStar),
            _ => None,
        };
        if let Some(ft) = fixed {
            return Ok(ft);
        }
        let bad = || format!("unknown fiber type `{s}`");
        let rest = t.strip_prefix('I').ok_or_else(bad)?;
        let (star, num) = if let Some(r) = rest.strip_prefix('*') {
            (true, r)
        } else if let Some(r) = rest.strip_suffix('*') {
            (true, r)
        } else {
            (false, rest)
        };
        let num = num
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(num);
        let n: u32 = num.parse().map_err(|_| bad())?;
        Ok(if star { FiberType::IStar(n) } else { FiberType::I(n) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KodairaType {
    pub tag: FiberType,
    pub multiplicities: Vec<u32>,
    pub is_additive: bool,
}

impl KodairaType {
    pub fn component_count(&self) -> u32 {
        self.multiplicities.len() as u32
    }

    pub fn weight(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    pub fn euler_number(&self) -> u32 {
        self.tag.euler_number()
    }
}

pub fn type_table(tag: FiberType) -> KodairaType {
    KodairaType { tag, multiplicities: tag.multiplicities(), is_additive: tag.is_additive() }
}

/// Standard dual graph of a singular fiber, vertices in canonical multiplicity order.
pub fn standard_fiber(tag: FiberType) -> Option<CurveConfig> {
    tag.diagram().map(|k| roots::standard_diagram(k).config)
}

/// What can be read off from the support graph alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisorTag {
    Type(FiberType),
    /// Two curves meeting with multiplicity 2.
    I2OrIII,
    /// Triangle of curves.
    I3OrIV,
}

impl DivisorTag {
    pub fn candidates(&self) -> Vec<FiberType> {
        match self {
            DivisorTag::Type(t) => vec![*t],
            DivisorTag::I2OrIII => vec![FiberType::I(2), FiberType::III],
            DivisorTag::I3OrIV => vec![FiberType::I(3), FiberType::IV],
        }
    }

    /// Inclusive Euler number range over the candidate types.
    pub fn euler_range(&self) -> (u32, u32) {
        let es: Vec<u32> = self.candidates().iter().map(FiberType::euler_number).collect();
        (*es.iter().min().unwrap(), *es.iter().max().unwrap())
    }

    fn from_kind(kind: RootKind) -> Option<Self> {
        Some(match kind {
            RootKind::IsotropicVertex => DivisorTag::Type(FiberType::I(1)),
            RootKind::A1Tilde => DivisorTag::I2OrIII,
            RootKind::AffineA(2) => DivisorTag::I3OrIV,
            RootKind::AffineA(n) => DivisorTag::Type(FiberType::I(n as u32 + 1)),
            RootKind::AffineD(n) => DivisorTag::Type(FiberType::IStar(n as u32 - 4)),
            RootKind::AffineE(6) => DivisorTag::Type(FiberType::IVStar),
            RootKind::AffineE(7) => DivisorTag::Type(FiberType::IIIStar),
            RootKind::AffineE(8) => DivisorTag::Type(FiberType::IIStar),
            _ => return None,
        })
    }
}

impl fmt::Display for DivisorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorTag::Type(t) => t.fmt(f),
            DivisorTag::I2OrIII => f.write_str("I2_OR_III"),
            DivisorTag::I3OrIV => f.write_str("I3_OR_IV"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KodairaDivisor {
    pub tag: DivisorTag,
    pub kind: RootKind,
    /// Vertex indices, ascending.
    pub support: Vec<usize>,
    /// Multiplicity of each support vertex, aligned with `support`.
    pub multiplicities: Vec<u32>,
    /// Set for a single isotropic curve: nodal (I1) or cuspidal (II), reported as I1.
    pub isotropic_vertex: bool,
}

impl KodairaDivisor {
    pub fn weight(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    /// Intersection number D.C with vertex `c` of `cfg`.
    pub fn dot(&self, cfg: &CurveConfig, c: usize) -> i64 {
        self.support
            .iter()
            .zip(&self.multiplicities)
            .map(|(&v, &m)| {
                let pair = if v == c { cfg.vertex(c).square } else { cfg.multiplicity(v, c) as i64 };
                m as i64 * pair
            })
            .sum()
    }
}

/// All minimal-support Kodaira divisors of weight at most `max_weight`,
/// ordered by weight and then by support.
pub fn find_kodaira_divisors(cfg: &CurveConfig, max_weight: Option<u32>) -> Vec<KodairaDivisor> {
    let cap = max_weight.unwrap_or(DEFAULT_MAX_WEIGHT);
    let mut out = Vec::new();
    if cap >= 1 {
        for v in 0..cfg.len() {
            if cfg.vertex(v).square == 0 {
                out.push(KodairaDivisor {
                    tag: DivisorTag::Type(FiberType::I(1)),
                    kind: RootKind::IsotropicVertex,
                    support: vec![v],
                    multiplicities: vec![1],
                    isotropic_vertex: true,
                });
            }
        }
    }

    // Proper subdiagrams of an affine diagram are definite, so growing connected
    // definite sets one vertex at a time reaches every affine support.
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = Vec::new();
    for v in (0..cfg.len()).rev() {
        if cfg.vertex(v).square == -2 {
            seen.insert(vec![v]);
            stack.push(vec![v]);
        }
    }
    while let Some(set) = stack.pop() {
        // an affine support on set + 1 vertices has weight > set.len()
        if set.len() as u32 >= cap {
            continue;
        }
        let mut frontier = BTreeSet::new();
        for &v in &set {
            for u in cfg.neighbors(v) {
                if cfg.vertex(u).square == -2 && !set.contains(&u) {
                    frontier.insert(u);
                }
            }
        }
        for u in frontier {
            let mut next = set.clone();
            next.push(u);
            next.sort_unstable();
            if !seen.insert(next.clone()) {
                continue;
            }
            match roots::shape(cfg, &next) {
                Some(k) if !k.is_degenerate() => stack.push(next),
                Some(_) => {
                    if let Some((kind, Some(ker))) = roots::recognize(cfg, &next) {
                        let mults: Vec<u32> = ker.iter().map(|&x| x as u32).collect();
                        let tag = DivisorTag::from_kind(kind).expect("affine kinds have a fiber type");
                        if mults.iter().sum::<u32>() <= cap {
                            out.push(KodairaDivisor {
                                tag,
                                kind,
                                support: next,
                                multiplicities: mults,
                                isotropic_vertex: false,
                            });
                        }
                    }
                }
                None => {}
            }
        }
    }
    out.sort_by(|a, b| (a.weight(), &a.support).cmp(&(b.weight(), &b.support)));
    out
}

pub fn divisor_degree(div: &KodairaDivisor, cfg: &CurveConfig) -> u64 {
    div.support
        .iter()
        .zip(&div.multiplicities)
        .map(|(&v, &m)| m as u64 * cfg.vertex(v).degree)
        .sum()
}

/// A Kodaira divisor of degree at most 6d on a hyperbolic configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallDivisor {
    pub divisor: KodairaDivisor,
    pub degree: u64,
    /// Curves `(index, D.C)` with D.C > 0.
    pub meeting: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SixDReport {
    pub violations: Vec<SmallDivisor>,
    pub notes: Vec<String>,
}

/// On a hyperbolic configuration with h > 42d², every Kodaira divisor must have degree > 6d.
pub fn exclusion_6d(cfg: &CurveConfig, d: u64, h: u64) -> SixDReport {
    let mut report = SixDReport::default();
    if h <= 42 * d * d {
        report.notes.push(format!("h = {h} is not above 42d^2 = {}", 42 * d * d));
    }
    if cfg.vertices().iter().any(|v| v.degree > d) {
        report.notes.push(format!("some curve has degree above d = {d}"));
    }
    let kind = graph::classify(cfg).kind;
    if kind != LatticeKind::Hyperbolic {
        report.notes.push("not hyperbolic".to_string());
        return report;
    }
    let six_d = 6 * d;
    // degrees are at least 1, so weight <= degree and the cap loses nothing
    let cap = six_d.min(u32::MAX as u64) as u32;
    for div in find_kodaira_divisors(cfg, Some(cap)) {
        let degree = divisor_degree(&div, cfg);
        if degree > six_d {
            continue;
        }
        let meeting = (0..cfg.len())
            .map(|c| (c, div.dot(cfg, c)))
            .filter(|&(_, x)| x > 0)
            .collect();
        report.violations.push(SmallDivisor { divisor: div, degree, meeting });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        let t = type_table(FiberType::IStar(2));
        assert_eq!((t.component_count(), t.weight(), t.euler_number()), (7, 10, 8));
        let t = type_table(FiberType::I(4));
        assert_eq!((t.component_count(), t.weight(), t.euler_number()), (4, 4, 4));
        assert!(!t.is_additive);
        let t = type_table(FiberType::IIStar);
        assert_eq!((t.component_count(), t.weight(), t.euler_number()), (9, 30, 10));
    }

    #[test]
    fn parse_display() {
        for s in ["I0", "I4", "I*0", "I*2", "II", "III", "IV", "IV*", "III*", "II*"] {
            assert_eq!(s.parse::<FiberType>().unwrap().to_string(), s);
        }
        assert_eq!("I(4)".parse::<FiberType>(), Ok(FiberType::I(4)));
        assert_eq!("I*(1)".parse::<FiberType>(), Ok(FiberType::IStar(1)));
        assert_eq!("I2*".parse::<FiberType>(), Ok(FiberType::IStar(2)));
        assert!("V".parse::<FiberType>().is_err());
        assert!("I".parse::<FiberType>().is_err());
    }

    #[test]
    fn four_cycle_is_i4() {
        let cfg = CurveConfig::roots(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let divs = find_kodaira_divisors(&cfg, None);
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].tag, DivisorTag::Type(FiberType::I(4)));
        assert_eq!(divs[0].multiplicities, vec![1, 1, 1, 1]);
        assert_eq!(divisor_degree(&divs[0], &cfg), 4);
    }

    #[test]
    fn star_is_i0_star() {
        let cfg = CurveConfig::roots(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let divs = find_kodaira_divisors(&cfg, None);
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].tag, DivisorTag::Type(FiberType::IStar(0)));
        assert_eq!(divs[0].multiplicities, vec![2, 1, 1, 1, 1]);
        assert_eq!(divisor_degree(&divs[0], &cfg), 6);
    }

    #[test]
    fn double_edge_is_ambiguous() {
        let cfg = CurveConfig::from_graph(&[-2, -2], &[(0, 1, 2)]).unwrap();
        let divs = find_kodaira_divisors(&cfg, None);
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].tag.to_string(), "I2_OR_III");
        assert_eq!(divs[0].tag.euler_range(), (2, 3));
    }

    #[test]
    fn weight_cap_applies() {
        let cfg = CurveConfig::roots(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(find_kodaira_divisors(&cfg, Some(5)).is_empty());
        assert_eq!(find_kodaira_divisors(&cfg, Some(6)).len(), 1);
    }

    #[test]
    fn i_star_two_degree() {
        // interior chain degrees 2, leaves degree 1
        let mut cfg = roots::standard_diagram(RootKind::AffineD(6)).config;
        let squares: Vec<i64> = cfg.vertices().iter().map(|v| v.square).collect();
        let edges: Vec<(usize, usize, u32)> = cfg.edges().map(|((a, b), m)| (a, b, m)).collect();
        let degrees = [2, 2, 2, 1, 1, 1, 1];
        let verts = squares
            .iter()
            .zip(degrees)
            .enumerate()
            .map(|(i, (&s, d))| graph::CurveVertex::new(format!("v{i}"), s, d))
            .collect();
        cfg = CurveConfig::from_indices(verts, edges).unwrap();
        let divs = find_kodaira_divisors(&cfg, None);
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].tag, DivisorTag::Type(FiberType::IStar(2)));
        assert_eq!(divisor_degree(&divs[0], &cfg), 2 * 2 * 3 + 4);
    }

    #[test]
    fn six_d_examples() {
        let cfg = CurveConfig::from_graph(&[-2, -2, -2], &[(0, 1, 2), (0, 2, 1)]).unwrap();
        let rep = exclusion_6d(&cfg, 1, 43);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].meeting, vec![(2, 1)]);

        // I*1 with a curve on one leaf
        let cfg = CurveConfig::roots(
            7,
            &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 6)],
        )
        .unwrap();
        assert_eq!(graph::classify(&cfg).kind, LatticeKind::Hyperbolic);
        let divs = find_kodaira_divisors(&cfg, None);
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].tag, DivisorTag::Type(FiberType::IStar(1)));
        assert!(exclusion_6d(&cfg, 1, 43).violations.is_empty());

        let c4 = CurveConfig::roots(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let rep = exclusion_6d(&c4, 1, 43);
        assert!(rep.violations.is_empty());
        assert_eq!(rep.notes, vec!["not hyperbolic".to_string()]);
    }
}
