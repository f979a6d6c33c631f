//! Recognition of ADE and extended (affine) Dynkin diagrams among (−2)-curve graphs.
//!
//! A connected component is first classified combinatorially (degree sequence,
//! cycle detection, arm lengths around branch vertices) and the guess is then
//! confirmed against the exact signature of its Gram matrix. Components that
//! fail either step are reported as unrecognized rather than rejected.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};

use crate::exact::{self, Signature};
use crate::graph::{self, CurveConfig, LatticeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootKind {
    A(usize),
    D(usize),
    E(usize),
    AffineA(usize),
    AffineD(usize),
    AffineE(usize),
    IsotropicVertex,
    /// Two (−2)-curves meeting with multiplicity 2.
    A1Tilde,
}

impl RootKind {
    /// Rank of the lattice spanned modulo its kernel.
    pub fn rank(&self) -> usize {
        match *self {
            RootKind::A(n) | RootKind::D(n) | RootKind::E(n) => n,
            RootKind::AffineA(n) | RootKind::AffineD(n) | RootKind::AffineE(n) => n,
            RootKind::IsotropicVertex => 0,
            RootKind::A1Tilde => 1,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            RootKind::A(n) | RootKind::D(n) | RootKind::E(n) => n,
            RootKind::AffineA(n) | RootKind::AffineD(n) | RootKind::AffineE(n) => n + 1,
            RootKind::IsotropicVertex => 1,
            RootKind::A1Tilde => 2,
        }
    }

    /// Whether the component is degenerate, i.e. supports an isotropic divisor.
    pub fn is_degenerate(&self) -> bool {
        !matches!(self, RootKind::A(_) | RootKind::D(_) | RootKind::E(_))
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            RootKind::A(n) => n >= 1,
            RootKind::D(n) => n >= 4,
            RootKind::E(n) => (6..=8).contains(&n),
            RootKind::AffineA(n) => n >= 2,
            RootKind::AffineD(n) => n >= 4,
            RootKind::AffineE(n) => (6..=8).contains(&n),
            RootKind::IsotropicVertex | RootKind::A1Tilde => true,
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootKind::A(n) => write!(f, "A({n})"),
            RootKind::D(n) => write!(f, "D({n})"),
            RootKind::E(n) => write!(f, "E({n})"),
            RootKind::AffineA(n) => write!(f, "AffineA({n})"),
            RootKind::AffineD(n) => write!(f, "AffineD({n})"),
            RootKind::AffineE(n) => write!(f, "AffineE({n})"),
            RootKind::IsotropicVertex => f.write_str("IsotropicVertex"),
            RootKind::A1Tilde => f.write_str("A1Tilde"),
        }
    }
}

impl FromStr for RootKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "IsotropicVertex" => return Ok(RootKind::IsotropicVertex),
            "A1Tilde" => return Ok(RootKind::A1Tilde),
            _ => {}
        }
        let (head, rest) = s.split_once('(').ok_or_else(|| format!("bad root kind `{s}`"))?;
        let n: usize = rest
            .strip_suffix(')')
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| format!("bad root kind `{s}`"))?;
        let kind = match head {
            "A" => RootKind::A(n),
            "D" => RootKind::D(n),
            "E" => RootKind::E(n),
            "AffineA" => RootKind::AffineA(n),
            "AffineD" => RootKind::AffineD(n),
            "AffineE" => RootKind::AffineE(n),
            _ => return Err(format!("bad root kind `{s}`")),
        };
        if kind.is_valid() {
            Ok(kind)
        } else {
            Err(format!("root kind `{s}` out of range"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootComponent {
    pub kind: RootKind,
    /// Vertex indices into the configuration, ascending.
    pub vertices: Vec<usize>,
    /// Primitive positive kernel vector (in `vertices` order) for degenerate kinds.
    pub kernel: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    pub components: Vec<RootComponent>,
    pub unrecognized: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|c| c.kind.rank()).sum()
    }

    pub fn kinds(&self) -> Vec<RootKind> {
        self.components.iter().map(|c| c.kind).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("configuration is {0}, not negative semi-definite")]
    NotNegativeSemidefinite(LatticeKind),
}

pub fn decompose(cfg: &CurveConfig) -> Result<Decomposition, RootError> {
    let class = graph::classify(cfg);
    if matches!(class.kind, LatticeKind::Hyperbolic | LatticeKind::Invalid) {
        return Err(RootError::NotNegativeSemidefinite(class.kind));
    }
    let mut dec = Decomposition::default();
    for comp in cfg.components() {
        match recognize(cfg, &comp) {
            Some((kind, kernel)) => dec.components.push(RootComponent { kind, vertices: comp, kernel }),
            None => dec.unrecognized.push(comp),
        }
    }
    Ok(dec)
}

/// Recognizes the induced subgraph on a connected vertex set, or `None`.
pub fn recognize(cfg: &CurveConfig, comp: &[usize]) -> Option<(RootKind, Option<Vec<i64>>)> {
    let kind = shape(cfg, comp)?;
    let sub = cfg.induced(comp);
    let g = graph::gram(&sub);
    let n = comp.len();
    if !kind.is_degenerate() {
        return (exact::signature(&g) == Signature::new(0, n, 0)).then_some((kind, None));
    }
    if exact::signature(&g) != Signature::new(0, n - 1, 1) {
        return None;
    }
    let ker = exact::kernel_basis(&g);
    let v = ker.first()?;
    if v.iter().any(|x| !x.is_positive()) {
        return None;
    }
    let v: Vec<i64> = v.iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
    Some((kind, Some(v)))
}

/// Purely combinatorial guess at the diagram type.
pub fn shape(cfg: &CurveConfig, comp: &[usize]) -> Option<RootKind> {
    let n = comp.len();
    if n == 0 || !cfg.is_connected_subset(comp) {
        return None;
    }
    if n == 1 {
        return match cfg.vertex(comp[0]).square {
            0 => Some(RootKind::IsotropicVertex),
            -2 => Some(RootKind::A(1)),
            _ => None,
        };
    }
    if comp.iter().any(|&v| cfg.vertex(v).square != -2) {
        return None;
    }
    if n == 2 {
        return match cfg.multiplicity(comp[0], comp[1]) {
            1 => Some(RootKind::A(2)),
            2 => Some(RootKind::A1Tilde),
            _ => None,
        };
    }
    let mut edges = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            match cfg.multiplicity(comp[a], comp[b]) {
                0 => {}
                1 => edges += 1,
                _ => return None,
            }
        }
    }
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| cfg.multiplicity(comp[a], comp[b]) > 0).collect())
        .collect();
    let deg: Vec<usize> = nbrs.iter().map(Vec::len).collect();

    if edges == n {
        return deg.iter().all(|&d| d == 2).then_some(RootKind::AffineA(n - 1));
    }
    if edges != n - 1 {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    match branch.as_slice() {
        [] => Some(RootKind::A(n)),
        [c] if deg[*c] == 4 => (n == 5).then_some(RootKind::AffineD(4)),
        [c] if deg[*c] == 3 => {
            let mut arms: Vec<usize> = nbrs[*c].iter().map(|&s| arm_length(&nbrs, *c, s)).collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Some(RootKind::D(n)),
                [1, 2, 2] => Some(RootKind::E(6)),
                [1, 2, 3] => Some(RootKind::E(7)),
                [1, 2, 4] => Some(RootKind::E(8)),
                [2, 2, 2] => Some(RootKind::AffineE(6)),
                [1, 3, 3] => Some(RootKind::AffineE(7)),
                [1, 2, 5] => Some(RootKind::AffineE(8)),
                _ => None,
            }
        }
        [b1, b2] if deg[*b1] == 3 && deg[*b2] == 3 => {
            let leaves_at = |b: usize| nbrs[b].iter().filter(|&&u| deg[u] == 1).count();
            (leaves_at(*b1) == 2 && leaves_at(*b2) == 2).then_some(RootKind::AffineD(n - 1))
        }
        _ => None,
    }
}

/// Number of vertices on the arm leaving `center` through `start` (the arm must be a path).
fn arm_length(nbrs: &[Vec<usize>], center: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (center, start, 1);
    loop {
        let next: Vec<usize> = nbrs[cur].iter().copied().filter(|&u| u != prev).collect();
        match next.as_slice() {
            [u] => {
                prev = cur;
                cur = *u;
                len += 1;
            }
            _ => return len,
        }
    }
}

/// Whether the definite part fits into a hyperbolic lattice of rank `rho_max`.
pub fn max_rank_check(dec: &Decomposition, rho_max: usize) -> bool {
    dec.total_rank() + 1 <= rho_max
}

/// A generated standard diagram with its tabulated kernel multiplicities.
#[derive(Debug, Clone)]
pub struct StandardDiagram {
    pub config: CurveConfig,
    pub kernel: Option<Vec<i64>>,
}

/// Builds the standard diagram of `kind`.
///
/// Vertex order: paths in order; `D(n)` is a path `0..n-1` with vertex `n-1` attached to
/// `n-3`; `E(k)` and `AffineE(k)` list the center, then the arms shortest first, each
/// from the center outwards; `AffineD(n)` lists the interior chain, then two leaves on its
/// first vertex and two on its last.
pub fn standard_diagram(kind: RootKind) -> StandardDiagram {
    assert!(kind.is_valid(), "invalid root kind {kind}");
    let (squares, edges, kernel): (Vec<i64>, Vec<(usize, usize, u32)>, Option<Vec<i64>>) = match kind {
        RootKind::IsotropicVertex => (vec![0], vec![], Some(vec![1])),
        RootKind::A1Tilde => (vec![-2, -2], vec![(0, 1, 2)], Some(vec![1, 1])),
        RootKind::A(n) => (vec![-2; n], path(0, n), None),
        RootKind::D(n) => {
            let mut e = path(0, n - 1);
            e.push((n - 3, n - 1, 1));
            (vec![-2; n], e, None)
        }
        RootKind::E(k) => {
            let (e, _) = star(&[1, 2, k - 4]);
            (vec![-2; k], e, None)
        }
        RootKind::AffineA(n) => {
            let mut e = path(0, n + 1);
            e.push((n, 0, 1));
            (vec![-2; n + 1], e, Some(vec![1; n + 1]))
        }
        RootKind::AffineD(n) => {
            let chain = n - 3;
            let mut e = path(0, chain);
            let last = chain - 1;
            e.extend([(0, chain, 1), (0, chain + 1, 1), (last, chain + 2, 1), (last, chain + 3, 1)]);
            let mut k = vec![2; chain];
            k.extend([1, 1, 1, 1]);
            (vec![-2; n + 1], e, Some(k))
        }
        RootKind::AffineE(k) => {
            let (arms, mults): (&[usize], Vec<i64>) = match k {
                6 => (&[2, 2, 2], vec![3, 2, 1, 2, 1, 2, 1]),
                7 => (&[1, 3, 3], vec![4, 2, 3, 2, 1, 3, 2, 1]),
                _ => (&[1, 2, 5], vec![6, 3, 4, 2, 5, 4, 3, 2, 1]),
            };
            let (e, _) = star(arms);
            (vec![-2; k + 1], e, Some(mults))
        }
    };
    StandardDiagram {
        config: CurveConfig::from_graph(&squares, &edges).expect("standard diagrams are well formed"),
        kernel,
    }
}

fn path(start: usize, len: usize) -> Vec<(usize, usize, u32)> {
    (start..start + len.saturating_sub(1)).map(|i| (i, i + 1, 1)).collect()
}

/// Center 0 with arms of the given lengths; returns edges and vertex count.
fn star(arms: &[usize]) -> (Vec<(usize, usize, u32)>, usize) {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next, 1));
            prev = next;
            next += 1;
        }
    }
    (edges, next)
}
