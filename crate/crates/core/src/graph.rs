//! Weighted intersection graphs of rational curves and the lattice they span.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{self, int, ratio, Rational, Signature, SymMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateId(String),
    #[error("edge references unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("self-loop on `{0}`: a curve's square lives on the vertex")]
    SelfLoop(String),
    #[error("edge `{0}`-`{1}` listed twice")]
    DuplicateEdge(String, String),
    #[error("vertex `{id}` has odd square {square}")]
    OddSquare { id: String, square: i64 },
    #[error("vertex `{id}` has square {square} < -2")]
    SquareBelowMinusTwo { id: String, square: i64 },
    #[error("vertex `{0}` has degree 0; degrees must be positive")]
    ZeroDegree(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveVertex {
    pub id: String,
    /// Self-intersection `C²`.
    pub square: i64,
    /// Polarization degree `C.H`.
    pub degree: u64,
}

impl CurveVertex {
    pub fn new(id: impl Into<String>, square: i64, degree: u64) -> Self {
        Self { id: id.into(), square, degree }
    }

    pub fn root(id: impl Into<String>) -> Self {
        Self::new(id, -2, 1)
    }
}

/// A finite configuration of curves: vertices carry `C²` and `C.H`, edges carry `C.C'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveConfig {
    vertices: Vec<CurveVertex>,
    edges: BTreeMap<(usize, usize), u32>,
}

impl CurveConfig {
    pub fn new<S: AsRef<str>>(
        vertices: Vec<CurveVertex>,
        edges: impl IntoIterator<Item = (S, S, u32)>,
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(v.id.clone()));
            }
        }
        let lookup = |id: &str| {
            index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
        };
        let mut indexed = Vec::new();
        for (a, b, m) in edges {
            indexed.push((lookup(a.as_ref())?, lookup(b.as_ref())?, m));
        }
        Self::from_indices(vertices, indexed)
    }

    pub fn from_indices(
        vertices: Vec<CurveVertex>,
        edges: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.id.as_str()) {
                return Err(GraphError::DuplicateId(v.id.clone()));
            }
            if v.square % 2 != 0 {
                return Err(GraphError::OddSquare { id: v.id.clone(), square: v.square });
            }
            if v.square < -2 {
                return Err(GraphError::SquareBelowMinusTwo { id: v.id.clone(), square: v.square });
            }
            if v.degree == 0 {
                return Err(GraphError::ZeroDegree(v.id.clone()));
            }
        }
        let n = vertices.len();
        let mut map = BTreeMap::new();
        for (a, b, m) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::IndexOutOfRange(x));
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(vertices[a].id.clone()));
            }
            let key = (a.min(b), a.max(b));
            if map.contains_key(&key) {
                return Err(GraphError::DuplicateEdge(
                    vertices[key.0].id.clone(),
                    vertices[key.1].id.clone(),
                ));
            }
            if m > 0 {
                map.insert(key, m);
            }
        }
        Ok(Self { vertices, edges: map })
    }

    /// Vertices `v0, v1, …` with the given squares and degree 1.
    pub fn from_graph(squares: &[i64], edges: &[(usize, usize, u32)]) -> Result<Self, GraphError> {
        let vertices = squares
            .iter()
            .enumerate()
            .map(|(i, &s)| CurveVertex::new(format!("v{i}"), s, 1))
            .collect();
        Self::from_indices(vertices, edges.iter().copied())
    }

    /// `n` curves of square −2 and degree 1 with simple edges.
    pub fn roots(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let e: Vec<_> = edges.iter().map(|&(a, b)| (a, b, 1)).collect();
        Self::from_graph(&vec![-2; n], &e)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[CurveVertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &CurveVertex {
        &self.vertices[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn ids(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.vertices[i].id.clone()).collect()
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        if a == b {
            return 0;
        }
        self.edges.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    /// Edges with positive multiplicity as `((i, j), mult)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.multiplicity(u, v) > 0).collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.vertices.iter().map(|v| v.degree).collect()
    }

    pub fn max_degree(&self) -> u64 {
        self.vertices.iter().map(|v| v.degree).max().unwrap_or(0)
    }

    /// The induced configuration on `idx`, in that order.
    pub fn induced(&self, idx: &[usize]) -> CurveConfig {
        let vertices = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut edges = BTreeMap::new();
        for a in 0..idx.len() {
            for b in (a + 1)..idx.len() {
                let m = self.multiplicity(idx[a], idx[b]);
                if m > 0 {
                    edges.insert((a, b), m);
                }
            }
        }
        CurveConfig { vertices, edges }
    }

    /// Orthogonal sum; vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &CurveConfig) -> Result<CurveConfig, GraphError> {
        let offset = self.len();
        let vertices = self.vertices.iter().chain(&other.vertices).cloned().collect();
        let edges = self
            .edges()
            .map(|((a, b), m)| (a, b, m))
            .chain(other.edges().map(|((a, b), m)| (a + offset, b + offset, m)));
        CurveConfig::from_indices(vertices, edges)
    }

    /// Connected components (by positive intersection), each sorted, ordered by first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected_subset(&self, idx: &[usize]) -> bool {
        let Some(&first) = idx.first() else { return true };
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(v) = stack.pop() {
            for &u in &set {
                if !seen.contains(&u) && self.multiplicity(u, v) > 0 {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        seen.len() == set.len()
    }
}

/// Gram matrix of the intersection pairing in vertex order.
pub fn gram(cfg: &CurveConfig) -> SymMatrix {
    SymMatrix::from_upper(cfg.len(), |i, j| {
        if i == j {
            int(cfg.vertex(i).square)
        } else {
            int(i64::from(cfg.multiplicity(i, j)))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeKind {
    /// Negative definite.
    Elliptic,
    /// Negative semi-definite with nonzero kernel.
    Parabolic,
    /// Exactly one positive direction.
    Hyperbolic,
    /// Two or more positive directions; cannot sit inside a K3 Picard lattice.
    Invalid,
}

impl LatticeKind {
    pub fn from_signature(s: &Signature) -> Self {
        match (s.n_plus, s.n_zero) {
            (0, 0) => LatticeKind::Elliptic,
            (0, _) => LatticeKind::Parabolic,
            (1, _) => LatticeKind::Hyperbolic,
            _ => LatticeKind::Invalid,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LatticeKind::Elliptic => "Elliptic",
            LatticeKind::Parabolic => "Parabolic",
            LatticeKind::Hyperbolic => "Hyperbolic",
            LatticeKind::Invalid => "Invalid",
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LatticeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Elliptic" => Ok(LatticeKind::Elliptic),
            "Parabolic" => Ok(LatticeKind::Parabolic),
            "Hyperbolic" => Ok(LatticeKind::Hyperbolic),
            "Invalid" => Ok(LatticeKind::Invalid),
            other => Err(format!("unknown lattice kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeClass {
    pub kind: LatticeKind,
    pub signature: Signature,
    /// Mutually orthogonal integer vectors of positive square, one per positive direction.
    pub positive_vectors: Vec<Vec<BigInt>>,
}

pub fn classify(cfg: &CurveConfig) -> LatticeClass {
    let d = exact::diagonalize(&gram(cfg));
    let signature = d.signature();
    LatticeClass {
        kind: LatticeKind::from_signature(&signature),
        signature,
        positive_vectors: d.positive_vectors(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Distinct curves in a negative definite configuration meet in 0 or 1 points.
    EllipticPairing,
    EllipticSquare,
    /// Distinct curves in a negative semi-definite configuration meet with multiplicity ≤ 2.
    ParabolicPairing,
    ParabolicSquare,
    /// Isotropic divisors are orthogonal to every curve of a parabolic configuration.
    IsotropicOrthogonal,
    HodgeIndex,
    DegreeCap,
    /// `C² ≤ (C.H)²/H²`.
    SquareBound,
    /// `C.C' ≤ d_C·d_C'`.
    Bezout,
    /// `C.C' ≤ d_C·d_C'/h` for curves of non-negative square.
    IsotropicPair,
    /// `C.C' ≤ 2` for two (−2)-curves once `h > 42d²`.
    RootPairing,
}

impl Rule {
    pub fn label(&self) -> &'static str {
        match self {
            Rule::EllipticPairing => "C.C' in {0,1}",
            Rule::EllipticSquare => "C^2 = -2",
            Rule::ParabolicPairing => "C.C' in {0,1,2}",
            Rule::ParabolicSquare => "C^2 <= 0",
            Rule::IsotropicOrthogonal => "D.C = 0",
            Rule::HodgeIndex => "n_plus <= 1",
            Rule::DegreeCap => "d_C <= d",
            Rule::SquareBound => "C^2 <= (C.H)^2/H^2",
            Rule::Bezout => "C.C' <= d_C d_C'",
            Rule::IsotropicPair => "C.C' = 0 for isotropic pairs",
            Rule::RootPairing => "C.C' <= 2",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A named constraint breach; `slack` is the amount by which the bound is exceeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub vertices: Vec<String>,
    pub slack: Rational,
}

impl Violation {
    fn new(rule: Rule, vertices: Vec<String>, slack: Rational) -> Self {
        Self { rule, vertices, slack }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated by [{}] (excess {})",
            self.rule,
            self.vertices.join(", "),
            exact::fmt_rational(&self.slack)
        )
    }
}

/// Checks the multiplicity constraints that hold for configurations of the given class.
/// Hyperbolic configurations carry no such constraints; an invalid signature is itself reported.
pub fn validate_pairings(cfg: &CurveConfig, class: &LatticeClass) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = cfg.len();
    let pair = |a: usize, b: usize| cfg.ids(&[a, b]);
    match class.kind {
        LatticeKind::Elliptic => {
            for (i, v) in cfg.vertices().iter().enumerate() {
                if v.square != -2 {
                    out.push(Violation::new(
                        Rule::EllipticSquare,
                        cfg.ids(&[i]),
                        int((v.square + 2).abs()),
                    ));
                }
            }
            for ((a, b), m) in cfg.edges() {
                if m > 1 {
                    out.push(Violation::new(Rule::EllipticPairing, pair(a, b), int(i64::from(m) - 1)));
                }
            }
        }
        LatticeKind::Parabolic => {
            for (i, v) in cfg.vertices().iter().enumerate() {
                if v.square > 0 {
                    out.push(Violation::new(Rule::ParabolicSquare, cfg.ids(&[i]), int(v.square)));
                }
            }
            for ((a, b), m) in cfg.edges() {
                if m > 2 {
                    out.push(Violation::new(Rule::ParabolicPairing, pair(a, b), int(i64::from(m) - 2)));
                }
            }
            for d in 0..n {
                if cfg.vertex(d).square != 0 {
                    continue;
                }
                for c in 0..n {
                    let m = cfg.multiplicity(d, c);
                    if m > 0 {
                        out.push(Violation::new(
                            Rule::IsotropicOrthogonal,
                            pair(d, c),
                            int(i64::from(m)),
                        ));
                    }
                }
            }
        }
        LatticeKind::Hyperbolic => {}
        LatticeKind::Invalid => out.push(Violation::new(
            Rule::HodgeIndex,
            Vec::new(),
            int(class.signature.n_plus as i64 - 1),
        )),
    }
    out
}

/// The nondegenerate quotient `L = M/ker(M)`, presented on a subset of the vertices
/// whose images form a rational basis of `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    /// Vertex indices forming the basis.
    pub basis: Vec<usize>,
    /// Gram matrix of `L` in that basis.
    pub gram: SymMatrix,
    /// Row `v` holds the coordinates of vertex `v`'s image in the basis.
    pub projection: Vec<Vec<Rational>>,
}

impl Quotient {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

pub fn quotient_by_kernel(cfg: &CurveConfig) -> Quotient {
    let g = gram(cfg);
    let basis = exact::independent_rows(&g);
    let lg = g.principal(&basis);
    let projection = if basis.len() == cfg.len() {
        SymMatrix::identity(cfg.len()).rows()
    } else if basis.is_empty() {
        vec![Vec::new(); cfg.len()]
    } else {
        let inv = exact::inverse(&lg).expect("principal submatrix on independent rows is nonsingular");
        (0..cfg.len())
            .map(|v| {
                let col: Vec<Rational> = basis.iter().map(|&s| g.get(s, v).clone()).collect();
                inv.mul_vec(&col)
            })
            .collect()
    };
    Quotient { basis, gram: lg, projection }
}

/// Hodge-index and Bezout constraints for curves of degree ≤ `d` on a surface of degree `2h`.
pub fn hodge_filter(cfg: &CurveConfig, d: u64, h: u64) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = cfg.len();
    let two_h = 2 * h as i64;
    let strong = h > 42 * d * d;
    for (i, v) in cfg.vertices().iter().enumerate() {
        if v.degree > d {
            out.push(Violation::new(Rule::DegreeCap, cfg.ids(&[i]), int(v.degree as i64 - d as i64)));
        }
        let dc = v.degree as i64;
        // C²·2h ≤ d_C²; with h > 42d² this forces C² ∈ {0, −2}.
        if v.square * two_h > dc * dc {
            out.push(Violation::new(
                Rule::SquareBound,
                cfg.ids(&[i]),
                int(v.square) - ratio(dc * dc, two_h),
            ));
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let m = i64::from(cfg.multiplicity(a, b));
            if m == 0 {
                continue;
            }
            let (va, vb) = (cfg.vertex(a), cfg.vertex(b));
            let prod = (va.degree * vb.degree) as i64;
            if m > prod {
                out.push(Violation::new(Rule::Bezout, cfg.ids(&[a, b]), int(m - prod)));
            }
            if va.square >= 0 && vb.square >= 0 && m * h as i64 > prod {
                out.push(Violation::new(
                    Rule::IsotropicPair,
                    cfg.ids(&[a, b]),
                    int(m) - ratio(prod, h as i64),
                ));
            }
            if strong && va.square == -2 && vb.square == -2 && m > 2 {
                out.push(Violation::new(Rule::RootPairing, cfg.ids(&[a, b]), int(m - 2)));
            }
        }
    }
    out
}

/// Whether `v` annihilates the Gram matrix of `cfg`.
pub fn in_kernel(cfg: &CurveConfig, v: &[BigInt]) -> bool {
    gram(cfg).mul_int_vec(v).iter().all(|x| x.is_zero())
}
