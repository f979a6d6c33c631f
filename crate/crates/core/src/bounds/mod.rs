//! Upper bounds on the polarization degree `2h` coming from hyperbolic curve configurations.
//!
//! Three certificates are available. The intrinsic square needs every curve degree pinned.
//! The rough bound and the box bound only need a common cap `d` on the degrees.

pub mod box_cert;
pub mod simplex;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::exact::{self, int, Rational, Signature, SymMatrix};
use crate::graph::{self, CurveConfig, LatticeKind};
pub use box_cert::SplitMethod;

/// Default largest subgraph examined by [`exclude`].
pub const DEFAULT_SUBGRAPH_CAP: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("lattice is degenerate (kernel dimension {nullity})")]
    DegenerateLattice { nullity: usize },
    #[error("lattice has signature {0}, not hyperbolic")]
    NotHyperbolic(Signature),
    #[error("no G0 + G+ decomposition found")]
    NoDecompositionFound,
    #[error("curve `{id}` has degree {degree} above d = {d}")]
    DegreeAboveCap { id: String, degree: u64, d: u64 },
    #[error("d must be positive")]
    ZeroCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntrinsicPolarization {
    /// Vertex indices whose classes form the basis of `M/ker(M)`.
    pub basis: Vec<usize>,
    pub coords: Vec<Rational>,
    pub square: Rational,
    pub exists: bool,
}

/// Solves `C.H = d_C` for all curves on the quotient by the kernel.
pub fn intrinsic_polarization(cfg: &CurveConfig) -> IntrinsicPolarization {
    let g = graph::gram(cfg);
    let degrees: Vec<BigInt> = cfg.vertices().iter().map(|v| BigInt::from(v.degree)).collect();
    let exists = exact::kernel_basis(&g)
        .iter()
        .all(|k| k.iter().zip(&degrees).map(|(a, b)| a * b).sum::<BigInt>().is_zero());
    let q = graph::quotient_by_kernel(cfg);
    if !exists {
        return IntrinsicPolarization { basis: q.basis, coords: vec![], square: Rational::zero(), exists };
    }
    let rhs: Vec<Rational> = q.basis.iter().map(|&s| Rational::from_integer(degrees[s].clone())).collect();
    let coords = if q.basis.is_empty() {
        vec![]
    } else {
        exact::solve(&q.gram, &rhs).expect("quotient Gram matrix is nonsingular")
    };
    let square = exact::dot(&coords, &rhs);
    IntrinsicPolarization { basis: q.basis, coords, square, exists }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    IntrinsicSquare,
    RoughPositiveEntrySum,
    BoxOptimumDecomposition,
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::IntrinsicSquare => "IntrinsicSquare",
            CertificateKind::RoughPositiveEntrySum => "RoughPositiveEntrySum",
            CertificateKind::BoxOptimumDecomposition => "BoxOptimumDecomposition",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub enum Witness {
    Intrinsic { coords: Vec<Rational> },
    Rough { inverse: SymMatrix },
    Box { inverse: SymMatrix, g0: SymMatrix, g_plus: SymMatrix, x_max: Vec<Rational>, method: SplitMethod },
}

#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub kind: CertificateKind,
    /// Vertex indices of the (nondegenerate, hyperbolic) subconfiguration used.
    pub vertices: Vec<usize>,
    /// Degree cap; `None` for pinned degrees.
    pub d: Option<u64>,
    pub bound_on_2h: Rational,
    pub witness: Witness,
}

impl BoundCertificate {
    /// Recomputes the certificate from `cfg` alone.
    pub fn verify(&self, cfg: &CurveConfig) -> Result<(), String> {
        if self.vertices.iter().any(|&v| v >= cfg.len()) {
            return Err("vertex index out of range".into());
        }
        let sub = cfg.induced(&self.vertices);
        let g = graph::gram(&sub);
        let n = g.dim();
        let sig = exact::signature(&g);
        if sig != Signature::new(1, n - 1, 0) {
            return Err(format!("subconfiguration has signature {sig}"));
        }
        let d2 = |d: Option<u64>| -> Result<Rational, String> {
            let d = d.ok_or("missing degree cap")?;
            Ok(int(d as i64) * int(d as i64))
        };
        match &self.witness {
            Witness::Intrinsic { coords } => {
                let degrees: Vec<Rational> = sub.vertices().iter().map(|v| int(v.degree as i64)).collect();
                if coords.len() != n || g.mul_vec(coords) != degrees {
                    return Err("coordinates do not solve G x = degrees".into());
                }
                if g.quadratic_form(coords) != self.bound_on_2h {
                    return Err("square does not match".into());
                }
            }
            Witness::Rough { inverse } => {
                if !inverse.is_inverse_of(&g) {
                    return Err("inverse is wrong".into());
                }
                if inverse.positive_entry_sum() * d2(self.d)? != self.bound_on_2h {
                    return Err("positive entry sum does not match".into());
                }
            }
            Witness::Box { inverse, g0, g_plus, x_max, method } => {
                if !inverse.is_inverse_of(&g) {
                    return Err("inverse is wrong".into());
                }
                let s = box_cert::Split { g0: g0.clone(), g_plus: g_plus.clone(), method: *method };
                box_cert::check(inverse, &s)?;
                let d = self.d.ok_or("missing degree cap")?;
                if x_max.len() != n || x_max.iter().any(|x| *x != int(d as i64)) {
                    return Err("x_max is not (d,...,d)".into());
                }
                if inverse.quadratic_form(x_max) != self.bound_on_2h || inverse.entry_sum() * d2(self.d)? != self.bound_on_2h {
                    return Err("box optimum does not match".into());
                }
            }
        }
        Ok(())
    }
}

fn nondegenerate_hyperbolic(g: &SymMatrix) -> Result<(), BoundsError> {
    let sig = exact::signature(g);
    if sig.n_zero > 0 {
        return Err(BoundsError::DegenerateLattice { nullity: sig.n_zero });
    }
    if sig.n_plus != 1 {
        return Err(BoundsError::NotHyperbolic(sig));
    }
    Ok(())
}

fn all_vertices(cfg: &CurveConfig) -> Vec<usize> {
    (0..cfg.len()).collect()
}

/// `Σ max(0, gᵢⱼ)·d²` over the entries of `G⁻¹`.
pub fn rough_bound(cfg: &CurveConfig, d: u64) -> Result<BoundCertificate, BoundsError> {
    if d == 0 {
        return Err(BoundsError::ZeroCap);
    }
    let g = graph::gram(cfg);
    nondegenerate_hyperbolic(&g)?;
    Ok(rough_from_gram(&g, all_vertices(cfg), d))
}

fn rough_from_gram(g: &SymMatrix, vertices: Vec<usize>, d: u64) -> BoundCertificate {
    let inverse = exact::inverse(g).expect("nondegenerate");
    let dd = int(d as i64);
    let bound_on_2h = inverse.positive_entry_sum() * &dd * &dd;
    BoundCertificate {
        kind: CertificateKind::RoughPositiveEntrySum,
        vertices,
        d: Some(d),
        bound_on_2h,
        witness: Witness::Rough { inverse },
    }
}

/// `d²·Σ gᵢⱼ` backed by a verified split of `G⁻¹`.
pub fn box_certificate(cfg: &CurveConfig, d: u64) -> Result<BoundCertificate, BoundsError> {
    if d == 0 {
        return Err(BoundsError::ZeroCap);
    }
    let g = graph::gram(cfg);
    nondegenerate_hyperbolic(&g)?;
    let inverse = exact::inverse(&g).expect("nondegenerate");
    box_from_inverse(inverse, all_vertices(cfg), d)
}

fn box_from_inverse(inverse: SymMatrix, vertices: Vec<usize>, d: u64) -> Result<BoundCertificate, BoundsError> {
    let s = box_cert::split(&inverse).ok_or(BoundsError::NoDecompositionFound)?;
    let x_max = vec![int(d as i64); inverse.dim()];
    let bound_on_2h = inverse.quadratic_form(&x_max);
    Ok(BoundCertificate {
        kind: CertificateKind::BoxOptimumDecomposition,
        vertices,
        d: Some(d),
        bound_on_2h,
        witness: Witness::Box { inverse, g0: s.g0, g_plus: s.g_plus, x_max, method: s.method },
    })
}

fn intrinsic_certificate(cfg: &CurveConfig, vertices: Vec<usize>) -> Option<BoundCertificate> {
    let sub = cfg.induced(&vertices);
    let p = intrinsic_polarization(&sub);
    (p.exists && p.basis.len() == sub.len()).then(|| BoundCertificate {
        kind: CertificateKind::IntrinsicSquare,
        vertices,
        d: None,
        bound_on_2h: p.square,
        witness: Witness::Intrinsic { coords: p.coords },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionStatus {
    EllipticAdmissible,
    /// Negative definite but with more than 21 curves.
    EllipticRankExceeded,
    ParabolicFibration,
    HyperbolicExcluded,
    HyperbolicUndecided,
    /// Two or more positive directions: not a sublattice of any Picard lattice.
    InvalidSignature,
}

impl ExclusionStatus {
    pub fn name(&self) -> &'static str {
        match self {
            ExclusionStatus::EllipticAdmissible => "EllipticAdmissible",
            ExclusionStatus::EllipticRankExceeded => "EllipticRankExceeded",
            ExclusionStatus::ParabolicFibration => "ParabolicFibration",
            ExclusionStatus::HyperbolicExcluded => "HyperbolicExcluded",
            ExclusionStatus::HyperbolicUndecided => "HyperbolicUndecided",
            ExclusionStatus::InvalidSignature => "InvalidSignature",
        }
    }

    /// Whether the configuration is ruled out at the given `(d, h)`.
    pub fn is_excluded(&self) -> bool {
        matches!(
            self,
            ExclusionStatus::EllipticRankExceeded | ExclusionStatus::HyperbolicExcluded | ExclusionStatus::InvalidSignature
        )
    }
}

impl fmt::Display for ExclusionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct ExclusionVerdict {
    pub status: ExclusionStatus,
    /// For `HyperbolicExcluded` the winning certificate; for `HyperbolicUndecided` the smallest bound seen.
    pub certificates: Vec<BoundCertificate>,
    pub notes: Vec<String>,
}

/// Decides whether `cfg` can occur on a K3 surface of degree `2h` with all curve degrees ≤ `d`.
///
/// Hyperbolic configurations are searched over connected induced subgraphs with at most
/// `subgraph_cap` vertices, by size and then lexicographically. Per subgraph the intrinsic
/// square (only when `pinned`), the rough bound and the box bound are tried in that order;
/// the first bound strictly below `2h` wins.
pub fn exclude(cfg: &CurveConfig, d: u64, h: u64, subgraph_cap: usize, pinned: bool) -> Result<ExclusionVerdict, BoundsError> {
    if d == 0 {
        return Err(BoundsError::ZeroCap);
    }
    if let Some(v) = cfg.vertices().iter().find(|v| v.degree > d) {
        return Err(BoundsError::DegreeAboveCap { id: v.id.clone(), degree: v.degree, d });
    }
    let class = graph::classify(cfg);
    let mut notes = Vec::new();
    let status = match class.kind {
        LatticeKind::Elliptic if cfg.len() <= 21 => ExclusionStatus::EllipticAdmissible,
        LatticeKind::Elliptic => {
            notes.push(format!("{} curves span a negative definite lattice of rank above 21", cfg.len()));
            ExclusionStatus::EllipticRankExceeded
        }
        LatticeKind::Parabolic => {
            notes.push("bounds come from the fibration budget".into());
            ExclusionStatus::ParabolicFibration
        }
        LatticeKind::Invalid => {
            notes.push(format!("signature {} has more than one positive direction", class.signature));
            ExclusionStatus::InvalidSignature
        }
        LatticeKind::Hyperbolic => return Ok(exclude_hyperbolic(cfg, d, h, subgraph_cap, pinned)),
    };
    Ok(ExclusionVerdict { status, certificates: vec![], notes })
}

fn exclude_hyperbolic(cfg: &CurveConfig, d: u64, h: u64, cap: usize, pinned: bool) -> ExclusionVerdict {
    let two_h = int(2 * h as i64);
    let dd = int(d as i64) * int(d as i64);
    let mut notes = Vec::new();
    let mut best: Option<BoundCertificate> = None;
    let mut done: BTreeSet<Vec<usize>> = BTreeSet::new();
    let keep = |c: BoundCertificate, best: &mut Option<BoundCertificate>| {
        if best.as_ref().map_or(true, |b| c.bound_on_2h < b.bound_on_2h) {
            *best = Some(c);
        }
    };

    let mut level: BTreeSet<Vec<usize>> = (0..cfg.len()).map(|v| vec![v]).collect();
    for _size in 1..=cap.min(cfg.len()) {
        for set in &level {
            let g = graph::gram(&cfg.induced(set));
            let sig = exact::signature(&g);
            if sig.n_plus != 1 {
                continue;
            }
            // a degenerate hyperbolic subgraph is replaced by a basis of its quotient
            let (vertices, g) = if sig.n_zero == 0 {
                (set.clone(), g)
            } else {
                let basis: Vec<usize> = exact::independent_rows(&g).into_iter().map(|i| set[i]).collect();
                let g = graph::gram(&cfg.induced(&basis));
                (basis, g)
            };
            if !done.insert(vertices.clone()) {
                continue;
            }
            if pinned {
                match intrinsic_certificate(cfg, vertices.clone()) {
                    Some(c) if c.bound_on_2h < two_h => return excluded(c, notes),
                    Some(c) => keep(c, &mut best),
                    None => {}
                }
            }
            let rough = rough_from_gram(&g, vertices.clone(), d);
            if rough.bound_on_2h < two_h {
                return excluded(rough, notes);
            }
            let inverse = match &rough.witness {
                Witness::Rough { inverse } => inverse.clone(),
                _ => unreachable!(),
            };
            keep(rough, &mut best);
            if inverse.entry_sum() * &dd <= two_h {
                match box_from_inverse(inverse, vertices.clone(), d) {
                    Ok(c) if c.bound_on_2h < two_h => return excluded(c, notes),
                    Ok(c) => keep(c, &mut best),
                    Err(_) => notes.push(format!("no box split on subgraph {}", cfg.ids(&vertices).join(","))),
                }
            }
        }
        let mut next = BTreeSet::new();
        for set in &level {
            for &v in set {
                for u in cfg.neighbors(v) {
                    if !set.contains(&u) {
                        let mut s = set.clone();
                        s.push(u);
                        s.sort_unstable();
                        next.insert(s);
                    }
                }
            }
        }
        level = next;
    }
    if cap < cfg.len() {
        notes.push(format!("subgraphs larger than {cap} vertices were not examined"));
    }
    ExclusionVerdict {
        status: ExclusionStatus::HyperbolicUndecided,
        certificates: best.into_iter().collect(),
        notes,
    }
}

fn excluded(c: BoundCertificate, notes: Vec<String>) -> ExclusionVerdict {
    ExclusionVerdict { status: ExclusionStatus::HyperbolicExcluded, certificates: vec![c], notes }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HRange {
    Unbounded,
    /// Largest admissible `h`; 0 means none.
    AtMost(BigInt),
}

impl fmt::Display for HRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HRange::Unbounded => f.write_str("unbounded"),
            HRange::AtMost(h) => write!(f, "{h}"),
        }
    }
}

/// Upper bound on `h` from the intrinsic polarization with the configuration's own degrees.
pub fn admissible_h_range(cfg: &CurveConfig) -> (HRange, Option<String>) {
    match graph::classify(cfg).kind {
        LatticeKind::Elliptic | LatticeKind::Parabolic => (HRange::Unbounded, None),
        LatticeKind::Invalid => (HRange::AtMost(BigInt::zero()), Some("signature admits no embedding".into())),
        LatticeKind::Hyperbolic => {
            let p = intrinsic_polarization(cfg);
            if !p.exists {
                return (
                    HRange::AtMost(BigInt::zero()),
                    Some("degree vector pairs nontrivially with the kernel; no intrinsic polarization".into()),
                );
            }
            let half = p.square / int(2);
            let h = half.numer().div_floor(half.denom());
            (HRange::AtMost(if h.is_negative() { BigInt::zero() } else { h }), None)
        }
    }
}
