//! Splitting `G⁻¹ = G₀ + G₊` with `G₊ ≥ 0` entrywise, `G₀ ≤ 0` and `G₀·(1,…,1) = 0`.
//!
//! Given such a split, `xᵀG⁻¹x ≤ d²·Σ G⁻¹` on the box `[0,d]ⁿ`.

use num_traits::{Signed, Zero};

use super::simplex;
use crate::exact::{self, int, Rational, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMethod {
    /// `G⁻¹` is already entrywise non-negative and `G₀ = 0`.
    Nonnegative,
    /// Negative 2×2 blocks cancelled in pairs by `[[1,−1],[−1,1]] ⊗ B`.
    PairedBlocks,
    /// `G₀ = −Σ wₖ vₖvₖᵀ` with zero-sum vectors `vₖ`, weights from a linear program.
    Dictionary,
}

#[derive(Debug, Clone)]
pub struct Split {
    pub g0: SymMatrix,
    pub g_plus: SymMatrix,
    pub method: SplitMethod,
}

pub fn split(inv: &SymMatrix) -> Option<Split> {
    let candidates = [
        (SplitMethod::Nonnegative, nonnegative(inv)),
        (SplitMethod::PairedBlocks, paired_blocks(inv)),
    ];
    for (method, g0) in candidates {
        if let Some(g0) = g0 {
            let s = Split { g_plus: inv.sub(&g0), g0, method };
            if check(inv, &s).is_ok() {
                return Some(s);
            }
        }
    }
    let g0 = dictionary(inv)?;
    let s = Split { g_plus: inv.sub(&g0), g0, method: SplitMethod::Dictionary };
    check(inv, &s).ok().map(|_| s)
}

/// Exact check of all split conditions.
pub fn check(inv: &SymMatrix, s: &Split) -> Result<(), String> {
    let n = inv.dim();
    if s.g0.dim() != n || s.g_plus.dim() != n {
        return Err("split has wrong dimension".into());
    }
    if s.g0.add(&s.g_plus) != *inv {
        return Err("G0 + G+ differs from the inverse Gram matrix".into());
    }
    if s.g_plus.entries().any(|x| x.is_negative()) {
        return Err("G+ has a negative entry".into());
    }
    if exact::signature(&s.g0).n_plus != 0 {
        return Err("G0 is not negative semi-definite".into());
    }
    if s.g0.mul_vec(&vec![int(1); n]).iter().any(|x| !x.is_zero()) {
        return Err("(1,...,1) is not in the kernel of G0".into());
    }
    Ok(())
}

fn nonnegative(inv: &SymMatrix) -> Option<SymMatrix> {
    (!inv.entries().any(|x| x.is_negative())).then(|| SymMatrix::zeros(inv.dim()))
}

/// Requires the negative entries to sit in disjoint 2×2 blocks that are negative throughout;
/// equal blocks are then paired up.
fn paired_blocks(inv: &SymMatrix) -> Option<SymMatrix> {
    let n = inv.dim();
    let mut partner = vec![None; n];
    for i in 0..n {
        let negs: Vec<usize> = (0..n).filter(|&j| j != i && inv.get(i, j).is_negative()).collect();
        match negs.as_slice() {
            [] => {}
            [j] => partner[i] = Some(*j),
            _ => return None,
        }
    }
    let mut blocks = Vec::new();
    for i in 0..n {
        match partner[i] {
            Some(j) => {
                if partner[j] != Some(i) || !inv.get(i, i).is_negative() || !inv.get(j, j).is_negative() {
                    return None;
                }
                if i < j {
                    blocks.push((i, j));
                }
            }
            None if inv.get(i, i).is_negative() => return None,
            None => {}
        }
    }
    if blocks.is_empty() || blocks.len() % 2 == 1 {
        return None;
    }
    let mut used = vec![false; blocks.len()];
    let mut pairs = Vec::new();
    if !match_blocks(inv, &blocks, &mut used, &mut pairs) {
        return None;
    }
    let mut g0 = SymMatrix::zeros(n);
    for ((a, b), (c, e)) in pairs {
        // block on (a,b) and (c,e) equals B, cross block equals -B
        let idx = [a, b];
        let jdx = [c, e];
        for x in 0..2 {
            for y in 0..2 {
                let v = inv.get(idx[x], idx[y]).clone();
                if x <= y {
                    g0.set(idx[x], idx[y], v.clone());
                    g0.set(jdx[x], jdx[y], v.clone());
                }
                g0.set(idx[x], jdx[y], -v);
            }
        }
    }
    Some(g0)
}

type Pair = (usize, usize);

fn match_blocks(inv: &SymMatrix, blocks: &[Pair], used: &mut [bool], out: &mut Vec<(Pair, Pair)>) -> bool {
    let Some(p) = used.iter().position(|u| !u) else { return true };
    used[p] = true;
    let (a, b) = blocks[p];
    for q in (p + 1)..blocks.len() {
        if used[q] {
            continue;
        }
        let (c, e) = blocks[q];
        for (c, e) in [(c, e), (e, c)] {
            let same = inv.get(a, a) == inv.get(c, c) && inv.get(b, b) == inv.get(e, e) && inv.get(a, b) == inv.get(c, e);
            let cross_ok = [(a, c, a, a), (a, e, a, b), (b, c, b, a), (b, e, b, b)]
                .iter()
                .all(|&(i, j, k, l)| !(inv.get(i, j) + inv.get(k, l)).is_negative());
            if same && cross_ok {
                used[q] = true;
                out.push(((a, b), (c, e)));
                if match_blocks(inv, blocks, used, out) {
                    return true;
                }
                out.pop();
                used[q] = false;
            }
        }
    }
    used[p] = false;
    false
}

/// Zero-sum vectors `e_i − e_j` touching a negative diagonal entry and
/// `e_i + e_j − e_k − e_l` for each negative off-diagonal entry `(i, j)`.
fn dictionary_vectors(inv: &SymMatrix) -> Vec<Vec<(usize, i64)>> {
    let n = inv.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if inv.get(i, i).is_negative() || inv.get(j, j).is_negative() {
                out.push(vec![(i, 1), (j, -1)]);
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !inv.get(i, j).is_negative() {
                continue;
            }
            for k in 0..n {
                for l in (k + 1)..n {
                    if k != i && k != j && l != i && l != j {
                        out.push(vec![(i, 1), (j, 1), (k, -1), (l, -1)]);
                    }
                }
            }
        }
    }
    out
}

fn dictionary(inv: &SymMatrix) -> Option<SymMatrix> {
    let n = inv.dim();
    let vs = dictionary_vectors(inv);
    if vs.is_empty() {
        return None;
    }
    // constraint per upper-triangular entry: inv_ab + Σ w_k v_a v_b ≥ 0
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in 0..n {
        for c in r..n {
            let row: Vec<Rational> = vs.iter().map(|v| int(coef(v, r) * coef(v, c))).collect();
            a.push(row);
            b.push(-inv.get(r, c).clone());
        }
    }
    let w = simplex::find_feasible(&a, &b)?;
    let mut g0 = SymMatrix::zeros(n);
    for (v, wk) in vs.iter().zip(&w) {
        if wk.is_zero() {
            continue;
        }
        for &(r, x) in v {
            for &(c, y) in v {
                if r <= c {
                    let cur = g0.get(r, c) - wk * int(x * y);
                    g0.set(r, c, cur);
                }
            }
        }
    }
    Some(g0)
}

fn coef(v: &[(usize, i64)], i: usize) -> i64 {
    v.iter().find(|&&(j, _)| j == i).map_or(0, |&(_, x)| x)
}
