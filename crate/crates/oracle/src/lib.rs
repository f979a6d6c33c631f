//! Slow, independent reference computations used as test oracles.
//!
//! Nothing here shares code with the main library: the signature comes from the
//! characteristic polynomial and Sturm sequences, inverses from a separate
//! Gauss-Jordan, and box maxima from exhaustive enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Polynomial with coefficients in increasing degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> &Q {
        self.0.last().expect("nonzero polynomial")
    }

    fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect()).trim()
    }

    fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Q::zero();
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect()).trim()
    }

    fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let mut r = self.clone();
        let dd = d.degree().expect("division by zero polynomial");
        let mut quo = vec![Q::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead() / d.lead();
            let shift = rd - dd;
            quo[shift] = c.clone();
            let mut t = vec![Q::zero(); shift];
            t.extend(d.0.iter().map(|x| x * &c));
            r = r.sub(&Poly(t));
        }
        (Poly(quo).trim(), r)
    }

    fn monic(&self) -> Poly {
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn sign_at_zero(&self) -> i32 {
        self.0.first().map_or(0, sign)
    }

    fn sign_at_infinity(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            sign(self.lead())
        }
    }
}

fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// `det(xI − A)` by the Faddeev-LeVerrier recursion.
pub fn charpoly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let am: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    s += &am[i][l] * &m[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &am[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / q(k as i64);
    }
    Poly(coeffs).trim()
}

/// Square-free factors `f_1, f_2, …` with `p = c·Π f_i^i` (Yun).
fn squarefree(p: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let mut a = Poly::gcd(p, &dp);
    if a.is_zero() || a.degree() == Some(0) {
        return vec![p.monic()];
    }
    let mut b = p.divrem(&a).0;
    let mut c = dp.divrem(&a).0;
    let mut d = c.sub(&b.derivative());
    while b.degree().is_some_and(|x| x > 0) {
        a = Poly::gcd(&b, &d);
        out.push(a.clone());
        b = b.divrem(&a).0;
        c = d.divrem(&a).0;
        d = c.sub(&b.derivative());
    }
    out
}

/// Distinct roots of a square-free polynomial in the open interval (0, ∞).
fn positive_root_count(f: &Poly) -> usize {
    if f.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut seq = vec![f.clone(), f.derivative()];
    while let Some(last) = seq.last() {
        if last.degree().unwrap_or(0) == 0 {
            break;
        }
        let r = seq[seq.len() - 2].divrem(last).1;
        if r.is_zero() {
            break;
        }
        seq.push(Poly(r.0.iter().map(|c| -c).collect()));
    }
    let changes = |signs: Vec<i32>| {
        let nz: Vec<i32> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let at_zero = changes(seq.iter().map(Poly::sign_at_zero).collect());
    let at_inf = changes(seq.iter().map(Poly::sign_at_infinity).collect());
    at_zero - at_inf
}

/// `(n_plus, n_minus, n_zero)` of a symmetric integer matrix.
pub fn signature(a: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = a.len();
    let p = charpoly(a);
    let n_zero = p.0.iter().take_while(|c| c.is_zero()).count();
    let reduced = Poly(p.0[n_zero..].to_vec());
    let mut n_plus = 0;
    for (i, f) in squarefree(&reduced).iter().enumerate() {
        n_plus += (i + 1) * positive_root_count(f);
    }
    (n_plus, n - n_plus - n_zero, n_zero)
}

/// Inverse of an integer matrix, `None` if singular.
pub fn inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Q> = r.iter().map(|&x| q(x)).collect();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let piv = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let src = m[col].clone();
                for (x, s) in m[r].iter_mut().zip(&src) {
                    *x -= &f * s;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Exhaustive `max xᵀMx` over integer points of `[0, d]ⁿ`.
pub fn box_max(m: &[Vec<Q>], d: u64) -> Q {
    let n = m.len();
    let mut x = vec![0u64; n];
    let mut best: Option<Q> = None;
    loop {
        let mut v = Q::zero();
        for i in 0..n {
            for j in 0..n {
                if x[i] != 0 && x[j] != 0 {
                    v += &m[i][j] * q((x[i] * x[j]) as i64);
                }
            }
        }
        if best.as_ref().map_or(true, |b| v > *b) {
            best = Some(v);
        }
        let mut k = 0;
        loop {
            if k == n {
                return best.expect("at least one point");
            }
            if x[k] < d {
                x[k] += 1;
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}
