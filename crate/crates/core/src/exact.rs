//! Exact linear algebra over the rationals for symmetric matrices.
//!
//! Everything here is computed with arbitrary-precision rationals: the inertia
//! of a symmetric form via congruence diagonalization, kernels via reduced row
//! echelon form, and inverses via Gauss-Jordan elimination. No floating point
//! is involved anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("matrix is singular (kernel dimension {nullity})")]
    SingularMatrix { nullity: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as `p` when integral and `p/q` otherwise.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A square symmetric matrix with rational entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| self.row(i).iter().map(fmt_rational).collect())
            .collect();
        f.debug_struct("SymMatrix").field("n", &self.n).field("rows", &rows).finish()
    }
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle `i <= j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let n = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(ExactError::NotSquare { row, len: r.len(), n });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(ExactError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self, ExactError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[j * self.n + i] = v.clone();
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|q| q.is_integer())
    }

    /// The principal submatrix on the given index list (in that order).
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_upper(idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }

    pub fn entry_sum(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, q| acc + q)
    }

    pub fn positive_entry_sum(&self) -> Rational {
        self.entries
            .iter()
            .filter(|q| q.is_positive())
            .fold(Rational::zero(), |acc, q| acc + q)
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> SymMatrix {
        SymMatrix { n: self.n, entries: self.entries.iter().map(|a| a * s).collect() }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul_int_vec(&self, x: &[BigInt]) -> Vec<Rational> {
        let x: Vec<Rational> = x.iter().map(|v| Rational::from_integer(v.clone())).collect();
        self.mul_vec(&x)
    }

    /// `xᵀ·M·x`.
    pub fn quadratic_form(&self, x: &[Rational]) -> Rational {
        dot(x, &self.mul_vec(x))
    }

    /// The full (not necessarily symmetric) product `self · other` as rows.
    pub fn matmul(&self, other: &SymMatrix) -> Vec<Vec<Rational>> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Rational::zero(), |acc, k| {
                            acc + self.get(i, k) * other.get(k, j)
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether `self · other` is exactly the identity.
    pub fn is_inverse_of(&self, other: &SymMatrix) -> bool {
        if self.n != other.n {
            return false;
        }
        self.matmul(other).iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
        })
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Inertia of a real symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Self { n_plus, n_minus, n_zero }
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_zero)
    }
}

/// A congruence `P·M·Pᵀ = diag(diagonal)`; row `i` of `basis` has square `diagonal[i]`.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub diagonal: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
}

impl Diagonalization {
    pub fn signature(&self) -> Signature {
        let mut s = Signature::new(0, 0, 0);
        for d in &self.diagonal {
            if d.is_positive() {
                s.n_plus += 1;
            } else if d.is_negative() {
                s.n_minus += 1;
            } else {
                s.n_zero += 1;
            }
        }
        s
    }

    /// Primitive integer vectors of positive square, one per positive diagonal entry.
    pub fn positive_vectors(&self) -> Vec<Vec<BigInt>> {
        self.diagonal
            .iter()
            .zip(&self.basis)
            .filter(|(d, _)| d.is_positive())
            .map(|(_, v)| primitive_integer_vector(v))
            .collect()
    }
}

/// Symmetric Gaussian elimination. When every remaining diagonal entry is zero
/// but an off-diagonal entry `a_ij` is not, row/column `j` is added to `i`,
/// which puts `2·a_ij ≠ 0` on the diagonal.
pub fn diagonalize(m: &SymMatrix) -> Diagonalization {
    let n = m.dim();
    let mut a = m.rows();
    let mut p: Vec<Vec<Rational>> = SymMatrix::identity(n).rows();

    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let pair = (k..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                let pj = p[j].clone();
                for (x, y) in p[i].iter_mut().zip(pj) {
                    *x += y;
                }
                i
            }
        };
        if pivot != k {
            a.swap(pivot, k);
            for row in a.iter_mut() {
                row.swap(pivot, k);
            }
            p.swap(pivot, k);
        }

        let piv = a[k][k].clone();
        for r in (k + 1)..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &piv;
            for c in (k + 1)..n {
                let delta = &f * &a[k][c];
                a[r][c] -= delta;
            }
            let pk = p[k].clone();
            for (x, y) in p[r].iter_mut().zip(&pk) {
                *x -= &f * y;
            }
        }
        for r in (k + 1)..n {
            a[r][k] = Rational::zero();
            a[k][r] = Rational::zero();
        }
    }

    Diagonalization { diagonal: (0..n).map(|i| a[i][i].clone()).collect(), basis: p }
}

pub fn signature(m: &SymMatrix) -> Signature {
    diagonalize(m).signature()
}

/// Reduced row echelon form; returns the reduced rows and the pivot columns.
fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (rows, pivots)
}

pub fn rank(m: &SymMatrix) -> usize {
    rref(m.rows(), m.dim()).1.len()
}

/// Indices of a maximal linearly independent set of rows, chosen greedily in order.
/// For a symmetric matrix the principal submatrix on these indices is nonsingular.
pub fn independent_rows(m: &SymMatrix) -> Vec<usize> {
    // Row-independence of M equals column pivots of Mᵀ = M.
    rref(m.rows(), m.dim()).1
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive. The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// A basis of `{x : M·x = 0}` as primitive integer vectors, sorted lexicographically.
/// Empty iff `M` is nondegenerate.
pub fn kernel_basis(m: &SymMatrix) -> Vec<Vec<BigInt>> {
    let n = m.dim();
    let (reduced, pivots) = rref(m.rows(), n);
    let mut basis: Vec<Vec<BigInt>> = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![Rational::zero(); n];
            x[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -reduced[r][free].clone();
            }
            primitive_integer_vector(&x)
        })
        .collect();
    basis.sort();
    basis
}

pub fn determinant(m: &SymMatrix) -> Rational {
    let n = m.dim();
    let mut a = m.rows();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn inverse(m: &SymMatrix) -> Result<SymMatrix, ExactError> {
    let n = m.dim();
    let mut aug: Vec<Vec<Rational>> = m
        .rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let (reduced, pivots) = rref(std::mem::take(&mut aug), n);
    if pivots.len() < n {
        return Err(ExactError::SingularMatrix { nullity: n - pivots.len() });
    }
    let inv: Vec<Vec<Rational>> = reduced.into_iter().map(|row| row[n..].to_vec()).collect();
    SymMatrix::from_rows(inv)
}

/// Solves `M·x = b` for nondegenerate `M`.
pub fn solve(m: &SymMatrix, b: &[Rational]) -> Result<Vec<Rational>, ExactError> {
    if b.len() != m.dim() {
        return Err(ExactError::DimensionMismatch { expected: m.dim(), got: b.len() });
    }
    Ok(inverse(m)?.mul_vec(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> SymMatrix {
        SymMatrix::from_integer_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&m(&[vec![-2, 1], vec![1, -2]])), Signature::new(0, 2, 0));
        assert_eq!(signature(&m(&[vec![0]])), Signature::new(0, 0, 1));
        assert_eq!(signature(&m(&[vec![-2, 3], vec![3, -2]])), Signature::new(1, 1, 0));
    }

    #[test]
    fn zero_diagonal_needs_pair_pivot() {
        // hyperbolic plane U
        let u = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(signature(&u), Signature::new(1, 1, 0));
        let d = diagonalize(&u);
        for (v, sq) in d.basis.iter().zip(&d.diagonal) {
            assert_eq!(&u.quadratic_form(v), sq);
        }
        let z = m(&[vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]);
        assert_eq!(signature(&z), Signature::new(1, 1, 1));
    }

    #[test]
    fn diagonalization_is_a_congruence() {
        let g = m(&[
            vec![0, 1, 0, 2],
            vec![1, -2, 1, 0],
            vec![0, 1, 0, 1],
            vec![2, 0, 1, -2],
        ]);
        let d = diagonalize(&g);
        for i in 0..4 {
            for j in 0..4 {
                let b = dot(&d.basis[i], &g.mul_vec(&d.basis[j]));
                if i == j {
                    assert_eq!(b, d.diagonal[i]);
                } else {
                    assert!(b.is_zero());
                }
            }
        }
        assert_eq!(rref(d.basis.clone(), 4).1.len(), 4);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(&[vec![0]])), vec![ints(&[1])]);
        let cycle = m(&[
            vec![-2, 1, 0, 1],
            vec![1, -2, 1, 0],
            vec![0, 1, -2, 1],
            vec![1, 0, 1, -2],
        ]);
        assert_eq!(kernel_basis(&cycle), vec![ints(&[1, 1, 1, 1])]);
        assert!(kernel_basis(&m(&[vec![-2, 1], vec![1, -2]])).is_empty());
    }

    #[test]
    fn kernel_is_sorted_and_primitive() {
        let z = SymMatrix::zeros(3);
        assert_eq!(
            kernel_basis(&z),
            vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]
        );
        let g = m(&[vec![2, 4], vec![4, 8]]);
        assert_eq!(kernel_basis(&g), vec![ints(&[2, -1])]);
    }

    #[test]
    fn inverse_examples() {
        let g = m(&[vec![0, 1], vec![1, -2]]);
        assert_eq!(inverse(&g).unwrap(), m(&[vec![2, 1], vec![1, 0]]));
        assert_eq!(inverse(&SymMatrix::identity(5)).unwrap(), SymMatrix::identity(5));
        let a2 = m(&[vec![-2, 1], vec![1, -2]]);
        let expected = m(&[vec![-2, -1], vec![-1, -2]]).scale(&ratio(1, 3));
        assert_eq!(inverse(&a2).unwrap(), expected);
        assert!(a2.is_inverse_of(&expected));
    }

    #[test]
    fn inverse_rejects_singular() {
        let g = m(&[vec![-2, 2], vec![2, -2]]);
        assert_eq!(inverse(&g), Err(ExactError::SingularMatrix { nullity: 1 }));
    }

    #[test]
    fn from_rows_rejects_asymmetry() {
        let err = SymMatrix::from_integer_rows(&[vec![1, 2], vec![3, 4]]).unwrap_err();
        assert_eq!(err, ExactError::NotSymmetric { i: 0, j: 1 });
        let err = SymMatrix::from_integer_rows(&[vec![1, 2], vec![3]]).unwrap_err();
        assert!(matches!(err, ExactError::NotSquare { row: 1, .. }));
    }

    #[test]
    fn determinant_and_rank() {
        let a2 = m(&[vec![-2, 1], vec![1, -2]]);
        assert_eq!(determinant(&a2), int(3));
        assert_eq!(rank(&a2), 2);
        let g = m(&[vec![-2, 2], vec![2, -2]]);
        assert_eq!(rank(&g), 1);
        assert_eq!(independent_rows(&g), vec![0]);
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_rational(&ratio(1640, 21)), "1640/21");
        assert_eq!(fmt_rational(&int(86)), "86");
        assert_eq!(fmt_rational(&ratio(-4, 6)), "-2/3");
    }
}
