//! Exact phase-one simplex: find `x ≥ 0` with `A x ≥ b`, or report infeasibility.
//!
//! Dense tableau over rationals with Bland's rule, so it always terminates.

use num_traits::{Signed, Zero};

use crate::exact::Rational;

pub fn find_feasible(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    assert_eq!(m, b.len(), "one right-hand side per row");
    let nx = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![Rational::zero(); nx]);
    }

    // Columns: x (nx), surplus s (m), artificials (one per row with b > 0), rhs.
    let art_rows: Vec<usize> = (0..m).filter(|&i| b[i].is_positive()).collect();
    let ncols = nx + m + art_rows.len();
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    for i in 0..m {
        let mut row = vec![Rational::zero(); ncols + 1];
        let positive = b[i].is_positive();
        let sign = if positive { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
        for j in 0..nx {
            if !a[i][j].is_zero() {
                row[j] = &a[i][j] * &sign;
            }
        }
        // A x - s (+ art) = b, negated when b <= 0 so that s is a valid basic column
        row[nx + i] = -sign.clone();
        row[ncols] = &b[i] * &sign;
        if positive {
            let k = art_rows.binary_search(&i).unwrap();
            row[nx + m + k] = Rational::from_integer(1.into());
            basis[i] = nx + m + k;
        } else {
            basis[i] = nx + i;
        }
        t.push(row);
    }

    // Reduced costs for minimizing the artificial sum.
    let mut z = vec![Rational::zero(); ncols + 1];
    for k in 0..art_rows.len() {
        z[nx + m + k] = Rational::from_integer(1.into());
    }
    for &i in &art_rows {
        for j in 0..=ncols {
            if !t[i][j].is_zero() {
                z[j] -= &t[i][j];
            }
        }
    }

    loop {
        let Some(enter) = (0..ncols).find(|&j| z[j].is_negative()) else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let r = &t[i][ncols] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => r < *lr || (r == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, r));
                }
            }
        }
        // unbounded direction cannot occur: the objective is bounded below by 0
        let (p, _) = leave?;
        pivot(&mut t, &mut z, p, enter);
        basis[p] = enter;
    }

    if !z[ncols].is_zero() {
        // z[rhs] holds minus the artificial sum
        return None;
    }
    let mut x = vec![Rational::zero(); nx];
    for i in 0..m {
        if basis[i] < nx {
            x[basis[i]] = t[i][ncols].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], z: &mut [Rational], p: usize, q: usize) {
    let piv = t[p][q].clone();
    for v in t[p].iter_mut() {
        if !v.is_zero() {
            *v /= &piv;
        }
    }
    let nz: Vec<usize> = (0..t[p].len()).filter(|&k| !t[p][k].is_zero()).collect();
    let prow = t[p].clone();
    let eliminate = |row: &mut [Rational]| {
        let f = row[q].clone();
        if f.is_zero() {
            return;
        }
        for &k in &nz {
            row[k] -= &f * &prow[k];
        }
    };
    for (r, row) in t.iter_mut().enumerate() {
        if r != p {
            eliminate(row);
        }
    }
    eliminate(z);
}
