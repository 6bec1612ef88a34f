use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::lattice::egcd;
use super::matrix::{Int, IntMatrix};

/// Column Hermite normal form. Returns `(H, U)` with `H = M·U`, `U` unimodular,
/// `H` lower echelon with positive pivots, entries left of a pivot reduced
/// into `[0, pivot)`, zero columns last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(cols);
    let mut k = 0;
    for r in 0..rows {
        if k == cols {
            break;
        }
        for j in k + 1..cols {
            if h[(r, j)].is_zero() {
                continue;
            }
            if h[(r, k)].is_zero() {
                h.swap_cols(k, j);
                u.swap_cols(k, j);
                continue;
            }
            let (a, b) = (h[(r, k)].clone(), h[(r, j)].clone());
            let (g, s, t) = egcd(&a, &b);
            let (p, q) = (-(&b / &g), &a / &g);
            h.combine_cols(k, j, &s, &t, &p, &q);
            u.combine_cols(k, j, &s, &t, &p, &q);
        }
        if h[(r, k)].is_zero() {
            continue;
        }
        if h[(r, k)].is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        let piv = h[(r, k)].clone();
        for j in 0..k {
            let q = h[(r, j)].div_floor(&piv);
            if !q.is_zero() {
                let nq = -q;
                h.add_col_multiple(j, k, &nq);
                u.add_col_multiple(j, k, &nq);
            }
        }
        k += 1;
    }
    (h, u)
}

/// Smith normal form. Returns `(S, U, V)` with `S = U·M·V` diagonal,
/// nonnegative, and each diagonal entry dividing the next.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = m.shape();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &s[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (s, u, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let piv = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = &s[(i, t)] / &piv;
                if !q.is_zero() {
                    let nq = -q;
                    s.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                }
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = &s[(t, j)] / &piv;
                if !q.is_zero() {
                    let nq = -q;
                    s.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                }
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&piv)));
            if let Some(i) = bad_row {
                let one = Int::from(1);
                s.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Diagonal of a Smith form.
pub fn diagonal(s: &IntMatrix) -> Vec<Int> {
    (0..s.rows().min(s.cols())).map(|i| s[(i, i)].clone()).collect()
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    assert_eq!(n, m.cols());
    // HNF of a unimodular matrix is the identity, so M·U = I.
    let (h, u) = hnf(m);
    debug_assert_eq!(h, IntMatrix::identity(n));
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn hnf_examples() {
        let a = m(&[&[2, 4], &[0, 0]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(&[&[2, 0], &[0, 0]]));
        assert_eq!(a.mul(&u), h);
        assert!(u.is_unimodular());
        assert_eq!(hnf(&IntMatrix::identity(3)).0, IntMatrix::identity(3));
        assert_eq!(hnf(&IntMatrix::zeros(2, 3)).0, IntMatrix::zeros(2, 3));
    }

    #[test]
    fn snf_examples() {
        let (s, u, v) = snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s, m(&[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&m(&[&[2, 0], &[0, 3]])).mul(&v), s);
        assert_eq!(snf(&IntMatrix::identity(2)).0, IntMatrix::identity(2));
        assert_eq!(snf(&m(&[&[0]])).0, m(&[&[0]]));
    }

    #[test]
    fn hnf_matches_lattice() {
        let a = m(&[&[4, 6, 1], &[6, 4, 1], &[0, 2, 7]]);
        let (h, _) = hnf(&a);
        let l = super::super::lattice::Lattice::from_columns(&a);
        let nonzero: Vec<Vec<Int>> = h.columns().into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
        assert_eq!(nonzero.as_slice(), l.basis());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&unimodular_inverse(&a)), IntMatrix::identity(2));
    }
}
