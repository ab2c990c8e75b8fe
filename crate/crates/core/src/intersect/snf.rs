//! Smith normal form, lattice saturation and lattice indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};

/// Diagonalizes `a` in place by unimodular row and column operations.
/// Column operations are mirrored as inverse row operations on `w`, so that
/// afterwards `a = U * a0 * V` and `w = V^-1 * w0`.
fn diagonalize(a: &mut [Vec<BigInt>], mut w: Option<&mut Vec<Vec<BigInt>>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(a, t, pj, w.as_deref_mut());
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                    if let Some(w) = w.as_deref_mut() {
                        // col_j -= q col_t  <=>  row_t(W) += q row_j(W)
                        let add: Vec<BigInt> = w[j].iter().map(|x| &q * x).collect();
                        for (x, y) in w[t].iter_mut().zip(add) {
                            *x += y;
                        }
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // bring a smaller remainder into the pivot position
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(a, t, best.1, w.as_deref_mut());
                }
                continue;
            }
            // divisibility: fold a non-divisible row into the pivot row
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero())
            });
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(src) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    t
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize, w: Option<&mut Vec<Vec<BigInt>>>) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    if let Some(w) = w {
        w.swap(x, y);
    }
}

/// Invariant factors `d1 | d2 | ...` (nonzero ones only).
pub fn smith_invariants(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut a = m.to_rows();
    let r = diagonalize(&mut a, None);
    (0..r).map(|i| a[i][i].abs()).collect()
}

/// Row-style Hermite normal form of a full-row-rank integer matrix.
fn hermite(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // gcd-combine column c into row r
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let e = rows[r][c].extended_gcd(&rows[i][c]);
            let (a, b) = (&rows[r][c] / &e.gcd, &rows[i][c] / &e.gcd);
            let new_r: Vec<BigInt> = (0..cols)
                .map(|j| &e.x * &rows[r][j] + &e.y * &rows[i][j])
                .collect();
            let new_i: Vec<BigInt> = (0..cols)
                .map(|j| &a * &rows[i][j] - &b * &rows[r][j])
                .collect();
            rows[r] = new_r;
            rows[i] = new_i;
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let d = &q * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Basis (in Hermite form) of `span_Q(gens) ∩ Z^m`, one row per basis vector.
pub fn saturate(gens: &IntegerMatrix) -> IntegerMatrix {
    let cols = gens.cols();
    let mut a = gens.to_rows();
    let mut w: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let r = diagonalize(&mut a, Some(&mut w));
    w.truncate(r);
    IntegerMatrix::with_cols(cols, &hermite(w))
}

/// Index `[Z^m : N1 + N2]`.
pub fn lattice_index(n1: &IntegerMatrix, n2: &IntegerMatrix, m: usize) -> Result<BigInt> {
    if n1.cols() != m || n2.cols() != m {
        return Err(Error::Dimension(format!(
            "lattice bases live in dimension {} and {}, expected {m}",
            n1.cols(),
            n2.cols()
        )));
    }
    let inv = smith_invariants(&n1.stack(n2));
    if inv.len() < m {
        return Err(Error::NotFullRank { rank: inv.len(), m });
    }
    Ok(inv.iter().product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn mat(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Index of the lattice generated by `rows` in Z^2: the lattice contains
    /// d*Z^2 for d the determinant of an independent pair, so count the
    /// subgroup it generates in (Z/d)^2.
    fn coset_count_2d(rows: &[Vec<i64>]) -> usize {
        let gens: Vec<(i64, i64)> = rows.iter().map(|r| (r[0], r[1])).collect();
        let d = gens
            .iter()
            .tuple_combinations()
            .map(|(a, b)| (a.0 * b.1 - a.1 * b.0).abs())
            .find(|&x| x != 0)
            .unwrap();
        let mut members = std::collections::HashSet::from([(0i64, 0i64)]);
        let mut queue = vec![(0i64, 0i64)];
        while let Some((x, y)) = queue.pop() {
            for g in &gens {
                let p = ((x + g.0).rem_euclid(d), (y + g.1).rem_euclid(d));
                if members.insert(p) {
                    queue.push(p);
                }
            }
        }
        ((d * d) as usize) / members.len()
    }

    #[test]
    fn invariant_examples() {
        let id = mat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(smith_invariants(&id), ints(&[1, 1, 1]));
        assert_eq!(smith_invariants(&mat(&[vec![2, 0], vec![0, 4]])), ints(&[2, 4]));
        assert_eq!(smith_invariants(&mat(&[vec![1, 1], vec![1, -1]])), ints(&[1, 2]));
        assert_eq!(coset_count_2d(&[vec![1, 1], vec![1, -1]]), 2);
        assert_eq!(smith_invariants(&mat(&[vec![2, 4], vec![6, 8]])), ints(&[2, 4]));
        assert_eq!(smith_invariants(&mat(&[vec![6, 0], vec![0, 4]])), ints(&[2, 12]));
        assert!(smith_invariants(&IntegerMatrix::zeros(2, 2)).is_empty());
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(
            saturate(&mat(&[vec![2, 0], vec![0, 2]])),
            mat(&[vec![1, 0], vec![0, 1]])
        );
        assert_eq!(saturate(&mat(&[vec![1, 1, 0]])), mat(&[vec![1, 1, 0]]));
        assert_eq!(
            saturate(&mat(&[vec![2, 2, 0], vec![0, 0, 3]])),
            mat(&[vec![1, 1, 0], vec![0, 0, 1]])
        );
        assert_eq!(saturate(&mat(&[vec![4, 6]])), mat(&[vec![2, 3]]));
        assert_eq!(saturate(&mat(&[vec![2, 2], vec![3, 3]])), mat(&[vec![1, 1]]));
    }

    #[test]
    fn index_examples() {
        let e1 = mat(&[vec![1, 0]]);
        let e2 = mat(&[vec![0, 1]]);
        assert_eq!(lattice_index(&e1, &e2, 2).unwrap(), BigInt::from(1));
        let a = mat(&[vec![1, 1]]);
        let b = mat(&[vec![1, -1]]);
        assert_eq!(lattice_index(&a, &b, 2).unwrap(), BigInt::from(2));
        let full = mat(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(lattice_index(&full, &b, 2).unwrap(), BigInt::from(1));
        assert!(matches!(
            lattice_index(&a, &a, 2),
            Err(Error::NotFullRank { rank: 1, m: 2 })
        ));
    }

    proptest! {
        /// Determinant of a square matrix equals the product of invariants up
        /// to sign, and each invariant divides the next.
        #[test]
        fn invariants_multiply_to_det(rows in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 3), 3)) {
            let m = mat(&rows);
            let inv = smith_invariants(&m);
            let det = m.determinant();
            if det.is_zero() {
                prop_assert!(inv.len() < 3);
            } else {
                prop_assert_eq!(inv.iter().product::<BigInt>(), det.abs());
            }
            prop_assert_eq!(inv.len(), m.rank());
            for w in inv.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }

        #[test]
        fn index_matches_coset_count(rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 2), 2..=3)) {
            let m = mat(&rows);
            prop_assume!(m.rank() == 2);
            let idx = lattice_index(&mat(&rows[..1]), &mat(&rows[1..]), 2).unwrap();
            prop_assert_eq!(idx, BigInt::from(coset_count_2d(&rows)));
        }

        /// Saturated basis: same rational span, primitive (index 1 in its span),
        /// and contains the generators.
        #[test]
        fn saturation_is_saturated(rows in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 4), 1..=3)) {
            let g = mat(&rows);
            let s = saturate(&g);
            prop_assert_eq!(s.rows(), g.rank());
            prop_assert_eq!(s.stack(&g).rank(), g.rank());
            if s.rows() > 0 {
                let inv = smith_invariants(&s);
                prop_assert!(inv.iter().all(|d| d.is_one()));
                // generators lie in the saturated lattice: stacking keeps invariants 1
                let inv2 = smith_invariants(&s.stack(&g));
                prop_assert!(inv2.iter().all(|d| d.is_one()));
            }
        }
    }
}
