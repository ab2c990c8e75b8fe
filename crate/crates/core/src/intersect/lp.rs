//! Exact rational linear programming: Fourier–Motzkin elimination for
//! feasibility and a two-phase simplex with Bland's rule for optimization.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sense {
    Le,
    Eq,
}

/// Constraints over variables that are nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    nvars: usize,
    free: Vec<bool>,
    rows: Vec<(Vec<Q>, Sense, Q)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            free: vec![false; nvars],
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn add_le(&mut self, a: Vec<Q>, b: Q) {
        assert_eq!(a.len(), self.nvars);
        self.rows.push((a, Sense::Le, b));
    }

    pub fn add_ge(&mut self, a: Vec<Q>, b: Q) {
        self.add_le(a.into_iter().map(|x| -x).collect(), -b);
    }

    pub fn add_eq(&mut self, a: Vec<Q>, b: Q) {
        assert_eq!(a.len(), self.nvars);
        self.rows.push((a, Sense::Eq, b));
    }

    /// Feasibility by eliminating equalities, then Fourier–Motzkin.
    pub fn feasible_fm(&self) -> bool {
        let n = self.nvars;
        let mut eqs: Vec<(Vec<Q>, Q)> = Vec::new();
        let mut ineqs: Vec<(Vec<Q>, Q)> = Vec::new();
        for (a, s, b) in &self.rows {
            match s {
                Sense::Eq => eqs.push((a.clone(), b.clone())),
                Sense::Le => ineqs.push((a.clone(), b.clone())),
            }
        }
        for j in 0..n {
            if !self.free[j] {
                let mut a = vec![Q::zero(); n];
                a[j] = q(-1);
                ineqs.push((a, Q::zero()));
            }
        }
        // substitute equalities away
        while let Some((a, b)) = eqs.pop() {
            let Some(j) = (0..n).find(|&j| !a[j].is_zero()) else {
                if !b.is_zero() {
                    return false;
                }
                continue;
            };
            let p = a[j].clone();
            let sub = |row: &mut (Vec<Q>, Q)| {
                if row.0[j].is_zero() {
                    return;
                }
                let f = &row.0[j] / &p;
                for k in 0..n {
                    let d = &f * &a[k];
                    row.0[k] -= d;
                }
                row.1 -= &f * &b;
            };
            eqs.iter_mut().for_each(sub);
            ineqs.iter_mut().for_each(sub);
        }
        fourier_motzkin(n, ineqs)
    }

    /// Maximizes `c . x` by two-phase simplex.
    pub fn maximize(&self, c: &[Q]) -> LpOutcome {
        assert_eq!(c.len(), self.nvars);
        // columns: split free variables, then one slack per Le row
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.nvars);
        let mut ncols = 0;
        for j in 0..self.nvars {
            if self.free[j] {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                col_of.push((ncols, None));
                ncols += 1;
            }
        }
        let nslack = self.rows.iter().filter(|r| r.1 == Sense::Le).count();
        let nstruct = ncols + nslack;
        let nrows = self.rows.len();
        let width = nstruct + nrows + 1;
        let mut t = vec![vec![Q::zero(); width]; nrows];
        let mut slack = ncols;
        for (i, (a, s, b)) in self.rows.iter().enumerate() {
            for (j, v) in a.iter().enumerate() {
                let (p, m) = col_of[j];
                t[i][p] = v.clone();
                if let Some(m) = m {
                    t[i][m] = -v.clone();
                }
            }
            if *s == Sense::Le {
                t[i][slack] = q(1);
                slack += 1;
            }
            t[i][width - 1] = b.clone();
            if b.is_negative() {
                for x in t[i].iter_mut() {
                    *x = -x.clone();
                }
            }
            t[i][nstruct + i] = q(1);
        }
        let mut basis: Vec<usize> = (nstruct..nstruct + nrows).collect();

        // phase 1
        let mut cost1 = vec![Q::zero(); width - 1];
        for c in cost1.iter_mut().skip(nstruct) {
            *c = q(-1);
        }
        run_simplex(&mut t, &mut basis, &cost1, width - 1);
        let infeas: Q = basis
            .iter()
            .zip(&t)
            .filter(|(&b, _)| b >= nstruct)
            .map(|(_, row)| row[width - 1].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive artificials out of the basis
        let mut i = 0;
        while i < t.len() {
            if basis[i] >= nstruct {
                if let Some(j) = (0..nstruct).find(|&j| !t[i][j].is_zero()) {
                    pivot(&mut t, &mut basis, i, j);
                } else {
                    t.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }

        // phase 2 over structural columns only
        let mut cost2 = vec![Q::zero(); width - 1];
        for (j, v) in c.iter().enumerate() {
            let (p, m) = col_of[j];
            cost2[p] = v.clone();
            if let Some(m) = m {
                cost2[m] = -v.clone();
            }
        }
        if !run_simplex(&mut t, &mut basis, &cost2, nstruct) {
            return LpOutcome::Unbounded;
        }
        let mut y = vec![Q::zero(); nstruct];
        for (i, &b) in basis.iter().enumerate() {
            if b < nstruct {
                y[b] = t[i][width - 1].clone();
            }
        }
        let x: Vec<Q> = col_of
            .iter()
            .map(|&(p, m)| match m {
                Some(m) => &y[p] - &y[m],
                None => y[p].clone(),
            })
            .collect();
        let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { value, x }
    }

    pub fn feasible_simplex(&self) -> bool {
        !matches!(self.maximize(&vec![Q::zero(); self.nvars]), LpOutcome::Infeasible)
    }
}

fn pivot(t: &mut [Vec<Q>], basis: &mut [usize], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let pr = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(&pr) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    basis[r] = c;
}

/// Bland's-rule primal simplex maximizing `cost` with entering columns
/// restricted to `0..allowed`. Returns false when unbounded.
fn run_simplex(t: &mut [Vec<Q>], basis: &mut [usize], cost: &[Q], allowed: usize) -> bool {
    let rhs = cost.len();
    loop {
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: Q = basis
                .iter()
                .zip(t.iter())
                .map(|(&b, row)| &cost[b] * &row[j])
                .sum();
            (&cost[j] - z).is_positive()
        });
        let Some(j) = entering else { return true };
        let mut leave: Option<(usize, Q)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[rhs] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { return false };
        pivot(t, basis, r, j);
    }
}

/// Scales a constraint to primitive integer form so duplicates collapse.
fn normalize(a: &[Q], b: &Q) -> (Vec<BigInt>, BigInt) {
    let lcm = a
        .iter()
        .chain([b])
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = a.iter().map(|x| (x * &lcm).to_integer()).collect();
    let bi = (b * &lcm).to_integer();
    let g = ints.iter().chain([&bi]).fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return (ints, bi);
    }
    (ints.iter().map(|x| x / &g).collect(), bi / &g)
}

fn fourier_motzkin(n: usize, rows: Vec<(Vec<Q>, Q)>) -> bool {
    let mut set: HashSet<(Vec<BigInt>, BigInt)> = HashSet::new();
    for (a, b) in &rows {
        set.insert(normalize(a, b));
    }
    let mut alive: Vec<usize> = (0..n).collect();
    loop {
        // trivial rows: 0 <= b
        let mut rows: Vec<(Vec<BigInt>, BigInt)> = Vec::with_capacity(set.len());
        for (a, b) in set.drain() {
            if a.iter().all(Zero::is_zero) {
                if b.is_negative() {
                    return false;
                }
            } else {
                rows.push((a, b));
            }
        }
        alive.retain(|&j| rows.iter().any(|(a, _)| !a[j].is_zero()));
        let Some(&j) = alive.iter().min_by_key(|&&j| {
            let p = rows.iter().filter(|(a, _)| a[j].is_positive()).count();
            let m = rows.iter().filter(|(a, _)| a[j].is_negative()).count();
            p * m
        }) else {
            return true;
        };
        let (pos, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|(a, _)| a[j].is_positive());
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(a, _)| a[j].is_negative());
        set.extend(zero);
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                let (cp, cn) = (ap[j].clone(), -an[j].clone());
                let a: Vec<Q> = (0..n)
                    .map(|k| Q::from_integer(&cn * &ap[k] + &cp * &an[k]))
                    .collect();
                let b = Q::from_integer(&cn * bp + &cp * bn);
                set.insert(normalize(&a, &b));
            }
        }
    }
}

/// Whether `shift` lies in `cone1 - cone2`, i.e. whether
/// `cone1 ∩ (cone2 + shift)` is nonempty. Cones are given by rays (nonnegative
/// coefficients) and lineality generators (free coefficients) in `Q^m`.
pub fn cones_meet(
    rays1: &[Vec<i64>],
    lin1: &[Vec<i64>],
    rays2: &[Vec<i64>],
    lin2: &[Vec<i64>],
    shift: &[Q],
) -> Result<bool> {
    let m = shift.len();
    for v in rays1.iter().chain(lin1).chain(rays2).chain(lin2) {
        if v.len() != m {
            return Err(Error::Dimension(format!(
                "generator of length {} in dimension {m}",
                v.len()
            )));
        }
    }
    let lp = meet_program(rays1, lin1, rays2, lin2, shift);
    Ok(if m <= 12 {
        lp.feasible_fm()
    } else {
        lp.feasible_simplex()
    })
}

/// `Σλ r1 + Σν l1 − Σμ r2 − Σρ l2 = shift` with `λ, μ ≥ 0`.
pub(crate) fn meet_program(
    rays1: &[Vec<i64>],
    lin1: &[Vec<i64>],
    rays2: &[Vec<i64>],
    lin2: &[Vec<i64>],
    shift: &[Q],
) -> LinearProgram {
    let cols: Vec<(&Vec<i64>, i64, bool)> = rays1
        .iter()
        .map(|v| (v, 1, false))
        .chain(lin1.iter().map(|v| (v, 1, true)))
        .chain(rays2.iter().map(|v| (v, -1, false)))
        .chain(lin2.iter().map(|v| (v, -1, true)))
        .collect();
    let mut lp = LinearProgram::new(cols.len());
    for (j, c) in cols.iter().enumerate() {
        if c.2 {
            lp.set_free(j);
        }
    }
    for (k, s) in shift.iter().enumerate() {
        let a = cols.iter().map(|(v, sign, _)| q(v[k] * sign)).collect();
        lp.add_eq(a, s.clone());
    }
    lp
}
