//! A small dense two-phase simplex over `BigRational`.
//!
//! Only what the cone tests need: `min c.x` subject to `A x = b, x >= 0`.
//! Bland's rule guarantees termination; problems here have a handful of
//! rows and a few dozen columns at most.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal(Vec<BigRational>),
    Infeasible,
    Unbounded,
}

pub(crate) struct StandardLp {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
}

impl StandardLp {
    pub fn new(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, c: Vec<BigInt>) -> Self {
        let q = |v: Vec<BigInt>| {
            v.into_iter()
                .map(BigRational::from_integer)
                .collect::<Vec<_>>()
        };
        Self {
            a: a.into_iter().map(q).collect(),
            b: q(b),
            c: q(c),
        }
    }

    pub fn solve(&self) -> LpOutcome {
        let m = self.a.len();
        let n = self.c.len();
        // Tableau rows: [A | I_art | b], with b made nonnegative.
        let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        for i in 0..m {
            let flip = self.b[i].is_negative();
            let mut row: Vec<BigRational> = self.a[i]
                .iter()
                .map(|x| if flip { -x.clone() } else { x.clone() })
                .collect();
            row.extend((0..m).map(|k| {
                if k == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row.push(if flip {
                -self.b[i].clone()
            } else {
                self.b[i].clone()
            });
            t.push(row);
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        // Phase 1: minimise the sum of artificials.
        let phase1: Vec<BigRational> = (0..n + m)
            .map(|j| {
                if j >= n {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        if run_simplex(&mut t, &mut basis, &phase1, n + m) == Step::Unbounded {
            return LpOutcome::Unbounded;
        }
        let infeasibility: BigRational = basis
            .iter()
            .zip(&t)
            .filter(|(&bv, _)| bv >= n)
            .map(|(_, row)| row[n + m].clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < t.len() {
            if basis[r] >= n {
                if let Some(j) = (0..n).find(|&j| !t[r][j].is_zero()) {
                    pivot(&mut t, &mut basis, r, j);
                } else {
                    // Redundant constraint.
                    t.remove(r);
                    basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
        for row in t.iter_mut() {
            row.drain(n..n + m);
        }

        // Phase 2.
        if run_simplex(&mut t, &mut basis, &self.c, n) == Step::Unbounded {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); n];
        for (row, &bv) in t.iter().zip(&basis) {
            x[bv] = row[n].clone();
        }
        LpOutcome::Optimal(x)
    }
}

#[derive(PartialEq)]
enum Step {
    Optimal,
    Unbounded,
}

fn run_simplex(
    t: &mut [Vec<BigRational>],
    basis: &mut [usize],
    cost: &[BigRational],
    ncols: usize,
) -> Step {
    loop {
        // Reduced costs c_j - c_B B^{-1} A_j; Bland: first negative.
        let entering = (0..ncols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = cost[j].clone();
            for (row, &bv) in t.iter().zip(basis.iter()) {
                if !row[j].is_zero() {
                    rc -= &cost[bv] * &row[j];
                }
            }
            rc.is_negative()
        });
        let Some(j) = entering else {
            return Step::Optimal;
        };
        let rhs = t[0].len() - 1;
        let mut leave: Option<(usize, BigRational)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[rhs] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Step::Unbounded;
        };
        pivot_slice(t, basis, r, j);
    }
}

fn pivot(t: &mut Vec<Vec<BigRational>>, basis: &mut [usize], r: usize, j: usize) {
    pivot_slice(t.as_mut_slice(), basis, r, j)
}

fn pivot_slice(t: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, j: usize) {
    let p = t[r][j].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[j].is_zero() {
            continue;
        }
        let f = row[j].clone();
        for (x, y) in row.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    basis[r] = j;
}
