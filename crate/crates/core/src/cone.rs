//! Convex feasibility tests on finite families of dual vectors.
//!
//! Everything here is decided by exact rational linear programming and
//! returns an integral certificate that can be re-checked by plain pairing
//! arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{clear_denominators, pair, reduce_by_gcd, DualVector, LatticeVector};
use crate::lp::{LpOutcome, StandardLp};

/// Integer coefficients `a_i >= 1` with `sum a_i R_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveRelation {
    #[serde(with = "crate::lattice::bigint_seq")]
    pub coefficients: Vec<BigInt>,
}

impl PositiveRelation {
    /// Re-checks the relation against `family` by direct summation.
    pub fn verify(&self, family: &[DualVector]) -> bool {
        self.coefficients.len() == family.len()
            && self.coefficients.iter().all(|a| a >= &BigInt::one())
            && combination(family, &self.coefficients).is_zero()
    }
}

/// Either every `-R_i` is a nonnegative integer combination of the family
/// (its positive span is a linear subspace), or a lattice vector `p`
/// pairs nonnegatively with every `R_i` and positively with at least one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeCertificate {
    /// `witness[i][j]` are the coefficients of `-R_i = sum_j witness[i][j] R_j`.
    Subspace {
        #[serde(with = "crate::lattice::bigint_matrix")]
        witness: Vec<Vec<BigInt>>,
    },
    Separating {
        p: LatticeVector,
    },
}

impl ConeCertificate {
    pub fn verify(&self, family: &[DualVector]) -> bool {
        match self {
            ConeCertificate::Subspace { witness } => {
                witness.len() == family.len()
                    && witness.iter().zip(family).all(|(w, r)| {
                        w.len() == family.len()
                            && w.iter().all(|c| !c.is_negative())
                            && combination(family, w) == -r
                    })
            }
            ConeCertificate::Separating { p } => is_separating(family, p),
        }
    }
}

/// `<R_i, p> >= 0` for all `i` and `> 0` for at least one.
pub fn is_separating(family: &[DualVector], p: &LatticeVector) -> bool {
    let mut strict = false;
    for r in family {
        if r.rank() != p.rank() {
            return false;
        }
        let v = pair(r, p);
        if v.is_negative() {
            return false;
        }
        strict |= v.is_positive();
    }
    strict
}

pub(crate) fn combination(family: &[DualVector], coeffs: &[BigInt]) -> DualVector {
    let rank = family.first().map_or(0, DualVector::rank);
    let mut acc = vec![BigInt::zero(); rank];
    for (r, a) in family.iter().zip(coeffs) {
        for (x, c) in acc.iter_mut().zip(r.coords()) {
            *x += a * c;
        }
    }
    DualVector::new(acc)
}

fn check_family(family: &[DualVector]) -> Result<usize> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    let rank = first.rank();
    if let Some(bad) = family.iter().find(|r| r.rank() != rank) {
        return Err(Error::RankMismatch {
            expected: rank,
            found: bad.rank(),
        });
    }
    Ok(rank)
}

/// Matrix with the family as columns.
fn columns(family: &[DualVector], rank: usize) -> Vec<Vec<BigInt>> {
    (0..rank)
        .map(|k| family.iter().map(|r| r.coords()[k].clone()).collect())
        .collect()
}

/// Finds integers `a_i >= 1` with `sum a_i R_i = 0`, or proves none exist.
///
/// Solves `min sum a_i` over the rational polyhedron `{a >= 1, sum a_i R_i = 0}`
/// and clears denominators.
pub fn positive_kernel_vector(family: &[DualVector]) -> Result<Option<PositiveRelation>> {
    let rank = check_family(family)?;
    let a = columns(family, rank);
    // a = 1 + b with b >= 0:  A b = -A 1.
    let b: Vec<BigInt> = a.iter().map(|row| -row.iter().sum::<BigInt>()).collect();
    let lp = StandardLp::new(a, b, vec![BigInt::one(); family.len()]);
    match lp.solve() {
        LpOutcome::Optimal(x) => {
            let shifted: Vec<_> = x
                .into_iter()
                .map(|q| q + num_rational::BigRational::one())
                .collect();
            let coefficients = reduce_by_gcd(clear_denominators(&shifted));
            let rel = PositiveRelation { coefficients };
            debug_assert!(rel.verify(family));
            Ok(Some(rel))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("objective is bounded below by zero"),
    }
}

/// Finds a nonzero relation `sum a_i R_i = 0` with all `a_i >= 0`.
///
/// The indices with `a_i > 0` form a balanced subfamily; conversely any
/// balanced subfamily yields such a relation. The returned vertex solution
/// has minimal support.
pub fn nonnegative_relation(family: &[DualVector]) -> Result<Option<Vec<BigInt>>> {
    let rank = check_family(family)?;
    let mut a = columns(family, rank);
    let mut b = vec![BigInt::zero(); rank];
    a.push(vec![BigInt::one(); family.len()]);
    b.push(BigInt::one());
    let lp = StandardLp::new(a, b, vec![BigInt::zero(); family.len()]);
    match lp.solve() {
        LpOutcome::Optimal(x) => Ok(Some(reduce_by_gcd(clear_denominators(&x)))),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("zero objective"),
    }
}

/// Decides whether the cone positively spanned by `family` is a linear
/// subspace, i.e. whether every `-R_i` lies in it.
pub fn positive_span_is_subspace(family: &[DualVector]) -> Result<(bool, ConeCertificate)> {
    let rank = check_family(family)?;
    let a = columns(family, rank);
    let mut witness = Vec::with_capacity(family.len());
    for (i, r) in family.iter().enumerate() {
        let b: Vec<BigInt> = r.coords().iter().map(|c| -c).collect();
        let lp = StandardLp::new(a.clone(), b, vec![BigInt::one(); family.len()]);
        match lp.solve() {
            LpOutcome::Optimal(x) => {
                // D x is integral with sum D x_j R_j = -D R_i; add (D-1) R_i to both sides.
                let l = x.iter().fold(BigInt::one(), |l, q| {
                    num_integer::Integer::lcm(&l, q.denom())
                });
                let mut coeffs = clear_denominators(&x);
                coeffs[i] += &l - BigInt::one();
                witness.push(coeffs);
            }
            LpOutcome::Infeasible => {
                let p = separating_vector(family, rank, Some(i))
                    .expect("Farkas: an infeasible membership test has a separating vector");
                let cert = ConeCertificate::Separating { p };
                debug_assert!(cert.verify(family));
                return Ok((false, cert));
            }
            LpOutcome::Unbounded => unreachable!("objective is bounded below by zero"),
        }
    }
    let cert = ConeCertificate::Subspace { witness };
    debug_assert!(cert.verify(family));
    Ok((true, cert))
}

/// A lattice vector with `<R_j, p> >= 1` for every member, if one exists.
/// By Gordan's theorem this happens iff no nonzero nonnegative relation exists.
pub fn strictly_positive_vector(family: &[DualVector]) -> Result<Option<LatticeVector>> {
    let rank = check_family(family)?;
    Ok(separating_vector(family, rank, None))
}

/// Minimal-`l1` rational `p` with `<R_j, p> >= 0` and `<R_i, p> >= 1`
/// (`strict = Some(i)`), or `<R_j, p> >= 1` for all `j` (`strict = None`);
/// scaled to a primitive lattice vector.
fn separating_vector(
    family: &[DualVector],
    rank: usize,
    strict: Option<usize>,
) -> Option<LatticeVector> {
    let s = family.len();
    // Columns: p+ (rank), p- (rank), slack (s).
    let mut a = Vec::with_capacity(s);
    let mut b = Vec::with_capacity(s);
    for (j, r) in family.iter().enumerate() {
        let mut row: Vec<BigInt> = r.coords().to_vec();
        row.extend(r.coords().iter().map(|c| -c));
        row.extend((0..s).map(|k| {
            if k == j {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        }));
        a.push(row);
        let rhs = match strict {
            Some(i) => (i == j) as i64,
            None => 1,
        };
        b.push(BigInt::from(rhs));
    }
    let mut c = vec![BigInt::one(); 2 * rank];
    c.extend(std::iter::repeat_n(BigInt::zero(), s));
    match StandardLp::new(a, b, c).solve() {
        LpOutcome::Optimal(x) => {
            let p: Vec<_> = (0..rank).map(|k| &x[k] - &x[rank + k]).collect();
            Some(LatticeVector::new(reduce_by_gcd(clear_denominators(&p))))
        }
        _ => None,
    }
}
