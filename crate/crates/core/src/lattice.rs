//! Exact integer vectors in a lattice `N` and its dual `N*`.
//!
//! Coordinates are arbitrary-precision integers in a fixed basis `e_1..e_n`
//! of `N` (resp. the dual basis `e_1*..e_n*`). Nothing in this crate ever
//! touches floating point.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

macro_rules! int_vector {
    ($(#[$meta:meta])* $name:ident, $suffix:literal) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Vec<BigInt>);

        impl $name {
            pub fn new(coords: Vec<BigInt>) -> Self {
                Self(coords)
            }

            pub fn from_i64s(coords: &[i64]) -> Self {
                Self(coords.iter().map(|&c| BigInt::from(c)).collect())
            }

            pub fn zero(rank: usize) -> Self {
                Self(vec![BigInt::zero(); rank])
            }

            /// The `k`-th basis vector (0-based).
            pub fn basis(rank: usize, k: usize) -> Self {
                let mut v = Self::zero(rank);
                v.0[k] = BigInt::one();
                v
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[BigInt] {
                &self.0
            }

            pub fn into_coords(self) -> Vec<BigInt> {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn scale(&self, k: &BigInt) -> Self {
                Self(self.0.iter().map(|c| c * k).collect())
            }

            /// Coordinates as `i64`, when they fit.
            pub fn to_i64s(&self) -> Option<Vec<i64>> {
                self.0.iter().map(ToPrimitive::to_i64).collect()
            }

            /// Human-readable label in the basis, e.g. `2e1*-e2*`.
            pub fn label(&self) -> String {
                format_combination(&self.0, $suffix)
            }

            fn check_rank(&self, other: &Self) -> Result<()> {
                if self.rank() != other.rank() {
                    return Err(Error::RankMismatch {
                        expected: self.rank(),
                        found: other.rank(),
                    });
                }
                Ok(())
            }

            pub fn checked_add(&self, other: &Self) -> Result<Self> {
                self.check_rank(other)?;
                Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|a| -a).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.label())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigints(&self.0, s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                deserialize_bigints(d).map(Self)
            }
        }
    };
}

int_vector!(
    /// An element of the lattice `N`: rays, one-parameter subgroups.
    LatticeVector,
    ""
);

int_vector!(
    /// An element of the dual lattice `N*`: torus weights, roots.
    DualVector,
    "*"
);

fn format_combination(coords: &[BigInt], suffix: &str) -> String {
    let mut out = String::new();
    for (k, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag = c.abs();
        if !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&format!("e{}{}", k + 1, suffix));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn serialize_bigints<S: Serializer>(
    coords: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(coords.len()))?;
    for c in coords {
        let n: serde_json::Number = c.to_string().parse().map_err(serde::ser::Error::custom)?;
        seq.serialize_element(&n)?;
    }
    seq.end()
}

pub(crate) fn deserialize_bigints<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<BigInt>, D::Error> {
    let nums = Vec::<serde_json::Number>::deserialize(d)?;
    nums.iter()
        .map(|n| {
            n.to_string()
                .parse::<BigInt>()
                .map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
        })
        .collect()
}

/// Serde helpers for plain JSON integer arrays of `BigInt`.
pub(crate) mod bigint_seq {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_bigints(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        deserialize_bigints(d)
    }
}

pub(crate) mod bigint_matrix {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "super::bigint_seq")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(
        m: &[Vec<BigInt>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            seq.serialize_element(&Row(row.clone()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Row>::deserialize(d)?
            .into_iter()
            .map(|r| r.0)
            .collect())
    }
}

/// Exact dot product `<R, v>`.
pub fn pairing(r: &DualVector, v: &LatticeVector) -> Result<BigInt> {
    if r.rank() != v.rank() {
        return Err(Error::RankMismatch {
            expected: r.rank(),
            found: v.rank(),
        });
    }
    Ok(pair(r, v))
}

/// `<R, v>` for vectors already known to share a rank.
pub(crate) fn pair(r: &DualVector, v: &LatticeVector) -> BigInt {
    debug_assert_eq!(r.rank(), v.rank());
    r.coords().iter().zip(v.coords()).map(|(a, b)| a * b).sum()
}

fn gcd_all(coords: &[BigInt]) -> BigInt {
    coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// `v / gcd(v)`: the primitive generator of the ray through `v`.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    let g = gcd_all(v.coords());
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticeVector::new(
        v.coords().iter().map(|c| c / &g).collect(),
    ))
}

pub fn is_primitive(v: &LatticeVector) -> bool {
    gcd_all(v.coords()).is_one()
}

/// Determinant of the 2x2 matrix with columns `u`, `v`.
pub fn det2(u: &LatticeVector, v: &LatticeVector) -> BigInt {
    let (a, b) = (u.coords(), v.coords());
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Smallest common multiple of the denominators, used to clear a rational vector.
pub(crate) fn clear_denominators(values: &[BigRational]) -> Vec<BigInt> {
    let l = values.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    values
        .iter()
        .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Integer vector scaled down by the gcd of its entries (no-op on zero).
pub(crate) fn reduce_by_gcd(values: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_all(&values);
    if g.is_zero() || g.is_one() {
        return values;
    }
    values.into_iter().map(|c| c / &g).collect()
}

/// Integer `t` range satisfying every `a + b t <= 0`; `None` when empty.
/// Panics if the range is unbounded (callers guarantee boundedness).
pub(crate) fn integer_interval(constraints: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt)> {
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for (a, b) in constraints {
        if b.is_zero() {
            if a.is_positive() {
                return None;
            }
        } else if b.is_positive() {
            let bound = (-a).div_floor(b);
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        } else {
            // t >= a / (-b), rounded up
            let ceil = -((-a).div_floor(&-b));
            lo = Some(lo.map_or(ceil.clone(), |l| l.max(ceil)));
        }
    }
    let (lo, hi) = (lo.expect("unbounded below"), hi.expect("unbounded above"));
    (lo <= hi).then_some((lo, hi))
}

/// Square integer matrix with determinant `±1`, acting on `N` by `v ↦ M v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix {
    rows: Vec<Vec<BigInt>>,
    inverse: Vec<Vec<BigInt>>,
}

impl UnimodularMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotUnimodular);
        }
        let inverse = integer_inverse(&rows).ok_or(Error::NotUnimodular)?;
        Ok(Self { rows, inverse })
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self {
            inverse: rows.clone(),
            rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn inverse(&self) -> Self {
        Self {
            rows: self.inverse.clone(),
            inverse: self.rows.clone(),
        }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mul = |a: &[Vec<BigInt>], b: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
            let n = a.len();
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        Self {
            rows: mul(&self.rows, &other.rows),
            inverse: mul(&other.inverse, &self.inverse),
        }
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.rank() != self.dim() {
            return Err(Error::RankMismatch {
                expected: self.dim(),
                found: v.rank(),
            });
        }
        Ok(LatticeVector::new(
            self.rows
                .iter()
                .map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// Inverse-transpose action on `N*`, so that `<M^{-T} R, M v> = <R, v>`.
    pub fn apply_dual(&self, r: &DualVector) -> Result<DualVector> {
        if r.rank() != self.dim() {
            return Err(Error::RankMismatch {
                expected: self.dim(),
                found: r.rank(),
            });
        }
        let n = self.dim();
        Ok(DualVector::new(
            (0..n)
                .map(|j| (0..n).map(|i| &self.inverse[i][j] * &r.coords()[i]).sum())
                .collect(),
        ))
    }
}

/// Objects that transform under a unimodular change of basis of `N`.
pub trait BasisChange: Sized {
    fn change_basis(&self, m: &UnimodularMatrix) -> Result<Self>;
}

impl BasisChange for LatticeVector {
    fn change_basis(&self, m: &UnimodularMatrix) -> Result<Self> {
        m.apply(self)
    }
}

impl BasisChange for DualVector {
    fn change_basis(&self, m: &UnimodularMatrix) -> Result<Self> {
        m.apply_dual(self)
    }
}

pub fn change_of_basis<T: BasisChange>(m: &UnimodularMatrix, x: &T) -> Result<T> {
    x.change_basis(m)
}

/// Gauss-Jordan over the rationals; `None` unless the inverse is integral
/// with determinant `±1`.
fn integer_inverse(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .cloned()
                .map(BigRational::from_integer)
                .chain((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))))
                .collect()
        })
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    if !det.abs().is_one() {
        return None;
    }
    a.into_iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|q| q.is_integer().then(|| q.to_integer()))
                .collect()
        })
        .collect()
}

/// Extended Euclid: `(g, x, y)` with `a x + b y = g >= 0`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Extends `fixed` (a list of rank-`n` vectors) to a `Z`-basis of `N`.
/// Returns the complementary vectors, or `None` when `fixed` does not span
/// a saturated sublattice of the right dimension.
pub(crate) fn complete_to_basis(fixed: &[LatticeVector], n: usize) -> Option<Vec<LatticeVector>> {
    let d = fixed.len();
    if d > n || fixed.iter().any(|f| f.rank() != n) {
        return None;
    }
    // Column operations U with F U = [H | 0], F the d x n matrix of rows f_i.
    let mut f: Vec<Vec<BigInt>> = fixed.iter().map(|v| v.coords().to_vec()).collect();
    let mut u: Vec<Vec<BigInt>> = UnimodularMatrix::identity(n).rows;
    let col_op = |m: &mut Vec<Vec<BigInt>>,
                  i: usize,
                  j: usize,
                  a: &BigInt,
                  b: &BigInt,
                  c: &BigInt,
                  e: &BigInt| {
        // (col_i, col_j) <- (a col_i + b col_j, c col_i + e col_j)
        for row in m.iter_mut() {
            let (x, y) = (row[i].clone(), row[j].clone());
            row[i] = a * &x + b * &y;
            row[j] = c * &x + e * &y;
        }
    };
    for r in 0..d {
        for j in (r + 1)..n {
            if f[r][j].is_zero() {
                continue;
            }
            let (x, y) = (f[r][r].clone(), f[r][j].clone());
            let (g, s, t) = ext_gcd(&x, &y);
            let (p, q) = (&x / &g, &y / &g);
            // new col_r = s col_r + t col_j ; new col_j = -q col_r + p col_j (det = sp + tq = 1)
            let mq = -q;
            col_op(&mut f, r, j, &s, &t, &mq, &p);
            col_op(&mut u, r, j, &s, &t, &mq, &p);
        }
        if f[r][r].is_zero() {
            return None;
        }
    }
    // H is lower triangular; saturated iff all diagonal entries are units.
    if (0..d).any(|r| !f[r][r].abs().is_one()) {
        return None;
    }
    let uinv = integer_inverse(&u)?;
    Some(
        uinv[d..]
            .iter()
            .map(|row| LatticeVector::new(row.clone()))
            .collect(),
    )
}
