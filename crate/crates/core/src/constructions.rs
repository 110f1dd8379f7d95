//! Standard surface fans, cyclic quotients and their minimal resolutions.
//!
//! # Quotients of Hirzebruch surfaces
//!
//! With `Z = χ^{e1*}`, `Y = χ^{e2*}` and `F_a` given by the rays
//! `e1, e2, -e2, -e1 - a e2`, the generator `ξ` of `μ_p` acts by
//! `(Z, Y) ↦ (ξZ, ξY)`. The invariant monomials form the lattice
//! `M' = {m : m1 + m2 ≡ 0 mod p}`, with basis `U = Z^p` and `W^{-1} = Z^{-1} Y`.
//! In the dual basis of `N' ⊃ N` a ray `v = (v1, v2)` of `F_a` has
//! coordinates `(<U, v>, <W^{-1}, v>) = (p v1, v2 - v1)`. The quotient fan
//! consists of the primitive generators of these images:
//! `e1 ↦ (p, -1)`, `e2 ↦ (0, 1)`, `-e2 ↦ (0, -1)`, `-e1 - a e2 ↦ (-p, 1 - a)`.
//! For `(a, p) = (2, 3)` this is `{3e1 - e2, e2, -e2, -3e1 - e2}`.
//!
//! The diagonal action on `P^1 × P^1` works the same way and gives
//! `{e1, e1 + q e2, -e1, -e1 - q e2}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan2D;
use crate::lattice::{det2, ext_gcd, LatticeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StandardFanSpec {
    ProjectivePlane,
    P1xP1,
    Hirzebruch { a: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientSpec {
    DiagonalP1xP1 { q: u32 },
    HirzebruchQuotient { a: u32, p: u32 },
}

fn lv(x: i64, y: i64) -> LatticeVector {
    LatticeVector::from_i64s(&[x, y])
}

fn big(x: u32) -> BigInt {
    BigInt::from(x)
}

pub fn standard_fan(spec: StandardFanSpec) -> Result<Fan2D> {
    let rays = match spec {
        StandardFanSpec::ProjectivePlane => vec![lv(1, 0), lv(0, 1), lv(-1, -1)],
        StandardFanSpec::P1xP1 => vec![lv(1, 0), lv(0, 1), lv(-1, 0), lv(0, -1)],
        StandardFanSpec::Hirzebruch { a } => {
            if a == 0 {
                return Err(Error::BadParameter(
                    "Hirzebruch index must be at least 1 (use P1xP1 for a = 0)".into(),
                ));
            }
            vec![
                lv(1, 0),
                lv(0, 1),
                lv(0, -1),
                LatticeVector::new(vec![BigInt::from(-1), -big(a)]),
            ]
        }
    };
    Fan2D::new(&rays)
}

/// `F_a` for any `a >= 0`, with `F_0 = P^1 × P^1`.
pub fn hirzebruch(a: u32) -> Fan2D {
    let spec = if a == 0 {
        StandardFanSpec::P1xP1
    } else {
        StandardFanSpec::Hirzebruch { a }
    };
    standard_fan(spec).expect("Hirzebruch fans are valid")
}

/// The (possibly singular) fan of a cyclic quotient; see the module docs.
pub fn quotient_fan(spec: QuotientSpec) -> Result<Fan2D> {
    let rays = match spec {
        QuotientSpec::DiagonalP1xP1 { q } => {
            if q < 2 {
                return Err(Error::BadParameter(format!(
                    "quotient order must be >= 2, got {q}"
                )));
            }
            let q = big(q);
            vec![
                lv(1, 0),
                LatticeVector::new(vec![BigInt::one(), q.clone()]),
                lv(-1, 0),
                LatticeVector::new(vec![-BigInt::one(), -q]),
            ]
        }
        QuotientSpec::HirzebruchQuotient { a, p } => {
            if a < 1 {
                return Err(Error::BadParameter(format!(
                    "Hirzebruch index must be >= 1, got {a}"
                )));
            }
            if p < 2 {
                return Err(Error::BadParameter(format!(
                    "quotient order must be >= 2, got {p}"
                )));
            }
            let (a, p) = (big(a), big(p));
            // Fan2D::new primitivizes (-p, 1 - a) when gcd(p, a - 1) > 1.
            vec![
                LatticeVector::new(vec![p.clone(), -BigInt::one()]),
                lv(0, 1),
                lv(0, -1),
                LatticeVector::new(vec![-p, BigInt::one() - a]),
            ]
        }
    };
    Fan2D::new(&rays)
}

/// Hirzebruch–Jung string of the cone `(u, v)` (counterclockwise, `det > 0`):
/// the rays to insert strictly between `u` and `v`.
pub fn hj_string(u: &LatticeVector, v: &LatticeVector) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let mut u = u.clone();
    loop {
        let d = det2(&u, v);
        if d <= BigInt::one() {
            return out;
        }
        // p0 with det(u, p0) = 1.
        let (x, y) = (&u.coords()[0], &u.coords()[1]);
        let (_, s, t) = ext_gcd(x, y);
        let p0 = LatticeVector::new(vec![-t, s]);
        // v = alpha u + d p0; step to w = p0 + k u with det(w, v) in [1, d - 1].
        let alpha = -det2(&p0, v);
        let k = alpha.div_floor(&d) + 1;
        let w = &p0 + &u.scale(&k);
        debug_assert!(det2(&u, &w).is_one());
        debug_assert!(det2(&w, v).is_positive() && det2(&w, v) < d);
        out.push(w.clone());
        u = w;
    }
}

/// Minimal resolution: every singular cone receives its Hirzebruch–Jung string.
pub fn hj_resolve(fan: &Fan2D) -> Fan2D {
    if fan.is_smooth() {
        return fan.clone();
    }
    let mut rays = Vec::with_capacity(fan.len());
    for i in 0..fan.len() {
        rays.push(fan.ray(i).clone());
        rays.extend(hj_string(fan.ray(i), fan.ray(i + 1)));
    }
    let out = Fan2D::new(&rays).expect("refining a complete fan keeps it complete");
    debug_assert!(out.is_smooth());
    out
}

/// Index `i` of the cone `(ρ_i, ρ_{i+1}) = (a, b)`, if present.
fn cone_between(fan: &Fan2D, a: &LatticeVector, b: &LatticeVector) -> Option<usize> {
    (0..fan.len()).find(|&i| fan.ray(i) == a && fan.ray(i + 1) == b)
}

/// The resolved quotient of `F_a` by `μ_p`, blown up at the fixed points
/// of the cones `(e1, e2)` and `(e2, -e1)`; adds `e1 + e2` and `-e1 + e2`.
pub fn xhat2(a: u32, p: u32) -> Result<Fan2D> {
    let mut fan = hj_resolve(&quotient_fan(QuotientSpec::HirzebruchQuotient { a, p })?);
    for (x, y) in [(lv(1, 0), lv(0, 1)), (lv(0, 1), lv(-1, 0))] {
        let i = cone_between(&fan, &x, &y).ok_or_else(|| {
            Error::BadParameter(format!(
                "resolved quotient for (a, p) = ({a}, {p}) has no cone ({x}, {y})"
            ))
        })?;
        fan = fan.blow_up(i)?;
    }
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(fan: &Fan2D) -> BTreeSet<LatticeVector> {
        fan.rays().iter().cloned().collect()
    }

    fn rays(list: &[[i64; 2]]) -> BTreeSet<LatticeVector> {
        list.iter().map(|c| LatticeVector::from_i64s(c)).collect()
    }

    #[test]
    fn standard_examples() {
        assert_eq!(
            set(&standard_fan(StandardFanSpec::Hirzebruch { a: 2 }).unwrap()),
            rays(&[[1, 0], [-1, -2], [0, 1], [0, -1]])
        );
        let p2 = standard_fan(StandardFanSpec::ProjectivePlane).unwrap();
        assert!(p2.is_smooth() && p2.len() == 3);
        assert_eq!(standard_fan(StandardFanSpec::P1xP1).unwrap().len(), 4);
        assert!(standard_fan(StandardFanSpec::Hirzebruch { a: 0 }).is_err());
    }

    #[test]
    fn quotient_examples() {
        let f2 = quotient_fan(QuotientSpec::DiagonalP1xP1 { q: 3 }).unwrap();
        assert_eq!(set(&f2), rays(&[[1, 0], [1, 3], [-1, 0], [-1, -3]]));
        let f = quotient_fan(QuotientSpec::DiagonalP1xP1 { q: 2 }).unwrap();
        assert_eq!(set(&f), rays(&[[1, 0], [1, 2], [-1, 0], [-1, -2]]));
        let f8 = quotient_fan(QuotientSpec::HirzebruchQuotient { a: 2, p: 3 }).unwrap();
        assert_eq!(set(&f8), rays(&[[0, 1], [3, -1], [0, -1], [-3, -1]]));
        assert!(quotient_fan(QuotientSpec::DiagonalP1xP1 { q: 1 }).is_err());
        assert!(quotient_fan(QuotientSpec::HirzebruchQuotient { a: 0, p: 3 }).is_err());
        // gcd(p, a - 1) = 3 forces primitivization of (-3, -3).
        let g = quotient_fan(QuotientSpec::HirzebruchQuotient { a: 4, p: 3 }).unwrap();
        assert!(g.index_of(&LatticeVector::from_i64s(&[-1, -1])).is_some());
    }

    #[test]
    fn diag_q3_resolution() {
        let f = hj_resolve(&quotient_fan(QuotientSpec::DiagonalP1xP1 { q: 3 }).unwrap());
        assert_eq!(
            set(&f),
            rays(&[
                [1, 0],
                [1, 1],
                [1, 2],
                [1, 3],
                [0, 1],
                [-1, 0],
                [-1, -1],
                [-1, -2],
                [-1, -3],
                [0, -1],
            ])
        );
    }

    #[test]
    fn octagon_resolution() {
        let f = hj_resolve(&quotient_fan(QuotientSpec::DiagonalP1xP1 { q: 2 }).unwrap());
        assert_eq!(
            set(&f),
            rays(&[
                [1, 0],
                [1, 1],
                [1, 2],
                [0, 1],
                [-1, 0],
                [-1, -1],
                [-1, -2],
                [0, -1]
            ])
        );
    }

    #[test]
    fn f2_mod3_resolution() {
        let f = hj_resolve(&quotient_fan(QuotientSpec::HirzebruchQuotient { a: 2, p: 3 }).unwrap());
        assert_eq!(
            set(&f),
            rays(&[
                [1, 0],
                [3, -1],
                [2, -1],
                [1, -1],
                [0, -1],
                [-1, 0],
                [-3, -1],
                [-2, -1],
                [-1, -1],
                [0, 1],
            ])
        );
    }

    #[test]
    fn xhat2_example() {
        let f = xhat2(2, 3).unwrap();
        assert_eq!(f.len(), 12);
        assert!(f.is_smooth());
        assert!(f.index_of(&LatticeVector::from_i64s(&[1, 1])).is_some());
        assert!(f.index_of(&LatticeVector::from_i64s(&[-1, 1])).is_some());
    }

    #[test]
    fn hj_string_simple_cone() {
        let s = hj_string(
            &LatticeVector::from_i64s(&[1, 0]),
            &LatticeVector::from_i64s(&[1, 3]),
        );
        assert_eq!(
            s,
            vec![
                LatticeVector::from_i64s(&[1, 1]),
                LatticeVector::from_i64s(&[1, 2])
            ]
        );
        // 1/3(1,1): a single (-3)-curve.
        let s = hj_string(
            &LatticeVector::from_i64s(&[1, 0]),
            &LatticeVector::from_i64s(&[-1, 3]),
        );
        assert_eq!(s, vec![LatticeVector::from_i64s(&[0, 1])]);
    }
}
