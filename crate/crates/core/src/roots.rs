//! Demazure roots of a complete surface fan.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan2D;
use crate::lattice::{det2, ext_gcd, integer_interval, pair, DualVector, LatticeVector};

/// `R(N, Σ)`: dual vectors `α` with `<α, ρ> = 1` for one ray and `<α, ρ'> <= 0`
/// for all others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    /// Sorted lexicographically.
    roots: Vec<DualVector>,
    /// The ray `ρ` with `<α, ρ> = 1`, one per root.
    certifying_rays: Vec<LatticeVector>,
    /// Roots `α` with `-α` also a root.
    semisimple_pairs: Vec<DualVector>,
}

impl RootSystem {
    pub fn roots(&self) -> &[DualVector] {
        &self.roots
    }

    pub fn certifying_rays(&self) -> &[LatticeVector] {
        &self.certifying_rays
    }

    pub fn semisimple_pairs(&self) -> &[DualVector] {
        &self.semisimple_pairs
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, alpha: &DualVector) -> bool {
        self.roots.binary_search(alpha).is_ok()
    }

    /// Re-checks every certificate against the rays of `fan`.
    pub fn verify(&self, fan: &Fan2D) -> bool {
        self.roots
            .iter()
            .zip(&self.certifying_rays)
            .all(|(alpha, rho)| {
                fan.index_of(rho).is_some()
                    && pair(alpha, rho).is_one()
                    && fan
                        .rays()
                        .iter()
                        .filter(|r| *r != rho)
                        .all(|r| !pair(alpha, r).is_positive())
            })
    }

    fn from_map(found: BTreeMap<DualVector, LatticeVector>) -> Self {
        let semisimple_pairs = found
            .keys()
            .filter(|a| found.contains_key(&-*a))
            .cloned()
            .collect();
        let (roots, certifying_rays) = found.into_iter().unzip();
        Self {
            roots,
            certifying_rays,
            semisimple_pairs,
        }
    }
}

/// Enumerates `R(N, Σ)` exactly. For each ray the admissible `α` lie on the
/// line `<α, ρ> = 1`, and completeness cuts it down to a bounded segment.
pub fn root_system(fan: &Fan2D) -> Result<RootSystem> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let mut found = BTreeMap::new();
    for rho in fan.rays() {
        let (x, y) = (&rho.coords()[0], &rho.coords()[1]);
        let (_, s, t) = ext_gcd(x, y);
        let base = DualVector::new(vec![s, t]);
        let dir = DualVector::new(vec![-y, x.clone()]);
        let constraints: Vec<(BigInt, BigInt)> = fan
            .rays()
            .iter()
            .filter(|r| *r != rho)
            .map(|r| (pair(&base, r), det2(rho, r)))
            .collect();
        let Some((lo, hi)) = integer_interval(&constraints) else {
            continue;
        };
        let mut k = lo;
        while k <= hi {
            found.insert(&base + &dir.scale(&k), rho.clone());
            k += 1;
        }
    }
    Ok(RootSystem::from_map(found))
}

/// The reductive part of `Aut^0(X)` is the torus iff no root `α` has `-α` as a root.
pub fn is_reductive_part_torus(rs: &RootSystem) -> bool {
    rs.semisimple_pairs.is_empty()
}

/// Sufficient condition for blow-ups of the Hirzebruch surface `F_a` to have
/// reductive automorphism part equal to the torus: for `a >= 1`, two blow-up
/// rays with first coordinates of opposite signs; for `a = 0`, an opposite
/// pair among the blow-up rays.
pub fn blup_criterion(a: u32, blowup_rays: &[LatticeVector]) -> Result<bool> {
    if blowup_rays.len() < 2 {
        return Err(Error::TooFewBlowups);
    }
    if let Some(bad) = blowup_rays.iter().find(|r| r.rank() != 2) {
        return Err(Error::RankMismatch {
            expected: 2,
            found: bad.rank(),
        });
    }
    if a == 0 {
        return Ok(blowup_rays.iter().any(|r| blowup_rays.contains(&-r)));
    }
    let first = |r: &LatticeVector| r.coords()[0].clone();
    let pos = blowup_rays.iter().any(|r| first(r).is_positive());
    let neg = blowup_rays.iter().any(|r| first(r).is_negative());
    Ok(pos && neg)
}

/// Checks `R(N, Σ') = {α ∈ R(N, Σ) : <α, ρ_k> <= 0 for every new ray ρ_k}`
/// for a refinement `Σ'` of `Σ` obtained by adding rays.
pub fn root_restriction_check(fan: &Fan2D, blown_up: &Fan2D) -> Result<bool> {
    if fan.rays().iter().any(|r| blown_up.index_of(r).is_none()) {
        return Err(Error::NotARefinement);
    }
    let new_rays: Vec<&LatticeVector> = blown_up
        .rays()
        .iter()
        .filter(|r| fan.index_of(r).is_none())
        .collect();
    let base = root_system(fan)?;
    let restricted: Vec<DualVector> = base
        .roots()
        .iter()
        .filter(|alpha| new_rays.iter().all(|r| !pair(alpha, r).is_positive()))
        .cloned()
        .collect();
    Ok(root_system(blown_up)?.roots() == restricted.as_slice())
}
