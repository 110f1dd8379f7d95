//! Fans: complete two-dimensional fans as cyclic ray lists, and a plain
//! ray/cone container for higher rank.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{det2, primitive, BasisChange, LatticeVector, UnimodularMatrix};
use crate::lp::{LpOutcome, StandardLp};

/// Adjacency data consumed by the `Γ`-graph construction.
pub trait RayAdjacency {
    fn rank(&self) -> usize;
    fn rays(&self) -> &[LatticeVector];
    /// Whether rays `i` and `j` together generate a two-dimensional cone of the fan.
    fn spans_cone(&self, i: usize, j: usize) -> bool;
}

/// A complete fan in `Z^2`, rays ordered counterclockwise starting from the
/// smallest polar angle in `[0, 2π)`. Cone `i` is spanned by rays `i` and `i+1`
/// (cyclically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan2D {
    rays: Vec<LatticeVector>,
    singular_cones: Vec<usize>,
}

/// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
fn half_plane(v: &LatticeVector) -> u8 {
    let (x, y) = (&v.coords()[0], &v.coords()[1]);
    if y.is_positive() || (y.is_zero() && x.is_positive()) {
        0
    } else {
        1
    }
}

/// Exact comparison of polar angles in `[0, 2π)`.
pub fn angle_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    half_plane(a)
        .cmp(&half_plane(b))
        .then_with(|| BigInt::zero().cmp(&det2(a, b)))
}

impl Fan2D {
    /// Primitivizes, sorts and validates a list of rank-2 ray generators.
    pub fn new(raw_rays: &[LatticeVector]) -> Result<Self> {
        validate_surface_fan(raw_rays)
    }

    pub fn from_i64s(rays: &[[i64; 2]]) -> Result<Self> {
        let raw: Vec<_> = rays.iter().map(|r| LatticeVector::from_i64s(r)).collect();
        Self::new(&raw)
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Ray `i` with cyclic indexing.
    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i % self.rays.len()]
    }

    pub fn index_of(&self, ray: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == ray)
    }

    /// `det(ρ_i, ρ_{i+1})`.
    pub fn cone_det(&self, i: usize) -> BigInt {
        det2(self.ray(i), self.ray(i + 1))
    }

    pub fn singular_cones(&self) -> &[usize] {
        &self.singular_cones
    }

    pub fn is_smooth(&self) -> bool {
        self.singular_cones.is_empty()
    }

    /// Re-checks that consecutive rays turn strictly less than `π` all the way round.
    pub fn is_complete(&self) -> bool {
        (0..self.len()).all(|i| self.cone_det(i).is_positive())
    }

    pub fn require_smooth(&self) -> Result<()> {
        if self.is_smooth() {
            Ok(())
        } else {
            Err(Error::NotSmooth(self.singular_cones.clone()))
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::BadIndex {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Cyclic predecessor and successor of ray `i`.
    pub fn neighbors(&self, i: usize) -> Result<(&LatticeVector, &LatticeVector)> {
        self.check_index(i)?;
        let l = self.len();
        Ok((&self.rays[(i + l - 1) % l], &self.rays[(i + 1) % l]))
    }

    /// Equivariant blow-up of the fixed point of cone `i`: inserts `ρ_i + ρ_{i+1}`.
    pub fn blow_up(&self, i: usize) -> Result<Fan2D> {
        self.check_index(i)?;
        if !self.cone_det(i).is_one() {
            return Err(Error::SingularCone(i));
        }
        let new_ray = self.ray(i) + self.ray(i + 1);
        let mut rays = self.rays.clone();
        rays.insert(i + 1, new_ray);
        Fan2D::new(&rays)
    }

    /// Removes ray `i` when `ρ_{i-1} + ρ_{i+1} = ρ_i` (the inverse of [`Fan2D::blow_up`]).
    pub fn blow_down(&self, i: usize) -> Result<Fan2D> {
        let (prev, next) = self.neighbors(i)?;
        if &(prev + next) != self.ray(i) || self.len() <= 3 {
            return Err(Error::BadParameter(format!(
                "ray {} is not the exceptional ray of a blow-up",
                self.ray(i)
            )));
        }
        let mut rays = self.rays.clone();
        rays.remove(i);
        Fan2D::new(&rays)
    }

    /// The same fan as a ray/cone container with cones `{i, i+1}`.
    pub fn to_general(&self) -> GeneralFan {
        let l = self.len();
        GeneralFan {
            rank: 2,
            rays: self.rays.clone(),
            max_cones: (0..l).map(|i| vec![i, (i + 1) % l]).collect(),
            simplicial: true,
        }
    }

    pub fn to_file(&self) -> FanFile {
        let g = self.to_general();
        FanFile {
            rank: 2,
            rays: g.rays,
            cones: Some(g.max_cones),
        }
    }
}

impl RayAdjacency for Fan2D {
    fn rank(&self) -> usize {
        2
    }

    fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    fn spans_cone(&self, i: usize, j: usize) -> bool {
        let l = self.len();
        i != j && ((i + 1) % l == j || (j + 1) % l == i)
    }
}

impl BasisChange for Fan2D {
    fn change_basis(&self, m: &UnimodularMatrix) -> Result<Self> {
        let rays = self
            .rays
            .iter()
            .map(|r| m.apply(r))
            .collect::<Result<Vec<_>>>()?;
        Fan2D::new(&rays)
    }
}

/// Primitivizes, deduplicates and sorts `raw_rays` counterclockwise, and
/// checks that they form a complete fan.
///
/// Identical input vectors are merged; distinct inputs on the same ray
/// (e.g. `(1,2)` and `(2,4)`) are rejected as parallel.
pub fn validate_surface_fan(raw_rays: &[LatticeVector]) -> Result<Fan2D> {
    let mut distinct: Vec<&LatticeVector> = Vec::new();
    for r in raw_rays {
        if r.rank() != 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                found: r.rank(),
            });
        }
        if !distinct.contains(&r) {
            distinct.push(r);
        }
    }
    let mut rays: Vec<LatticeVector> = Vec::with_capacity(distinct.len());
    for (i, r) in distinct.iter().enumerate() {
        let p = primitive(r)?;
        if let Some(j) = rays.iter().position(|q| q == &p) {
            return Err(Error::ParallelRays(j, i));
        }
        rays.push(p);
    }
    if rays.len() < 3 {
        return Err(Error::TooFewRays(rays.len()));
    }
    rays.sort_by(angle_cmp);
    let l = rays.len();
    let mut singular_cones = Vec::new();
    for i in 0..l {
        let d = det2(&rays[i], &rays[(i + 1) % l]);
        if !d.is_positive() {
            return Err(Error::NotComplete);
        }
        if !d.is_one() {
            singular_cones.push(i);
        }
    }
    Ok(Fan2D {
        rays,
        singular_cones,
    })
}

/// A fan of arbitrary rank stored as rays plus maximal cones (index sets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralFan {
    rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
    simplicial: bool,
}

impl GeneralFan {
    /// Rays are primitivized. When `simplicial` is set, the generators of
    /// each cone must be linearly independent.
    pub fn new(
        rank: usize,
        rays: Vec<LatticeVector>,
        max_cones: Vec<Vec<usize>>,
        simplicial: bool,
    ) -> Result<Self> {
        let rays = rays
            .iter()
            .map(|r| {
                if r.rank() != rank {
                    Err(Error::RankMismatch {
                        expected: rank,
                        found: r.rank(),
                    })
                } else {
                    primitive(r)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut used = vec![false; rays.len()];
        for cone in &max_cones {
            if cone.is_empty() {
                return Err(Error::InvalidFan("empty cone".into()));
            }
            for &i in cone {
                let slot = used.get_mut(i).ok_or(Error::BadIndex {
                    index: i,
                    len: rays.len(),
                })?;
                *slot = true;
            }
            if simplicial {
                let gens: Vec<_> = cone.iter().map(|&i| rays[i].clone()).collect();
                if !linearly_independent(&gens) {
                    return Err(Error::InvalidFan(format!(
                        "cone {cone:?} is declared simplicial but its generators are dependent"
                    )));
                }
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidFan(format!("ray {i} lies in no cone")));
        }
        Ok(Self {
            rank,
            rays,
            max_cones,
            simplicial,
        })
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }
}

impl RayAdjacency for GeneralFan {
    fn rank(&self) -> usize {
        self.rank
    }

    fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    fn spans_cone(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        self.max_cones.iter().any(|cone| {
            if !(cone.contains(&i) && cone.contains(&j)) {
                return false;
            }
            if self.simplicial {
                return true;
            }
            let others: Vec<_> = cone
                .iter()
                .filter(|&&k| k != i && k != j)
                .map(|&k| &self.rays[k])
                .collect();
            is_face(&self.rays[i], &self.rays[j], &others)
        })
    }
}

/// Whether `cone(a, b)` is a face of `cone(a, b, others...)`: some linear
/// form vanishes on `a`, `b` and is positive on every other generator.
fn is_face(a: &LatticeVector, b: &LatticeVector, others: &[&LatticeVector]) -> bool {
    let n = a.rank();
    // Variables u+ (n), u- (n), slack (others).
    let row = |v: &LatticeVector, slack: Option<usize>| -> Vec<BigInt> {
        let mut r: Vec<BigInt> = v.coords().to_vec();
        r.extend(v.coords().iter().map(|c| -c));
        r.extend((0..others.len()).map(|k| {
            if Some(k) == slack {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        }));
        r
    };
    let mut rows = vec![row(a, None), row(b, None)];
    let mut rhs = vec![BigInt::zero(), BigInt::zero()];
    for (k, v) in others.iter().enumerate() {
        rows.push(row(v, Some(k)));
        rhs.push(BigInt::one());
    }
    let cost = vec![BigInt::zero(); 2 * n + others.len()];
    matches!(
        StandardLp::new(rows, rhs, cost).solve(),
        LpOutcome::Optimal(_)
    )
}

fn linearly_independent(vectors: &[LatticeVector]) -> bool {
    use num_rational::BigRational;
    let mut m: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| {
            v.coords()
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect()
        })
        .collect();
    let cols = vectors.first().map_or(0, LatticeVector::rank);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank == vectors.len()
}

/// On-disk fan description: `{"rank": n, "rays": [[..], ..], "cones": [[..], ..]}`.
/// For rank 2, `cones` may be omitted and is derived from cyclic adjacency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<Vec<Vec<usize>>>,
}

impl FanFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFan(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fan files always serialize")
    }

    /// Validates a rank-2 file as a complete surface fan. Supplied cones
    /// must agree with the cyclic adjacency of the sorted rays.
    pub fn to_surface_fan(&self) -> Result<Fan2D> {
        if self.rank != 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                found: self.rank,
            });
        }
        let fan = Fan2D::new(&self.rays)?;
        if let Some(cones) = &self.cones {
            let canonical: BTreeSet<BTreeSet<LatticeVector>> = fan
                .to_general()
                .max_cones
                .iter()
                .map(|c| c.iter().map(|&i| fan.rays[i].clone()).collect())
                .collect();
            let mut given = BTreeSet::new();
            for cone in cones {
                let mut set = BTreeSet::new();
                for &i in cone {
                    let r = self.rays.get(i).ok_or(Error::BadIndex {
                        index: i,
                        len: self.rays.len(),
                    })?;
                    set.insert(primitive(r)?);
                }
                given.insert(set);
            }
            if given != canonical {
                return Err(Error::InvalidFan(
                    "cones do not match the cyclic adjacency of the rays".into(),
                ));
            }
        }
        Ok(fan)
    }

    pub fn to_general_fan(&self) -> Result<GeneralFan> {
        match &self.cones {
            Some(cones) => GeneralFan::new(self.rank, self.rays.clone(), cones.clone(), false),
            None if self.rank == 2 => Ok(self.to_surface_fan()?.to_general()),
            None => Err(Error::InvalidFan("cones are required for rank > 2".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: [i64; 2]) -> LatticeVector {
        LatticeVector::from_i64s(&c)
    }

    fn octagon() -> Fan2D {
        Fan2D::from_i64s(&[
            [1, 0],
            [1, 1],
            [0, 1],
            [-1, 1],
            [-1, 0],
            [-1, -1],
            [0, -1],
            [1, -1],
        ])
        .unwrap()
    }

    #[test]
    fn p1xp1_any_order() {
        let fan = Fan2D::from_i64s(&[[0, -1], [-1, 0], [1, 0], [0, 1]]).unwrap();
        assert!(fan.is_smooth() && fan.is_complete());
        assert_eq!(fan.len(), 4);
        assert_eq!(fan.rays()[0], lv([1, 0]));
        assert_eq!(fan.rays()[1], lv([0, 1]));
    }

    #[test]
    fn not_complete() {
        assert_eq!(
            Fan2D::from_i64s(&[[1, 0], [0, 1], [1, 1]]),
            Err(Error::NotComplete)
        );
        assert_eq!(
            Fan2D::from_i64s(&[[1, 0], [0, 1]]),
            Err(Error::TooFewRays(2))
        );
        // half-plane gap
        assert_eq!(
            Fan2D::from_i64s(&[[1, 0], [0, 1], [-1, 0]]),
            Err(Error::NotComplete)
        );
    }

    #[test]
    fn parallel_and_duplicates() {
        assert!(matches!(
            Fan2D::from_i64s(&[[1, 2], [2, 4], [-1, 0], [0, -1]]),
            Err(Error::ParallelRays(0, 1))
        ));
        let fan = Fan2D::from_i64s(&[[1, 0], [1, 0], [0, 1], [-1, -1]]).unwrap();
        assert_eq!(fan.len(), 3);
        assert_eq!(
            Fan2D::from_i64s(&[[0, 0], [1, 0], [0, 1]]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn diagonal_quotient_is_singular_everywhere() {
        let fan = Fan2D::from_i64s(&[[1, 0], [1, 3], [-1, 0], [-1, -3]]).unwrap();
        assert!(fan.is_complete());
        assert!(!fan.is_smooth());
        assert_eq!(fan.singular_cones(), &[0, 1, 2, 3]);
    }

    #[test]
    fn blow_up_examples() {
        let p1p1 = Fan2D::from_i64s(&[[1, 0], [0, 1], [-1, 0], [0, -1]]).unwrap();
        let b = p1p1.blow_up(0).unwrap();
        assert!(b.index_of(&lv([1, 1])).is_some());
        assert!(b.is_smooth() && b.len() == 5);

        let mut fan = p1p1.clone();
        for r in [[1, 1], [-1, 1], [-1, -1], [1, -1]] {
            let (i, _) = (0..fan.len())
                .map(|i| (i, fan.ray(i) + fan.ray(i + 1)))
                .find(|(_, s)| s == &lv(r))
                .unwrap();
            fan = fan.blow_up(i).unwrap();
        }
        assert_eq!(fan, octagon());

        let sing = Fan2D::from_i64s(&[[1, 0], [1, 3], [-1, 0], [-1, -3]]).unwrap();
        assert_eq!(sing.blow_up(0), Err(Error::SingularCone(0)));
    }

    #[test]
    fn blow_down_inverts_blow_up() {
        let p2 = Fan2D::from_i64s(&[[1, 0], [0, 1], [-1, -1]]).unwrap();
        let b = p2.blow_up(1).unwrap();
        let i = b.index_of(&lv([-1, 0])).unwrap();
        assert_eq!(b.blow_down(i).unwrap(), p2);
        assert!(p2.blow_down(0).is_err());
    }

    #[test]
    fn neighbor_examples() {
        let f4 = octagon();
        let i = f4.index_of(&lv([-1, 0])).unwrap();
        let (prev, next) = f4.neighbors(i).unwrap();
        assert_eq!((prev, next), (&lv([-1, 1]), &lv([-1, -1])));

        let f2 = Fan2D::from_i64s(&[[1, 0], [0, 1], [-1, -2], [0, -1]]).unwrap();
        let i = f2.index_of(&lv([0, -1])).unwrap();
        assert_eq!(f2.neighbors(i).unwrap(), (&lv([-1, -2]), &lv([1, 0])));

        let l = f4.len();
        assert_eq!(f4.neighbors(l - 1).unwrap(), (f4.ray(l - 2), f4.ray(0)));
        assert!(f4.neighbors(l).is_err());
    }

    #[test]
    fn general_fan_validation() {
        let rays = vec![
            LatticeVector::from_i64s(&[1, 0, 0]),
            LatticeVector::from_i64s(&[0, 1, 0]),
            LatticeVector::from_i64s(&[0, 0, 1]),
            LatticeVector::from_i64s(&[-1, -1, -1]),
        ];
        let cones = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let fan = GeneralFan::new(3, rays.clone(), cones, true).unwrap();
        assert!(fan.spans_cone(0, 3));
        assert!(GeneralFan::new(3, rays.clone(), vec![vec![0, 1, 2]], true).is_err());
        assert!(GeneralFan::new(3, rays, vec![vec![0, 1, 9]], true).is_err());
    }

    #[test]
    fn non_simplicial_face_test() {
        // Cone over a square: (±1, ±1, 1). Diagonal pairs are not faces.
        let rays: Vec<_> = [[1, 1, 1], [-1, 1, 1], [-1, -1, 1], [1, -1, 1]]
            .iter()
            .map(|c| LatticeVector::from_i64s(c))
            .collect();
        let fan = GeneralFan::new(3, rays, vec![vec![0, 1, 2, 3]], false).unwrap();
        assert!(fan.spans_cone(0, 1));
        assert!(!fan.spans_cone(0, 2));
    }

    #[test]
    fn fan_file_roundtrip() {
        let text = r#"{"rank": 2, "rays": [[1,0],[0,1],[-1,-1]]}"#;
        let file = FanFile::from_json(text).unwrap();
        let fan = file.to_surface_fan().unwrap();
        let out = fan.to_file();
        assert_eq!(out.to_surface_fan().unwrap(), fan);
        assert_eq!(FanFile::from_json(&out.to_json()).unwrap(), out);

        let bad = r#"{"rank": 2, "rays": [[1,0],[0,1],[-1,-1]], "cones": [[0,2]]}"#;
        assert!(FanFile::from_json(bad).unwrap().to_surface_fan().is_err());
        assert!(FanFile::from_json("{").is_err());
    }
}
