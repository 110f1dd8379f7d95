//! Torus weights of `H^1(X, Θ_X)`.
//!
//! For a weight `R` and a ray `ρ` with `<R, ρ> = 1`, the graph `Γ_ρ(-R)` has
//! as vertices the other rays `τ` with `<R, τ> > 0`, joined when they span a
//! cone. A weight `R` occurs in `H^1` exactly when some ray `ρ` with
//! `<R, ρ> = -1` has a graph `Γ_ρ(R)` (built from `-R`) with at least two
//! components. On a complete surface fan this reads: `<ρ_i, R> = -1` and both
//! cyclic neighbours pair strictly negatively with `R`.
//!
//! # Dimensions and the Euler cross-check
//!
//! For a surface, each certifying ray contributes one dimension to the
//! weight space it certifies, so `dim H^1(R)` is the number of certifying
//! rays. [`euler_check`] validates this against an independent count:
//!
//! * `h^0(Θ_X) = 2 + |R(N, Σ)|` (the torus plus one vector field per
//!   Demazure root),
//! * `h^2(Θ_X) = 0` for smooth complete toric surfaces,
//! * Hirzebruch–Riemann–Roch for the tangent bundle of a surface gives
//!   `χ(Θ_X) = (7 c_1^2 - 5 c_2) / 6`; for a toric surface with `l` rays,
//!   `c_2 = l` (fixed points) and `c_1^2 = K^2 = 12 - l` (Noether with
//!   `χ(O_X) = 1`), hence `χ(Θ_X) = 14 - 2l`.
//!
//! Therefore `h^1(Θ_X) = h^0 - χ = 2 + |R(N, Σ)| + 2l - 14`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Fan2D, RayAdjacency};
use crate::lattice::{integer_interval, pair, BasisChange, DualVector, UnimodularMatrix};
use crate::roots::RootSystem;

/// `Γ_ρ(-R)` with `<R, ρ> = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaGraph {
    pub base_ray: usize,
    pub weight: DualVector,
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub components: usize,
}

pub fn gamma_graph<F: RayAdjacency>(fan: &F, rho: usize, r: &DualVector) -> Result<GammaGraph> {
    let rays = fan.rays();
    let base = rays.get(rho).ok_or(Error::BadIndex {
        index: rho,
        len: rays.len(),
    })?;
    if r.rank() != fan.rank() {
        return Err(Error::RankMismatch {
            expected: fan.rank(),
            found: r.rank(),
        });
    }
    let norm = pair(r, base);
    if !norm.is_one() {
        return Err(Error::BadNormalization(norm.to_string()));
    }
    let vertices: Vec<usize> = (0..rays.len())
        .filter(|&t| t != rho && pair(r, &rays[t]).is_positive())
        .collect();
    let mut edges = Vec::new();
    for (a, &u) in vertices.iter().enumerate() {
        for &v in &vertices[a + 1..] {
            if fan.spans_cone(u, v) {
                edges.push((u, v));
            }
        }
    }
    let components = count_components(&vertices, &edges);
    Ok(GammaGraph {
        base_ray: rho,
        weight: r.clone(),
        vertices,
        edges,
        components,
    })
}

fn count_components(vertices: &[usize], edges: &[(usize, usize)]) -> usize {
    let pos = |v: usize| {
        vertices
            .iter()
            .position(|&x| x == v)
            .expect("edge endpoint is a vertex")
    };
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = vertices.len();
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, pos(u)), find(&mut parent, pos(v)));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

/// `Ω(-R)`: rays `ρ` with `<ρ, R> = 1` and a nonempty `Γ_ρ(-R)`.
pub fn omega_set<F: RayAdjacency>(fan: &F, r: &DualVector) -> Vec<usize> {
    if r.rank() != fan.rank() {
        return Vec::new();
    }
    (0..fan.rays().len())
        .filter(|&rho| {
            pair(r, &fan.rays()[rho]).is_one()
                && gamma_graph(fan, rho, r).is_ok_and(|g| !g.vertices.is_empty())
        })
        .collect()
}

/// Rays `ρ` with `<ρ, R> = -1` whose graph `Γ_ρ(R)` has at least two components.
pub fn certifying_rays<F: RayAdjacency>(fan: &F, r: &DualVector) -> Vec<usize> {
    if r.rank() != fan.rank() {
        return Vec::new();
    }
    let neg = -r;
    (0..fan.rays().len())
        .filter(|&rho| {
            pair(&neg, &fan.rays()[rho]).is_one()
                && gamma_graph(fan, rho, &neg).is_ok_and(|g| g.components >= 2)
        })
        .collect()
}

/// Membership of `R` in the deformation weight set, decided through `Γ`-graphs.
pub fn is_def_weight_general<F: RayAdjacency>(fan: &F, r: &DualVector) -> bool {
    !certifying_rays(fan, r).is_empty()
}

/// The weights `R_1..R_s` of `H^1(X, Θ_X)` with their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystem {
    weights: Vec<DualVector>,
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fan_rays: Option<usize>,
}

impl WeightSystem {
    /// Weights must be nonzero, pairwise distinct and of equal rank; dims `>= 1`.
    pub fn new(weights: Vec<DualVector>, dims: Vec<usize>) -> Result<Self> {
        if weights.len() != dims.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights but {} dimensions",
                weights.len(),
                dims.len()
            )));
        }
        if let Some(first) = weights.first() {
            if let Some(bad) = weights.iter().find(|w| w.rank() != first.rank()) {
                return Err(Error::RankMismatch {
                    expected: first.rank(),
                    found: bad.rank(),
                });
            }
        }
        if weights.iter().any(DualVector::is_zero) {
            return Err(Error::InvalidWeights("zero weight".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidWeights("zero dimension".into()));
        }
        for (i, w) in weights.iter().enumerate() {
            if weights[..i].contains(w) {
                return Err(Error::InvalidWeights(format!("duplicate weight {w}")));
            }
        }
        Ok(Self {
            weights,
            dims,
            fan_rays: None,
        })
    }

    /// One-dimensional weight spaces.
    pub fn from_weights(weights: Vec<DualVector>) -> Result<Self> {
        let dims = vec![1; weights.len()];
        Self::new(weights, dims)
    }

    pub fn weights(&self) -> &[DualVector] {
        &self.weights
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn fan_rays(&self) -> Option<usize> {
        self.fan_rays
    }

    pub fn index_of(&self, w: &DualVector) -> Option<usize> {
        self.weights.iter().position(|x| x == w)
    }

    pub fn dim_of(&self, w: &DualVector) -> Option<usize> {
        self.index_of(w).map(|i| self.dims[i])
    }

    pub fn labels(&self) -> Vec<String> {
        self.weights.iter().map(DualVector::label).collect()
    }

    /// The weights selected by `indices`, in order.
    pub fn family(&self, indices: &[usize]) -> Result<Vec<DualVector>> {
        indices
            .iter()
            .map(|&i| {
                self.weights.get(i).cloned().ok_or(Error::BadIndex {
                    index: i,
                    len: self.len(),
                })
            })
            .collect()
    }

    /// Sub-system on `indices` (dims carried over).
    pub fn subsystem(&self, indices: &[usize]) -> Result<Self> {
        let weights = self.family(indices)?;
        let dims = indices.iter().map(|&i| self.dims[i]).collect();
        Ok(Self {
            weights,
            dims,
            fan_rays: self.fan_rays,
        })
    }

    /// Weights as a map to dimensions, order-free.
    pub fn as_map(&self) -> BTreeMap<DualVector, usize> {
        self.weights
            .iter()
            .cloned()
            .zip(self.dims.iter().copied())
            .collect()
    }
}

impl BasisChange for WeightSystem {
    /// Transforms every weight by the inverse transpose and re-sorts.
    fn change_basis(&self, m: &UnimodularMatrix) -> Result<Self> {
        let mut pairs: Vec<(DualVector, usize)> = self
            .weights
            .iter()
            .zip(&self.dims)
            .map(|(w, &d)| Ok((m.apply_dual(w)?, d)))
            .collect::<Result<_>>()?;
        pairs.sort();
        let (weights, dims) = pairs.into_iter().unzip();
        Ok(Self {
            weights,
            dims,
            fan_rays: self.fan_rays,
        })
    }
}

/// `Σ d_i`, the dimension of `H^1(X, Θ_X)`.
pub fn h1_total(ws: &WeightSystem) -> usize {
    ws.dims.iter().sum()
}

/// Weights of `H^1(X, Θ_X)` for a smooth complete surface fan, each with its
/// number of certifying rays as dimension. Sorted lexicographically.
pub fn def_weights_surface(fan: &Fan2D) -> Result<WeightSystem> {
    fan.require_smooth()?;
    let mut found: BTreeMap<DualVector, usize> = BTreeMap::new();
    let l = fan.len();
    for i in 0..l {
        let (rho, next) = (fan.ray(i), fan.ray(i + 1));
        let prev = fan.ray(i + l - 1);
        // det(ρ, next) = 1; dual basis rows of [ρ next]^{-1}.
        let (x1, y1) = (&rho.coords()[0], &rho.coords()[1]);
        let (x2, y2) = (&next.coords()[0], &next.coords()[1]);
        let d1 = DualVector::new(vec![y2.clone(), -x2]);
        let d2 = DualVector::new(vec![-y1, x1.clone()]);
        // R = -d1 + t d2:  <R, ρ> = -1, <R, next> = t.
        let constraints = [
            (BigInt::one(), BigInt::one()),
            (BigInt::one() - pair(&d1, prev), pair(&d2, prev)),
        ];
        let Some((lo, hi)) = integer_interval(&constraints) else {
            continue;
        };
        let mut t = lo;
        while t <= hi {
            let r = &d2.scale(&t) - &d1;
            *found.entry(r).or_insert(0) += 1;
            t += 1;
        }
    }
    let (weights, dims): (Vec<_>, Vec<_>) = found.into_iter().unzip();
    let mut ws = WeightSystem::new(weights, dims)?;
    ws.fan_rays = Some(l);
    Ok(ws)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub expected: i64,
    pub actual: i64,
    pub ok: bool,
}

/// Compares `Σ d_i` with `2 + |R(N, Σ)| + 2l - 14` (see module docs).
pub fn euler_check(fan: &Fan2D, ws: &WeightSystem, roots: &RootSystem) -> Result<EulerCheck> {
    fan.require_smooth()?;
    let l = fan.len() as i64;
    let expected = 2 + roots.len() as i64 + 2 * l - 14;
    let actual = h1_total(ws).to_i64().expect("dimension fits in i64");
    Ok(EulerCheck {
        expected,
        actual,
        ok: expected == actual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;
    use crate::roots::root_system;

    fn dv(c: &[i64]) -> DualVector {
        DualVector::from_i64s(c)
    }

    fn p2() -> Fan2D {
        Fan2D::from_i64s(&[[1, 0], [0, 1], [-1, -1]]).unwrap()
    }

    fn p1p1() -> Fan2D {
        Fan2D::from_i64s(&[[1, 0], [0, 1], [-1, 0], [0, -1]]).unwrap()
    }

    fn hirzebruch(a: i64) -> Fan2D {
        Fan2D::from_i64s(&[[1, 0], [0, 1], [0, -1], [-1, -a]]).unwrap()
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
    fn gamma_graph_examples() {
        let p2 = p2();
        let e1 = p2.index_of(&LatticeVector::from_i64s(&[1, 0])).unwrap();
        let g = gamma_graph(&p2, e1, &dv(&[1, 0])).unwrap();
        assert!(g.vertices.is_empty());
        assert_eq!(g.components, 0);

        let f4 = octagon();
        let m1 = f4.index_of(&LatticeVector::from_i64s(&[-1, 0])).unwrap();
        let g = gamma_graph(&f4, m1, &dv(&[-1, 0])).unwrap();
        let verts: Vec<_> = g.vertices.iter().map(|&v| f4.rays()[v].clone()).collect();
        assert_eq!(
            verts,
            vec![
                LatticeVector::from_i64s(&[-1, 1]),
                LatticeVector::from_i64s(&[-1, -1])
            ]
        );
        assert!(g.edges.is_empty());
        assert_eq!(g.components, 2);

        let p = p1p1();
        let g = gamma_graph(&p, 0, &dv(&[1, 1])).unwrap();
        assert_eq!(g.vertices, vec![1]);
        assert_eq!(g.components, 1);

        assert!(matches!(
            gamma_graph(&p, 0, &dv(&[2, 0])),
            Err(Error::BadNormalization(_))
        ));
    }

    #[test]
    fn omega_examples() {
        assert!(omega_set(&p2(), &dv(&[1, 0])).is_empty());
        let f4 = octagon();
        // Every ray on the line <ρ, R> = 1 sees at least one other such ray.
        let idx = |c: [i64; 2]| f4.index_of(&LatticeVector::from_i64s(&c)).unwrap();
        assert_eq!(
            omega_set(&f4, &dv(&[-1, 0])),
            vec![idx([-1, 1]), idx([-1, 0]), idx([-1, -1])]
        );
        // Only -e1 has a disconnected graph.
        assert_eq!(certifying_rays(&f4, &dv(&[1, 0])), vec![idx([-1, 0])]);
        assert!(omega_set(&f4, &dv(&[0, 0])).is_empty());
    }

    #[test]
    fn general_membership() {
        assert!(is_def_weight_general(&octagon(), &dv(&[-1, 0])));
        for x in -4..=4 {
            for y in -4..=4 {
                let r = dv(&[x, y]);
                assert!(!is_def_weight_general(&p1p1(), &r), "{r}");
                assert!(!is_def_weight_general(&p2(), &r), "{r}");
            }
        }
    }

    #[test]
    fn hirzebruch_weights() {
        for a in 1..=6i64 {
            let ws = def_weights_surface(&hirzebruch(a)).unwrap();
            let expected: Vec<_> = ((1 - a)..=-1).map(|x| dv(&[x, 1])).collect();
            assert_eq!(ws.weights(), expected.as_slice(), "a = {a}");
            assert!(ws.dims().iter().all(|&d| d == 1));
            assert_eq!(h1_total(&ws), (a - 1) as usize);
        }
    }

    #[test]
    fn octagon_weights() {
        let ws = def_weights_surface(&octagon()).unwrap();
        assert_eq!(
            ws.weights(),
            &[dv(&[-1, 0]), dv(&[0, -1]), dv(&[0, 1]), dv(&[1, 0])]
        );
        assert_eq!(ws.dims(), &[1, 1, 1, 1]);
        assert_eq!(h1_total(&ws), 4);
    }

    #[test]
    fn singular_fan_rejected() {
        let f = Fan2D::from_i64s(&[[1, 0], [1, 3], [-1, 0], [-1, -3]]).unwrap();
        assert!(matches!(def_weights_surface(&f), Err(Error::NotSmooth(_))));
    }

    #[test]
    fn euler_examples() {
        for (fan, expected) in [(octagon(), 4), (p2(), 0), (hirzebruch(3), 2)] {
            let ws = def_weights_surface(&fan).unwrap();
            let roots = root_system(&fan).unwrap();
            let check = euler_check(&fan, &ws, &roots).unwrap();
            assert!(check.ok, "{check:?}");
            assert_eq!(check.expected, expected);
        }
    }

    #[test]
    fn weight_system_validation() {
        assert!(WeightSystem::from_weights(vec![dv(&[0, 0])]).is_err());
        assert!(WeightSystem::from_weights(vec![dv(&[1, 0]), dv(&[1, 0])]).is_err());
        assert!(WeightSystem::new(vec![dv(&[1, 0])], vec![0]).is_err());
        assert!(WeightSystem::from_weights(vec![dv(&[1, 0]), dv(&[1, 0, 0])]).is_err());
    }
}
