//! Fixtures, seeded generators and brute-force oracles shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use torstab_core::{
    hirzebruch, hj_resolve, pairing, quotient_fan, standard_fan, xhat2, DualVector, Fan2D,
    LatticeVector, QuotientSpec, StandardFanSpec, SupportSet, UnimodularMatrix, WeightSystem,
};

pub fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(c)
}

pub fn dv(c: &[i64]) -> DualVector {
    DualVector::from_i64s(c)
}

pub fn fan(rays: &[[i64; 2]]) -> Fan2D {
    Fan2D::from_i64s(rays).unwrap()
}

pub fn ray_set(f: &Fan2D) -> BTreeSet<LatticeVector> {
    f.rays().iter().cloned().collect()
}

pub fn lattice_set(list: &[[i64; 2]]) -> BTreeSet<LatticeVector> {
    list.iter().map(|c| lv(c)).collect()
}

pub fn dual_set(list: &[[i64; 2]]) -> BTreeSet<DualVector> {
    list.iter().map(|c| dv(c)).collect()
}

pub const DIAG_Q3: [[i64; 2]; 10] = [
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
];

pub const OCTAGON: [[i64; 2]; 8] = [
    [1, 0],
    [1, 1],
    [0, 1],
    [-1, 1],
    [-1, 0],
    [-1, -1],
    [0, -1],
    [1, -1],
];

pub const F2_MOD3: [[i64; 2]; 10] = [
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
];

pub fn diag_q3() -> Fan2D {
    fan(&DIAG_Q3)
}

pub fn octagon() -> Fan2D {
    fan(&OCTAGON)
}

pub fn f2_mod3() -> Fan2D {
    fan(&F2_MOD3)
}

pub fn p2() -> Fan2D {
    standard_fan(StandardFanSpec::ProjectivePlane).unwrap()
}

pub fn p1xp1() -> Fan2D {
    standard_fan(StandardFanSpec::P1xP1).unwrap()
}

/// Every smooth fan appearing in the worked examples.
pub fn golden_fans() -> Vec<(&'static str, Fan2D)> {
    let mut out = vec![
        ("P2", p2()),
        ("P1xP1", p1xp1()),
        ("diag_q3", diag_q3()),
        ("octagon", octagon()),
        ("f2_mod3", f2_mod3()),
        ("xhat2", xhat2(2, 3).unwrap()),
        (
            "resolved quotient q=2",
            hj_resolve(&quotient_fan(QuotientSpec::DiagonalP1xP1 { q: 2 }).unwrap()),
        ),
    ];
    for (a, name) in [(1, "F1"), (2, "F2"), (3, "F3"), (4, "F4")] {
        out.push((name, hirzebruch(a)));
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A base surface (`P^2`, `P^1 × P^1` or `F_a`, `1 <= a <= 5`) followed by
/// up to `max_blowups` torus-fixed-point blow-ups at random cones.
pub fn random_smooth_fan(rng: &mut ChaCha8Rng, max_blowups: usize) -> Fan2D {
    let mut f = match rng.gen_range(0..3) {
        0 => p2(),
        1 => p1xp1(),
        _ => hirzebruch(rng.gen_range(1..=5)),
    };
    let k = rng.gen_range(0..=max_blowups);
    for _ in 0..k {
        let i = rng.gen_range(0..f.len());
        f = f.blow_up(i).unwrap();
    }
    f
}

/// Same as [`random_smooth_fan`] but also returns the base fan and its index
/// (`None` for `P^2`, `Some(a)` for `F_a`).
pub fn random_blowup_of_hirzebruch(
    rng: &mut ChaCha8Rng,
    min: usize,
    max: usize,
) -> (u32, Fan2D, Fan2D) {
    let a = rng.gen_range(0..=4u32);
    let base = hirzebruch(a);
    let mut f = base.clone();
    let k = rng.gen_range(min..=max);
    for _ in 0..k {
        let i = rng.gen_range(0..f.len());
        f = f.blow_up(i).unwrap();
    }
    (a, base, f)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A complete fan with at least one singular cone, rays with coordinates in
/// `[-bound, bound]`.
pub fn random_singular_fan(rng: &mut ChaCha8Rng, bound: i64) -> Fan2D {
    loop {
        let n = rng.gen_range(3..=7);
        let mut rays = Vec::new();
        while rays.len() < n {
            let (x, y) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
            if (x, y) != (0, 0) && gcd(x, y) == 1 && !rays.contains(&[x, y]) {
                rays.push([x, y]);
            }
        }
        if let Ok(f) = Fan2D::from_i64s(&rays) {
            if !f.is_smooth() {
                return f;
            }
        }
    }
}

/// Distinct nonzero weights of the given rank, `s` of them, coordinates in `[-c, c]`.
pub fn random_weight_system(rng: &mut ChaCha8Rng, rank: usize, s: usize, c: i64) -> WeightSystem {
    let mut weights: Vec<DualVector> = Vec::new();
    while weights.len() < s {
        let coords: Vec<i64> = (0..rank).map(|_| rng.gen_range(-c..=c)).collect();
        let w = DualVector::from_i64s(&coords);
        if !w.is_zero() && !weights.contains(&w) {
            weights.push(w);
        }
    }
    let dims = (0..s).map(|_| rng.gen_range(1..=2)).collect();
    WeightSystem::new(weights, dims).unwrap()
}

/// Product of random elementary, sign and swap matrices.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> UnimodularMatrix {
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    for _ in 0..rng.gen_range(2..=6) {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while n > 1 && j == i {
                    j = rng.gen_range(0..n);
                }
                if i != j {
                    let k = *[-2i64, -1, 1, 2].choose(rng).unwrap();
                    let src = m[j].clone();
                    for (x, y) in m[i].iter_mut().zip(src) {
                        *x += k * y;
                    }
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                for x in m[i].iter_mut() {
                    *x = -*x;
                }
            }
            _ => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                m.swap(i, j);
            }
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
    UnimodularMatrix::from_i64s(&rows).unwrap()
}

/// All integer vectors with coordinates in `[-b, b]`.
pub fn box_vectors(rank: usize, b: i64) -> Vec<LatticeVector> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-b..=b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|v| LatticeVector::from_i64s(&v))
        .collect()
}

/// Brute-force Hilbert–Mumford status from sign patterns over a box of
/// one-parameter subgroups: `(not_polystable, unstable)`.
pub fn hm_brute_force(
    ws: &WeightSystem,
    support: &SupportSet,
    ps: &[LatticeVector],
) -> (bool, bool) {
    if support.is_empty() {
        return (false, false);
    }
    let mut not_polystable = false;
    let mut unstable = false;
    for p in ps {
        let vals: Vec<BigInt> = support
            .indices()
            .iter()
            .map(|&i| pairing(&ws.weights()[i], p).unwrap())
            .collect();
        let zero = BigInt::from(0);
        if vals.iter().all(|v| v >= &zero) && vals.iter().any(|v| v > &zero) {
            not_polystable = true;
        }
        if vals.iter().all(|v| v > &zero) {
            unstable = true;
        }
        if unstable {
            break;
        }
    }
    (not_polystable, unstable)
}

/// Balanced check by brute force: positive integer coefficients up to `max`.
pub fn balanced_brute_force(family: &[DualVector], max: i64) -> bool {
    if family.is_empty() {
        return false;
    }
    let rank = family[0].rank();
    let mut coeffs = vec![1i64; family.len()];
    loop {
        let mut sum = vec![BigInt::from(0); rank];
        for (r, a) in family.iter().zip(&coeffs) {
            for (s, c) in sum.iter_mut().zip(r.coords()) {
                *s += c * a;
            }
        }
        if sum.iter().all(|s| s == &BigInt::from(0)) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                return false;
            }
            coeffs[k] += 1;
            if coeffs[k] <= max {
                break;
            }
            coeffs[k] = 1;
            k += 1;
        }
    }
}

/// Roots by scanning a box of dual vectors.
pub fn roots_brute_force(f: &Fan2D, b: i64) -> BTreeSet<DualVector> {
    let mut out = BTreeSet::new();
    for x in -b..=b {
        for y in -b..=b {
            let a = dv(&[x, y]);
            let vals: Vec<BigInt> = f.rays().iter().map(|r| pairing(&a, r).unwrap()).collect();
            let ones = vals.iter().filter(|v| **v == BigInt::from(1)).count();
            let pos = vals.iter().filter(|v| **v > BigInt::from(0)).count();
            if ones == 1 && pos == 1 {
                out.insert(a);
            }
        }
    }
    out
}

/// Deformation weights by scanning a box with the cyclic criterion.
pub fn def_weights_brute_force(f: &Fan2D, b: i64) -> BTreeSet<(DualVector, usize)> {
    let l = f.len();
    let mut out = BTreeSet::new();
    for x in -b..=b {
        for y in -b..=b {
            let r = dv(&[x, y]);
            let p = |i: usize| pairing(&r, f.ray(i)).unwrap();
            let count = (0..l)
                .filter(|&i| {
                    p(i) == BigInt::from(-1)
                        && p(i + 1) < BigInt::from(0)
                        && p(i + l - 1) < BigInt::from(0)
                })
                .count();
            if count > 0 {
                out.insert((r, count));
            }
        }
    }
    out
}

/// Rays on the compact boundary of the convex hull of the nonzero lattice
/// points of the cone `(u, v)`, strictly between `u` and `v`.
pub fn hull_string(u: [i64; 2], v: [i64; 2]) -> Vec<[i64; 2]> {
    let det = |a: [i64; 2], b: [i64; 2]| a[0] * b[1] - a[1] * b[0];
    let d = det(u, v);
    assert!(d > 0);
    let (lo_x, hi_x) = (u[0].min(v[0]).min(0), u[0].max(v[0]).max(0));
    let (lo_y, hi_y) = (u[1].min(v[1]).min(0), u[1].max(v[1]).max(0));
    let mut pts = Vec::new();
    for x in lo_x..=hi_x {
        for y in lo_y..=hi_y {
            let p = [x, y];
            let (s, t) = (det(p, v), det(u, p));
            if p != [0, 0] && s >= 0 && t >= 0 && s + t <= d && gcd(x, y) == 1 {
                pts.push(p);
            }
        }
    }
    pts.sort_by(|a, b| 0.cmp(&det(*a, *b)));
    let mut chain: Vec<[i64; 2]> = Vec::new();
    for p in pts {
        while chain.len() >= 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            let turn = det([b[0] - a[0], b[1] - a[1]], [p[0] - b[0], p[1] - b[1]]);
            if turn > 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    assert_eq!(chain.first(), Some(&u));
    assert_eq!(chain.last(), Some(&v));
    chain[1..chain.len() - 1].to_vec()
}

/// Searches blow-down sequences (removing rays with `ρ_{i-1} + ρ_{i+1} = ρ_i`)
/// for one that reaches `P^1 × P^1`; returns its length.
pub fn blow_down_to_p1xp1(f: &Fan2D) -> Option<usize> {
    if is_p1xp1(f) {
        return Some(0);
    }
    (0..f.len())
        .filter_map(|i| f.blow_down(i).ok())
        .find_map(|g| blow_down_to_p1xp1(&g).map(|k| k + 1))
}

/// Four rays, pairwise opposite: `P^1 × P^1` in some basis.
pub fn is_p1xp1(f: &Fan2D) -> bool {
    f.len() == 4 && (0..4).all(|i| f.ray(i) == &-f.ray(i + 2))
}
