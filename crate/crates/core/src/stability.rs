//! GIT stability of `H^1(X, Θ_X)` under the complex torus.
//!
//! A point `x = Σ x_i` is classified by its support `I = {i : x_i ≠ 0}` only.
//! The Hilbert–Mumford criterion reduces everything to sign patterns of the
//! pairings `<R_i, p>` for one-parameter subgroups `p ∈ N`:
//!
//! * `I` is unstable iff some `p` pairs strictly positively with every `R_i`
//!   (equivalently, by Gordan, no nonzero nonnegative relation exists);
//! * `I` is polystable iff no `p` pairs nonnegatively with every `R_i` and
//!   positively with one of them (the positive span of the family is a
//!   linear subspace);
//! * otherwise `I` is strictly semistable.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{
    is_separating, nonnegative_relation, positive_kernel_vector, positive_span_is_subspace,
    strictly_positive_vector, ConeCertificate, PositiveRelation,
};
use crate::deformation::{def_weights_surface, WeightSystem};
use crate::error::{Error, Result};
use crate::fan::Fan2D;
use crate::lattice::{
    complete_to_basis, pair, BasisChange, DualVector, LatticeVector, UnimodularMatrix,
};
use crate::roots::{is_reductive_part_torus, root_system};

/// Largest weight count for which subsets are enumerated.
pub const ENUMERATION_CAP: usize = 20;

/// Sorted, duplicate-free indices into a [`WeightSystem`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// The support of the bitmask `mask` over `s` weights.
    pub fn from_mask(mask: u64, s: usize) -> Self {
        Self((0..s).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Re-indexes through `map` (position `k` becomes `map[k]`).
    pub fn remap(&self, map: &[usize]) -> SupportSet {
        SupportSet::new(self.0.iter().map(|&k| map[k]).collect())
    }

    fn check(&self, ws: &WeightSystem) -> Result<()> {
        match self.0.iter().find(|&&i| i >= ws.len()) {
            Some(&index) => Err(Error::BadIndex {
                index,
                len: ws.len(),
            }),
            None => Ok(()),
        }
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The locus `S_I` of points whose nonzero components are exactly those in `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub support: SupportSet,
    pub weights: Vec<DualVector>,
    pub dims: Vec<usize>,
    /// Complex dimension of `S_I`.
    pub dimension: usize,
    pub description: String,
}

impl Stratum {
    fn origin() -> Self {
        Self {
            support: SupportSet::empty(),
            weights: Vec::new(),
            dims: Vec::new(),
            dimension: 0,
            description: "{0}".into(),
        }
    }

    fn of(ws: &WeightSystem, support: SupportSet) -> Self {
        let weights: Vec<DualVector> = support
            .indices()
            .iter()
            .map(|&i| ws.weights()[i].clone())
            .collect();
        let dims: Vec<usize> = support.indices().iter().map(|&i| ws.dims()[i]).collect();
        let summands: Vec<String> = weights.iter().map(|w| format!("H^1({w})")).collect();
        let description = format!(
            "points of {} with every component nonzero",
            summands.join(" + ")
        );
        Self {
            dimension: dims.iter().sum(),
            support,
            weights,
            dims,
            description,
        }
    }
}

/// A balanced subfamily `J` with its positive relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedWitness {
    pub subfamily: SupportSet,
    pub relation: PositiveRelation,
}

impl BalancedWitness {
    fn verify(&self, ws: &WeightSystem) -> bool {
        ws.family(self.subfamily.indices())
            .is_ok_and(|f| !f.is_empty() && self.relation.verify(&f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Classification {
    /// Both witnesses are absent only for the origin.
    Polystable {
        balanced: Option<BalancedWitness>,
        subspace: Option<ConeCertificate>,
    },
    /// Contains a balanced subfamily, but `p` pairs nonnegatively with every
    /// weight of the support and positively with one.
    StrictlySemistable {
        balanced: BalancedWitness,
        separating: LatticeVector,
    },
    /// `<R_i, p> >= 1` for every weight of the support.
    Unstable { destabilizing: LatticeVector },
}

impl Classification {
    pub fn status(&self) -> &'static str {
        match self {
            Classification::Polystable { .. } => "Polystable",
            Classification::StrictlySemistable { .. } => "StrictlySemistable",
            Classification::Unstable { .. } => "Unstable",
        }
    }

    pub fn is_polystable(&self) -> bool {
        matches!(self, Classification::Polystable { .. })
    }

    /// Re-checks every certificate by pairing arithmetic.
    pub fn verify(&self, ws: &WeightSystem, support: &SupportSet) -> bool {
        let Ok(family) = ws.family(support.indices()) else {
            return false;
        };
        match self {
            Classification::Polystable { balanced, subspace } => match (balanced, subspace) {
                (None, None) => support.is_empty(),
                (Some(b), Some(cert @ ConeCertificate::Subspace { .. })) => {
                    b.subfamily == *support && b.verify(ws) && cert.verify(&family)
                }
                _ => false,
            },
            Classification::StrictlySemistable {
                balanced,
                separating,
            } => {
                balanced.subfamily.is_subset(support)
                    && balanced.verify(ws)
                    && is_separating(&family, separating)
            }
            Classification::Unstable { destabilizing } => {
                !family.is_empty()
                    && family.iter().all(|r| {
                        r.rank() == destabilizing.rank() && pair(r, destabilizing).is_positive()
                    })
            }
        }
    }
}

/// Positive integers `a_i` with `Σ a_i R_i = 0` over `i ∈ I`, if any.
pub fn is_balanced(ws: &WeightSystem, support: &SupportSet) -> Result<Option<PositiveRelation>> {
    if support.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    support.check(ws)?;
    positive_kernel_vector(&ws.family(support.indices())?)
}

fn check_cap(ws: &WeightSystem) -> Result<()> {
    if ws.len() > ENUMERATION_CAP {
        return Err(Error::TooManyWeights {
            count: ws.len(),
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

fn nonempty_subsets(s: usize) -> impl Iterator<Item = SupportSet> {
    (1u64..(1u64 << s)).map(move |m| SupportSet::from_mask(m, s))
}

fn sorted(mut v: Vec<SupportSet>) -> Vec<SupportSet> {
    v.sort();
    v
}

/// `ν(Σ)`: every support whose weight family is balanced.
pub fn nu_sigma(ws: &WeightSystem) -> Result<Vec<SupportSet>> {
    check_cap(ws)?;
    let mut out = Vec::new();
    for support in nonempty_subsets(ws.len()) {
        if is_balanced(ws, &support)?.is_some() {
            out.push(support);
        }
    }
    Ok(sorted(out))
}

/// Inclusion-minimal elements of `ν(Σ)`.
pub fn nu_minimal(ws: &WeightSystem) -> Result<Vec<SupportSet>> {
    let nu = nu_sigma(ws)?;
    Ok(nu
        .iter()
        .filter(|a| !nu.iter().any(|b| b != *a && b.is_subset(a)))
        .cloned()
        .collect())
}

/// Condition (1): some subfamily of `I` is balanced.
fn has_balanced_subfamily(family: &[DualVector]) -> Result<Option<Vec<num_bigint::BigInt>>> {
    nonnegative_relation(family)
}

/// `μ(Σ)`: supports containing a balanced subfamily whose weights satisfy
/// `N = ∪ {R_i < 0} ∪ ∩ {R_i = 0}`.
pub fn mu_sigma(ws: &WeightSystem) -> Result<Vec<SupportSet>> {
    check_cap(ws)?;
    let mut out = Vec::new();
    for support in nonempty_subsets(ws.len()) {
        let family = ws.family(support.indices())?;
        if has_balanced_subfamily(&family)?.is_some() && positive_span_is_subspace(&family)?.0 {
            out.push(support);
        }
    }
    Ok(sorted(out))
}

/// The origin followed by `S_I` for every `I ∈ μ(Σ)`.
pub fn strata(ws: &WeightSystem) -> Result<Vec<Stratum>> {
    let mut out = vec![Stratum::origin()];
    out.extend(mu_sigma(ws)?.into_iter().map(|s| Stratum::of(ws, s)));
    Ok(out)
}

/// Hilbert–Mumford classification of the support `I`, with certificates.
pub fn classify_support(ws: &WeightSystem, support: &SupportSet) -> Result<Classification> {
    support.check(ws)?;
    if support.is_empty() {
        return Ok(Classification::Polystable {
            balanced: None,
            subspace: None,
        });
    }
    let family = ws.family(support.indices())?;
    let Some(relation) = has_balanced_subfamily(&family)? else {
        let destabilizing = strictly_positive_vector(&family)?
            .expect("Gordan: no nonnegative relation yields a strictly positive vector");
        return Ok(Classification::Unstable { destabilizing });
    };
    let (subspace, cert) = positive_span_is_subspace(&family)?;
    if subspace {
        let relation =
            positive_kernel_vector(&family)?.expect("a family spanning a subspace is balanced");
        return Ok(Classification::Polystable {
            balanced: Some(BalancedWitness {
                subfamily: support.clone(),
                relation,
            }),
            subspace: Some(cert),
        });
    }
    let ConeCertificate::Separating { p } = cert else {
        unreachable!("a non-subspace certificate separates");
    };
    let (subfamily, coefficients): (Vec<usize>, Vec<_>) = support
        .indices()
        .iter()
        .zip(relation)
        .filter(|(_, a)| a.is_positive())
        .map(|(&i, a)| (i, a))
        .unzip();
    Ok(Classification::StrictlySemistable {
        balanced: BalancedWitness {
            subfamily: SupportSet::new(subfamily),
            relation: PositiveRelation { coefficients },
        },
        separating: p,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "surviving", rename_all = "snake_case")]
pub enum OnePsLimit {
    NoLimit,
    Limit(SupportSet),
}

/// Limit of `λ_p(t) · x` as `t → 0` for a point with support `I`.
pub fn one_ps_limit(
    ws: &WeightSystem,
    support: &SupportSet,
    p: &LatticeVector,
) -> Result<OnePsLimit> {
    support.check(ws)?;
    let mut surviving = Vec::new();
    for &i in support.indices() {
        let r = &ws.weights()[i];
        if r.rank() != p.rank() {
            return Err(Error::RankMismatch {
                expected: r.rank(),
                found: p.rank(),
            });
        }
        let v = pair(r, p);
        if v.is_negative() {
            return Ok(OnePsLimit::NoLimit);
        }
        if v.is_zero() {
            surviving.push(i);
        }
    }
    Ok(OnePsLimit::Limit(SupportSet::new(surviving)))
}

/// `N = N_f ⊕ N_a` given by a basis of the fixed part and a completion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    fixed: Vec<LatticeVector>,
    complement: Vec<LatticeVector>,
}

impl Splitting {
    /// `fixed` must be a basis of a saturated sublattice of `Z^rank`.
    pub fn new(fixed: Vec<LatticeVector>, rank: usize) -> Result<Self> {
        if let Some(bad) = fixed.iter().find(|f| f.rank() != rank) {
            return Err(Error::InvalidSplitting(format!(
                "{bad} does not have rank {rank}"
            )));
        }
        let complement = complete_to_basis(&fixed, rank).ok_or_else(|| {
            Error::InvalidSplitting("fixed vectors are not part of a lattice basis".into())
        })?;
        Ok(Self { fixed, complement })
    }

    /// The trivial subtorus.
    pub fn trivial(rank: usize) -> Self {
        Self::new(Vec::new(), rank).expect("the empty family extends to a basis")
    }

    pub fn fixed(&self) -> &[LatticeVector] {
        &self.fixed
    }

    pub fn complement(&self) -> &[LatticeVector] {
        &self.complement
    }

    pub fn rank(&self) -> usize {
        self.fixed.len() + self.complement.len()
    }
}

impl BasisChange for Splitting {
    fn change_basis(&self, m: &UnimodularMatrix) -> Result<Self> {
        let fixed = self
            .fixed
            .iter()
            .map(|f| m.apply(f))
            .collect::<Result<Vec<_>>>()?;
        Splitting::new(fixed, m.dim())
    }
}

/// Indices of the weights vanishing on every fixed vector.
pub fn restricted_indices(ws: &WeightSystem, split: &Splitting) -> Result<Vec<usize>> {
    if let Some(w) = ws.weights().first() {
        if w.rank() != split.rank() {
            return Err(Error::InvalidSplitting(format!(
                "splitting has rank {} but weights have rank {}",
                split.rank(),
                w.rank()
            )));
        }
    }
    Ok((0..ws.len())
        .filter(|&i| {
            split
                .fixed()
                .iter()
                .all(|f| pair(&ws.weights()[i], f).is_zero())
        })
        .collect())
}

/// `N*_{T_f}(Σ)`: the sub-system of weights vanishing on `N_f`.
pub fn restrict_weights(ws: &WeightSystem, split: &Splitting) -> Result<WeightSystem> {
    ws.subsystem(&restricted_indices(ws, split)?)
}

/// `μ_{T_f}(Σ)` in indices of `ws`, computed as `μ` of the restricted system.
pub fn mu_relative(ws: &WeightSystem, split: &Splitting) -> Result<Vec<SupportSet>> {
    let keep = restricted_indices(ws, split)?;
    let sub = ws.subsystem(&keep)?;
    Ok(sorted(
        mu_sigma(&sub)?.iter().map(|s| s.remap(&keep)).collect(),
    ))
}

/// `μ_{T_f}(Σ)` as `{I ∈ μ(Σ) : every R_i vanishes on N_f}`.
pub fn mu_relative_by_filter(ws: &WeightSystem, split: &Splitting) -> Result<Vec<SupportSet>> {
    let keep = restricted_indices(ws, split)?;
    Ok(mu_sigma(ws)?
        .into_iter()
        .filter(|s| s.indices().iter().all(|i| keep.contains(i)))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Csck,
    Extremal,
}

/// Outcome of the deformation existence criteria, with the hypotheses they rest on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// `H^C = T^C`, read as: no opposite pair of Demazure roots.
    pub hypothesis_torus_maximal: bool,
    pub hypothesis_check: String,
    pub exists_balanced: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_subtorus: Option<Vec<LatticeVector>>,
    pub strata: Vec<Stratum>,
    pub conclusion: String,
    pub sufficiency: String,
    pub necessity: String,
}

const HYPOTHESIS_CHECK: &str = "root-pair predicate: no root alpha with -alpha also a root";

/// The constant scalar curvature criterion applied to a smooth complete fan.
pub fn csck_verdict(fan: &Fan2D) -> Result<Verdict> {
    fan.require_smooth()?;
    let ws = def_weights_surface(fan)?;
    let torus = is_reductive_part_torus(&root_system(fan)?);
    let exists_balanced = !ws.is_empty() && has_balanced_subfamily(ws.weights())?.is_some();
    let strata = strata(&ws)?;
    let conclusion = match (exists_balanced, torus) {
        (true, true) => "CSCK deformations exist: X admits nontrivial CSCK deformations",
        (true, false) => {
            "balanced family found, but the torus hypothesis fails; no conclusion on CSCK deformations"
        }
        (false, _) => "no balanced family: no nontrivial CSCK deformations from this criterion",
    };
    Ok(Verdict {
        kind: VerdictKind::Csck,
        hypothesis_torus_maximal: torus,
        hypothesis_check: HYPOTHESIS_CHECK.into(),
        exists_balanced,
        fixed_subtorus: None,
        strata,
        conclusion: conclusion.into(),
        sufficiency: "sufficient: small deformations in a polystable stratum carry CSCK metrics \
                      in the Kähler class of the central fibre (requires the torus hypothesis)"
            .into(),
        necessity:
            "necessary only when the Kähler class is integral and the torus hypothesis holds".into(),
    })
}

/// The extremal criterion relative to the subtorus `T_f` in `split`; the
/// caller asserts that the extremal vector field lies in `Lie(T_f)`.
pub fn extremal_verdict(fan: &Fan2D, split: &Splitting) -> Result<Verdict> {
    fan.require_smooth()?;
    let ws = def_weights_surface(fan)?;
    let torus = is_reductive_part_torus(&root_system(fan)?);
    let keep = restricted_indices(&ws, split)?;
    let restricted = ws.subsystem(&keep)?;
    let exists_balanced =
        !restricted.is_empty() && has_balanced_subfamily(restricted.weights())?.is_some();
    let strata: Vec<Stratum> = std::iter::once(Stratum::origin())
        .chain(
            mu_relative(&ws, split)?
                .into_iter()
                .map(|s| Stratum::of(&ws, s)),
        )
        .collect();
    let conclusion = if exists_balanced {
        "admits extremal deformations relative to T_f (projective extremal deformations exist)"
    } else {
        "no projective extremal deformation relative to T_f"
    };
    Ok(Verdict {
        kind: VerdictKind::Extremal,
        hypothesis_torus_maximal: torus,
        hypothesis_check: HYPOTHESIS_CHECK.into(),
        exists_balanced,
        fixed_subtorus: Some(split.fixed().to_vec()),
        strata,
        conclusion: conclusion.into(),
        sufficiency: "sufficient: small T_f-invariant deformations in a relatively polystable \
                      stratum carry extremal metrics (requires the torus hypothesis and the \
                      extremal field in Lie(T_f))"
            .into(),
        necessity: "necessary for polarized deformations when T_f is a maximal torus of \
                    automorphisms of the deformed surface"
            .into(),
    })
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        self.exists_balanced
    }
}
