//! Combinatorial deformation and stability analysis for toric surfaces.
//!
//! Given a complete fan, the crate computes the torus weights of
//! `H^1(X, Θ_X)`, the Demazure roots of the fan, and the GIT stability of
//! every support under the torus action, with exact certificates.

pub mod cone;
pub mod constructions;
pub mod deformation;
pub mod error;
pub mod fan;
pub mod lattice;
mod lp;
pub mod report;
pub mod roots;
pub mod stability;
pub mod svg;

pub use cone::{
    is_separating, nonnegative_relation, positive_kernel_vector, positive_span_is_subspace,
    strictly_positive_vector, ConeCertificate, PositiveRelation,
};
pub use constructions::{
    hirzebruch, hj_resolve, hj_string, quotient_fan, standard_fan, xhat2, QuotientSpec,
    StandardFanSpec,
};
pub use deformation::{
    certifying_rays, def_weights_surface, euler_check, gamma_graph, h1_total,
    is_def_weight_general, omega_set, EulerCheck, GammaGraph, WeightSystem,
};
pub use error::{Error, Result};
pub use fan::{angle_cmp, validate_surface_fan, Fan2D, FanFile, GeneralFan, RayAdjacency};
pub use lattice::{
    change_of_basis, det2, is_primitive, pairing, primitive, BasisChange, DualVector,
    LatticeVector, UnimodularMatrix,
};
pub use report::{analyze, AnalysisReport};
pub use roots::{
    blup_criterion, is_reductive_part_torus, root_restriction_check, root_system, RootSystem,
};
pub use stability::{
    classify_support, csck_verdict, extremal_verdict, is_balanced, mu_relative,
    mu_relative_by_filter, mu_sigma, nu_minimal, nu_sigma, one_ps_limit, restrict_weights,
    restricted_indices, strata, Classification, OnePsLimit, Splitting, Stratum, SupportSet,
    Verdict, VerdictKind,
};
pub use svg::render_svg;
