//! Full analysis of a smooth complete surface fan, as JSON or text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::deformation::{def_weights_surface, euler_check, h1_total, EulerCheck};
use crate::error::{Error, Result};
use crate::fan::Fan2D;
use crate::lattice::{DualVector, LatticeVector};
use crate::roots::{is_reductive_part_torus, root_system};
use crate::stability::{
    csck_verdict, extremal_verdict, mu_relative, mu_sigma, nu_minimal, restricted_indices, strata,
    Splitting, Stratum, SupportSet, Verdict,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSummary {
    pub rays: Vec<LatticeVector>,
    pub smooth: bool,
    pub complete: bool,
    pub singular_cones: Vec<usize>,
}

impl FanSummary {
    pub fn of(fan: &Fan2D) -> Self {
        Self {
            rays: fan.rays().to_vec(),
            smooth: fan.is_smooth(),
            complete: fan.is_complete(),
            singular_cones: fan.singular_cones().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub index: usize,
    pub weight: DualVector,
    pub label: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSection {
    pub weights: Vec<WeightEntry>,
    pub h1_total: usize,
    pub euler: EulerCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSection {
    pub roots: Vec<DualVector>,
    pub semisimple_pairs: Vec<DualVector>,
    pub torus_maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilitySection {
    /// Inclusion-minimal balanced families.
    pub nu_minimal: Vec<SupportSet>,
    pub mu: Vec<SupportSet>,
    pub strata: Vec<Stratum>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeSection {
    pub fixed: Vec<LatticeVector>,
    /// Indices of the weights vanishing on `N_f`.
    pub restricted: Vec<usize>,
    pub mu_relative: Vec<SupportSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub fan: FanSummary,
    pub weights: WeightSection,
    pub roots: RootSection,
    pub stability: StabilitySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative: Option<RelativeSection>,
    pub verdicts: Vec<Verdict>,
}

/// Runs every analysis on a smooth complete fan.
pub fn analyze(fan: &Fan2D, split: Option<&Splitting>) -> Result<AnalysisReport> {
    fan.require_smooth()?;
    let ws = def_weights_surface(fan)?;
    let rs = root_system(fan)?;
    let euler = euler_check(fan, &ws, &rs)?;
    let weights = WeightSection {
        weights: ws
            .weights()
            .iter()
            .zip(ws.dims())
            .enumerate()
            .map(|(index, (w, &dim))| WeightEntry {
                index,
                weight: w.clone(),
                label: w.label(),
                dim,
            })
            .collect(),
        h1_total: h1_total(&ws),
        euler,
    };
    let roots = RootSection {
        roots: rs.roots().to_vec(),
        semisimple_pairs: rs.semisimple_pairs().to_vec(),
        torus_maximal: is_reductive_part_torus(&rs),
    };
    let stability = StabilitySection {
        nu_minimal: nu_minimal(&ws)?,
        mu: mu_sigma(&ws)?,
        strata: strata(&ws)?,
    };
    let mut verdicts = vec![csck_verdict(fan)?];
    let relative = match split {
        Some(split) => {
            verdicts.push(extremal_verdict(fan, split)?);
            Some(RelativeSection {
                fixed: split.fixed().to_vec(),
                restricted: restricted_indices(&ws, split)?,
                mu_relative: mu_relative(&ws, split)?,
            })
        }
        None => None,
    };
    Ok(AnalysisReport {
        fan: FanSummary::of(fan),
        weights,
        roots,
        stability,
        relative,
        verdicts,
    })
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFan(format!("bad report: {e}")))
    }

    fn label_support(&self, s: &SupportSet) -> String {
        let labels: Vec<&str> = s
            .indices()
            .iter()
            .map(|&i| self.weights.weights[i].label.as_str())
            .collect();
        format!("{{{}}}", labels.join(", "))
    }

    /// Human-readable projection of the JSON report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "Fan");
        let _ = writeln!(w, "  rays: {}", join(&self.fan.rays));
        let _ = writeln!(
            w,
            "  smooth: {}  complete: {}",
            self.fan.smooth, self.fan.complete
        );
        let _ = writeln!(w, "Deformation weights");
        if self.weights.weights.is_empty() {
            let _ = writeln!(w, "  none (rigid)");
        }
        for e in &self.weights.weights {
            let _ = writeln!(w, "  [{}] {}  dim {}", e.index, e.label, e.dim);
        }
        let _ = writeln!(w, "  h1 total: {}", self.weights.h1_total);
        let eu = &self.weights.euler;
        let _ = writeln!(
            w,
            "  Euler check: expected {} actual {} ({})",
            eu.expected,
            eu.actual,
            if eu.ok { "ok" } else { "MISMATCH" }
        );
        let _ = writeln!(w, "Demazure roots");
        let _ = writeln!(w, "  roots: {{{}}}", join(&self.roots.roots));
        let _ = writeln!(
            w,
            "  semisimple pairs: {{{}}}",
            join(&self.roots.semisimple_pairs)
        );
        let _ = writeln!(
            w,
            "  reductive part is the torus: {}",
            self.roots.torus_maximal
        );
        let _ = writeln!(w, "Stability");
        let nu: Vec<String> = self
            .stability
            .nu_minimal
            .iter()
            .map(|s| self.label_support(s))
            .collect();
        let _ = writeln!(w, "  minimal balanced families: {}", nu.join(" "));
        let mu: Vec<String> = self
            .stability
            .mu
            .iter()
            .map(|s| self.label_support(s))
            .collect();
        let _ = writeln!(w, "  mu: {}", mu.join(" "));
        let _ = writeln!(w, "  strata:");
        for s in &self.stability.strata {
            let _ = writeln!(w, "    {} (dim {})", s.description, s.dimension);
        }
        if let Some(rel) = &self.relative {
            let _ = writeln!(w, "Relative to N_f = span{{{}}}", join(&rel.fixed));
            let labels: Vec<&str> = rel
                .restricted
                .iter()
                .map(|&i| self.weights.weights[i].label.as_str())
                .collect();
            let _ = writeln!(w, "  restricted weights: {{{}}}", labels.join(", "));
            let mu: Vec<String> = rel
                .mu_relative
                .iter()
                .map(|s| self.label_support(s))
                .collect();
            let _ = writeln!(w, "  mu relative: {}", mu.join(" "));
        }
        let _ = writeln!(w, "Verdicts");
        for v in &self.verdicts {
            let _ = writeln!(w, "  {:?}: {}", v.kind, v.conclusion);
            let _ = writeln!(
                w,
                "    torus hypothesis: {} ({})",
                v.hypothesis_torus_maximal, v.hypothesis_check
            );
            let _ = writeln!(w, "    {}", v.sufficiency);
            let _ = writeln!(w, "    {}", v.necessity);
        }
        out
    }
}
