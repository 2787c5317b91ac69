//! Orchestration: rank analysis, both tests, and the equivalence check.

use std::fmt;

use serde::Serialize;

use super::equivalence::{equivalence_for, Equivalence};
use super::prestress::{prestress_for, PrestressFragment, PrestressStatus};
use super::transverse::{transverse_for, TransverseFragment, TransverseStatus};
use super::{Analysis, Settings};
use crate::error::Result;
use crate::framework::{Dof, DofClass, DofProfile, Framework};
use crate::matrixlab::pinning::PinSet;

/// Outcomes in order of precedence, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InfinitesimallyRigid,
    PrestressStable,
    TransverseRigid,
    TransverseInapplicable,
    Inconclusive,
    NotApplicableHypostatic,
}

impl Verdict {
    pub const ALL: [Verdict; 6] = [
        Verdict::InfinitesimallyRigid,
        Verdict::PrestressStable,
        Verdict::TransverseRigid,
        Verdict::TransverseInapplicable,
        Verdict::Inconclusive,
        Verdict::NotApplicableHypostatic,
    ];

    pub fn implies_rigidity(&self) -> bool {
        matches!(
            self,
            Verdict::InfinitesimallyRigid | Verdict::PrestressStable | Verdict::TransverseRigid
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::InfinitesimallyRigid => "infinitesimally_rigid",
            Verdict::PrestressStable => "prestress_stable",
            Verdict::TransverseRigid => "transverse_rigid",
            Verdict::TransverseInapplicable => "transverse_inapplicable",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicableHypostatic => "not_applicable_hypostatic",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub name: Option<String>,
    pub dimension: usize,
    pub vertices: usize,
    pub dof: DofProfile,
    pub pins: Vec<Dof>,
    pub rank: usize,
    pub flexes: usize,
    pub stresses: usize,
    pub singular_values: Vec<f64>,
    pub rank_tolerance: f64,
    /// A singular value sits within a factor of 10 of the rank tolerance.
    pub marginal: bool,
    /// The primary verdict: the first of `verdicts`.
    pub verdict: Verdict,
    /// Every verdict that applies, by precedence.
    pub verdicts: Vec<Verdict>,
    pub prestress: PrestressFragment,
    pub transverse: TransverseFragment,
    pub equivalence: Option<Equivalence>,
    /// Whether both tests reached the same conclusion, when both ran.
    pub agreement: Option<bool>,
    pub settings: Settings,
    pub notes: Vec<String>,
}

impl CertificateReport {
    pub fn certified_rigid(&self) -> bool {
        self.verdict.implies_rigidity()
    }
}

pub fn full_certification(f: &Framework, settings: Settings) -> Result<CertificateReport> {
    report_for(&Analysis::new(f, settings)?, None)
}

pub fn full_certification_with_pins(
    f: &Framework,
    pin: PinSet,
    settings: Settings,
    name: Option<String>,
) -> Result<CertificateReport> {
    report_for(&Analysis::with_pins(f, pin, settings)?, name)
}

fn report_for(a: &Analysis, name: Option<String>) -> Result<CertificateReport> {
    let prestress = prestress_for(a)?;
    let transverse = transverse_for(a)?;
    let mut notes = vec![
        "generic rigidity of the graph is assumed, not verified; only edge counts are checked"
            .to_string(),
    ];
    if a.kernel.marginal {
        notes.push(
            "numerically marginal: a singular value lies within a factor of 10 of the rank tolerance".into(),
        );
    }

    let mut verdicts = Vec::new();
    if let DofClass::Hypostatic(_) = a.dof.class {
        verdicts.push(Verdict::NotApplicableHypostatic);
    } else if a.flex_count() == 0 {
        verdicts.push(Verdict::InfinitesimallyRigid);
    } else {
        if prestress.certified() {
            verdicts.push(Verdict::PrestressStable);
        }
        if transverse.certified() {
            verdicts.push(Verdict::TransverseRigid);
        }
        if transverse.status == TransverseStatus::Inapplicable {
            verdicts.push(Verdict::TransverseInapplicable);
        }
        if !prestress.certified() && !transverse.certified() {
            verdicts.push(Verdict::Inconclusive);
        }
    }
    verdicts.sort();

    let ran = |p: PrestressStatus, t: TransverseStatus| {
        matches!(
            p,
            PrestressStatus::Certified | PrestressStatus::NotCertified
        ) && matches!(
            t,
            TransverseStatus::Certified | TransverseStatus::NotCertified
        )
    };
    let agreement = ran(prestress.status, transverse.status)
        .then(|| prestress.certified() == transverse.certified());
    if agreement == Some(false) {
        notes.push("WARNING: prestress and transverse tests disagree".into());
    }
    debug_assert!(
        agreement != Some(false) || a.kernel.marginal,
        "prestress and transverse tests disagree on a non-marginal framework"
    );

    let equivalence = if a.dof.class == DofClass::Isostatic && a.flex_count() == 1 {
        let eq = equivalence_for(a)?;
        if !eq.passes(a.settings.equivalence_threshold) {
            notes.push(format!(
                "WARNING: equivalence residual {:.3e} exceeds {:.1e}",
                eq.residual, a.settings.equivalence_threshold
            ));
        }
        Some(eq)
    } else {
        None
    };

    Ok(CertificateReport {
        name,
        dimension: a.framework.dimension(),
        vertices: a.framework.vertex_count(),
        dof: a.dof,
        pins: a.pin.dofs(),
        rank: a.kernel.rank,
        flexes: a.flex_count(),
        stresses: a.stress_count(),
        singular_values: a.kernel.singular_values.clone(),
        rank_tolerance: a.kernel.tol,
        marginal: a.kernel.marginal,
        verdict: verdicts[0],
        verdicts,
        prestress,
        transverse,
        equivalence,
        agreement,
        settings: a.settings,
        notes,
    })
}
