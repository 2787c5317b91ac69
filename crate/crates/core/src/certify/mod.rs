//! The two rigidity certificates and the machinery that ties them together.

pub mod cofactor;
pub mod energy;
pub mod equivalence;
pub mod gradient;
pub mod prestress;
pub mod report;
pub mod transverse;

use serde::Serialize;

pub use cofactor::{cofactor_matrix, CofactorData};
pub use energy::{stress_energy, stress_energy_bilinear, stress_image};
pub use equivalence::{equivalence_report, equivalence_report_with, transverse_value, Equivalence};
pub use gradient::{
    det_gradient_analytic, det_gradient_analytic_with, det_gradient_fd, DetGradient, GradientMethod,
};
pub use prestress::{prestress_test, PrestressFragment, PrestressStatus};
pub use report::{full_certification, full_certification_with_pins, CertificateReport, Verdict};
pub use transverse::{transverse_test, TransverseFragment, TransverseStatus};

use crate::error::Result;
use crate::framework::{dof_profile, DofProfile, Framework};
use crate::matrixlab::kernel::{kernel_data_with, KernelData, RankRule};
use crate::matrixlab::pinning::{pinned_rigidity_matrix, select_pin_set, PinSet, PinnedMatrix};

/// A value counts as nonzero only above `DEFAULT_MARGIN` times its natural scale.
pub const DEFAULT_MARGIN: f64 = 1e-6;
/// Finite-difference step as a fraction of the configuration scale.
pub const DEFAULT_FD_STEP: f64 = 1e-6;
/// Largest normalized residual accepted as proportionality of
/// `d[det R]` and `ωᵀ R(p')`.
pub const DEFAULT_EQUIVALENCE_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub rank_rule: RankRule,
    pub margin: f64,
    pub fd_step: f64,
    pub equivalence_threshold: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            rank_rule: RankRule::Standard,
            margin: DEFAULT_MARGIN,
            fd_step: DEFAULT_FD_STEP,
            equivalence_threshold: DEFAULT_EQUIVALENCE_THRESHOLD,
        }
    }
}

/// Pinning and rank analysis shared by both tests.
#[derive(Clone, Debug)]
pub struct Analysis<'a> {
    pub framework: &'a Framework,
    pub dof: DofProfile,
    pub pin: PinSet,
    pub pinned: PinnedMatrix,
    pub kernel: KernelData,
    pub settings: Settings,
}

impl<'a> Analysis<'a> {
    pub fn new(f: &'a Framework, settings: Settings) -> Result<Self> {
        let pin = select_pin_set(f)?;
        Self::with_pins(f, pin, settings)
    }

    pub fn with_pins(f: &'a Framework, pin: PinSet, settings: Settings) -> Result<Self> {
        f.ensure_valid()?;
        let pinned = pinned_rigidity_matrix(f, &pin)?;
        let kernel = kernel_data_with(&pinned.entries, settings.rank_rule)?;
        Ok(Analysis {
            framework: f,
            dof: dof_profile(f),
            pin,
            pinned,
            kernel,
            settings,
        })
    }

    pub fn flex_count(&self) -> usize {
        self.kernel.right_nullity()
    }

    pub fn stress_count(&self) -> usize {
        self.kernel.left_nullity()
    }
}
