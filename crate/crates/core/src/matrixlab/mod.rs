//! Rigidity-matrix assembly, trivial motions, pinning and numerical kernels.

pub mod kernel;
pub mod pinning;
pub mod rigidity;

pub use kernel::{kernel_data, kernel_data_with, KernelData, RankRule};
pub use pinning::{
    pin_columns, pinned_rigidity_matrix, rigidity_matrix_of_flex, select_pin_set, zero_pad,
    FullFlex, PinSet, PinnedMatrix,
};
pub use rigidity::{build_rigidity_matrix, trivial_motion_basis, RigidityMatrix};
