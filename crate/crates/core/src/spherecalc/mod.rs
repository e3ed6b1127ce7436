//! Tangential symmetric tensor fields on S^(n−1) in ambient coordinates.
//!
//! Fields are sampled on the degree-0 homogeneous extension, so angular finite differences
//! mapped through the chart give ambient partial derivatives directly.

pub mod apply;
pub mod checks;
pub mod field;
pub mod grid;
pub mod snapshot;

pub use apply::{apply_dim, apply_many, apply_ncpoly, apply_word};
pub use checks::{
    adjoint_check, eigen_check, gram_matrices, gram_matrix, gram_report, harmonic, identity_check_623, random_fields, AdjointReport,
    GramReport, IdentityResiduals,
};
pub use field::{
    divergence, inner_d, metric_i, nabla, nabla2, nabla_full, sphere_inner, sphere_integrate, tangential_project, trace_j,
    FullField, TangentField,
};
pub use grid::{GridKind, SphereGrid, DEFAULT_FD_ORDER};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
