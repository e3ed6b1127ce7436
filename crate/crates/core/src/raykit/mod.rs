//! Ray transforms of symmetric tensor fields, Fourier machinery on volumes and on TS¹,
//! the operators Ξ_i and Δ_ξ, the weighted Sobolev norms, and the isometry checks.

mod deltaxi;
mod gauss;
mod interp;
mod lines;
mod norms;
mod volume;

pub use deltaxi::{
    delta_xi, delta_xi_at, delta_xi_pow, delta_xi_pow_with, delta_xi_spectral, delta_xi_with, xi_adjoint_check, xi_apply, xi_at, DEFAULT_FD_STEP,
};
pub use gauss::{AnalyticField, GaussPoly};
pub use interp::DEFAULT_INTERP_ORDER;
pub use lines::{
    fourier_ray, inverse_fourier_ray, ray_transform, ray_transform_with, slice_check, slice_check_band, Domain, LineGrid,
    RayConfig, RaySample, SliceReport, DEFAULT_DIRECTIONS, DEFAULT_OFFSETS, DEFAULT_OFFSET_FACTOR, DEFAULT_SLICE_BAND,
};
pub use norms::{
    cross_path_check, cross_path_check_with, cross_path_compare, norm_hrst_ts, norm_hst_ts, norm_solenoidal, norm_solenoidal_with, pairing_hst, reshetnyak_check,
    reshetnyak_check_with, sphere_slice_integral_check, sphere_slice_integral_check_with, CrossPathReport, DeltaPowers,
    IsometryConfig, IsometryContext, ReshetnyakReport, SolenoidalConfig, SphereShells, SLICE_CIRCLE_POINTS,
};
pub use volume::{
    fourier_volume, inverse_fourier_volume, solenoidal_project, tangential_defect, FourierSampler, VolumeField, SAMPLER_ORDER_PLANE, SAMPLER_ORDER_SPACE,
};
