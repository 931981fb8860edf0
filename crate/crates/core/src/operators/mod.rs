//! Finite-difference operators, sphere quadrature and the integral
//! reproduction formulas built on them.

mod cauchy;
mod fd;
mod quadrature;
mod volume;

pub use fd::{
    apply_dirac, apply_dirac_power, apply_dirac_right, apply_laplacian, apply_laplacian_k, apply_mk,
    apply_mk_right, apply_wk, partial, FdConfig, Field,
};
pub use quadrature::{gauss_jacobi, sphere_monomial_integral, QuadratureKind, QuadratureRule, SurfaceNode};
pub use cauchy::{
    cauchy_integral_sphere, check_ball_in_domain, hyper_cauchy_integral, BoundaryIntegral, CauchyKernel,
    HyperKernelSource, SeriesSource, SURFACE_TOLERANCE,
};
pub use volume::{greens_reproduction_volume, VolumeGrid, VolumeKernel, VolumeReproduction};
