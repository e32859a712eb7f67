//! Discretizations, sampled metrics and scalars, node regions, finite
//! differences, scalar curvature and integral norms.

mod curvature;
mod discretization;
mod field;
mod norms;
mod profile;
mod region;
mod stencil;

pub use curvature::{
    conformally_flat_jet, radial_scalar, scalar_curvature, scalar_from_jet, Curvature, CurvatureOptions, MetricJet,
};
pub(crate) use curvature::metric_jet_fd;
pub use discretization::{norm, sphere_area, CartesianGrid, Discretization, InnerBoundary, RadialMesh};
pub use field::{
    sym_det, sym_exceeds, sym_frobenius, sym_index, sym_inverse, sym_min_eigenvalue, MetricData, MetricField,
    ScalarField, Sym3, DEFINITENESS_FLOOR, IDENTITY, SYM_PAIRS,
};
pub use norms::{distributional_pairing, lp_norm, negative_part, riemannian_volume, sobolev_distance, sup_distance};
pub use profile::{ConstantProfile, PowerProfile, ProductProfile, RadialProfile, SharedProfile};
pub use region::Region;
pub use stencil::{radial_derivatives, FdEngine, Jet, StencilOrder};
