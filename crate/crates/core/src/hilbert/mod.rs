//! Finite-dimensional Hilbert-space primitives: points, dense operators,
//! spectral radii, metric projections and the nonlinear maps `U`, `T`.

mod maps;
mod operator;
mod point;
mod sets;
mod spectral;

pub use maps::{map_apply, MapKind, QuasiNonexpansiveMap};
pub use operator::{adjoint, apply, DenseOperator};
pub use point::{inner, norm, Point};
pub use sets::{project, AffineSubspace, ConvexSet};
pub use spectral::{
    gram_radius, spectral_radius_gram, step_size_bound, SpectralEstimate, DEFAULT_SEED,
    DEFAULT_SPECTRAL_MAX_ITERS, DEFAULT_SPECTRAL_TOL,
};
