//! Discrete p-modulus estimation, the flat ring reference value and the
//! ring inequality check.

mod grid;
mod optimizer;
mod ring;

pub use grid::{DensityGrid, GridResolution};
pub use optimizer::{estimate_modulus, ModulusEstimate, ModulusOptions};
pub use ring::{
    check_ring_inequality, extremal_eta, image_family, ring_modulus_reference, RingCheckOptions,
    RingReport,
};
