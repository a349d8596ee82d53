//! Periodic points, directional zeta functions and expansive subdynamics for
//! algebraic ℤ^d-actions of entropy rank one.

pub mod algebraic;
pub mod error;
pub mod kernel;
pub mod periodic;
pub mod subdynamics;
pub mod system;
pub mod zeta;

pub use error::{Error, Result};
pub use periodic::{count, count_sequence, det_oracle, grid, grid_at, PeriodicCount, PeriodicGrid};
pub use subdynamics::{
    crossing_set, directional_entropy, f_eval, nonexpansive_hyperplanes, nonsmooth_set, omega_samples, portrait,
    Convention, DirectionPortrait, HyperplaneLabel, LabeledHyperplane, PortraitOptions,
};
pub use system::{fixtures, Character, ExactLog, LogSign, System, SystemDescriptor, Tri};
pub use zeta::{
    fit_exponents, inverse_roots, is_expansive_element, verify_generating_identity, zeta_factorization, CValue,
    ZetaFactorization, ZetaOptions,
};
