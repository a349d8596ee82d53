//! Shared inputs for the criterion benches.

use expsub_core::algebraic::poly::QPoly;
use expsub_core::{fixtures, System, SystemDescriptor};

pub fn descriptor(name: &str) -> SystemDescriptor {
    fixtures::load(name).expect("bundled fixture")
}

pub fn system(name: &str) -> System {
    System::new(descriptor(name)).expect("valid fixture")
}

/// Minimal polynomials of increasing degree, ascending coefficients.
pub fn root_isolation_inputs() -> Vec<(&'static str, QPoly)> {
    vec![
        ("x^2-2", QPoly::from_ints(&[-2, 0, 1])),
        ("x^4-10x^2+1", QPoly::from_ints(&[1, 0, -10, 0, 1])),
        ("sextic", QPoly::from_ints(&[1, -2, -5, -3, -5, -2, 1])),
        ("x^8-3", QPoly::from_ints(&[-3, 0, 0, 0, 0, 0, 0, 0, 1])),
    ]
}
