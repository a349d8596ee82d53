//! Number-field arithmetic: polynomials over ℚ, exact matrices, certified roots.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod roots;

pub use field::{Embedding, FieldElement, NumberField, NumberFieldSpec};
pub use matrix::{QMatrix, ZMatrix};
pub use poly::QPoly;
pub use roots::{isolate_roots, RootBox};
