#![allow(clippy::needless_range_loop)]

//! Binary cubic forms, cubic rings over ℤ and the density constants that
//! govern their counts.

pub mod archimedean;
pub mod constants;
pub mod dirichlet;
pub mod enumerate;
pub mod fields;
pub mod forms;
pub mod int;
pub mod local_zeta;
pub mod oracle;
pub mod reduce;
pub mod reducible;
pub mod report;
pub mod ring;
pub mod special;
pub mod verify;

pub use forms::{AugQuadForm, BElem, CubicForm, FormError, GL2Elem, QuadForm};
