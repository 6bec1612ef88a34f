//! Exact integer linear algebra over arbitrary-precision integers.

pub mod group;
pub mod lattice;
pub mod matrix;
pub mod normal_form;
pub mod saturate;

pub use group::{integer_kernel, FGAbGroup, IsoType, SmithBasis, ZHom};
pub use lattice::{egcd, Lattice};
pub use matrix::{Int, IntMatrix};
pub use normal_form::{hnf, snf};
pub use saturate::{subgroup_saturate, ComponentMap};
