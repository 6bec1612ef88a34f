//! Pointed overalgebras, modules, total algebras and their homomorphisms.

mod free;
pub mod lattices;
mod module;
mod pointed;

pub use free::FreePointed;
pub use module::{group_homs, module_homs, subgroups, AModule, ModuleHom};
pub(crate) use pointed::mixed_tuples;
pub use pointed::{
    beta_star, congruence_algebra, overalg_from_split, p_alpha_beta, Fiber, PointedHom, PointedOveralg, TotalAlgebra,
};

#[cfg(test)]
mod tests;
