//! Current algebras acting on truncated modules: the induced vacuum module
//! and the bosonic Fock space.

mod affine;
mod fock;
mod module;
mod vacuum;

pub use affine::{AffineAlgebra, AffineBracket, AffineGenerator, LieGen};
pub use fock::{weighted_degree, FockModule, FockMonomial, FockVector};
pub use module::{admissibility_check, annihilation_bound, AdmissibleModule};
pub use vacuum::{
    count_monomials, inductions, monomial_degree, FreeZero, Induction, ModuleVector, Monomial, NonNegative,
    VacuumModule,
};
