//! Exact torus localization of the correlation constants `a_k = c_top(G^{⊕4})`
//! on the moduli space of stable rank-2 sheaves on P² with `c1 = -1`, `c2 = k`.
//!
//! The pipeline is:
//!
//! 1. [`fixed_loci`] enumerates every connected component `Y ≅ (P¹)^N` of the
//!    torus-fixed locus from bifiltration data and builds the decorated
//!    character tables of `U_i = H¹(E(i-2))`.
//! 2. [`equivariant_k`] assembles the `Ext¹(E,E)` class and the normal bundle
//!    from the monad complex as virtual decorated tables.
//! 3. [`chow`] does exact arithmetic in `A*((P¹)^N) = Q[h_1..h_N]/(h_f²)`.
//! 4. [`bott`] picks a generic one-parameter subgroup and sums the residues.
//!
//! [`verify`] runs the structural invariants over all components of a given `k`.

pub mod bott;
pub mod chow;
pub mod equivariant_k;
mod error;
pub mod fixed_loci;
pub mod lattice;
pub mod serial;
pub mod verify;

pub use bott::{
    component_contribution, correlation_constant, evaluate, evaluate_components, select_gamma,
    Contribution, EvalOptions, Evaluation,
};
pub use chow::TruncPoly;
pub use equivariant_k::{ext1_table, hom, normal_table, tensor_fixed, FixedModule, VirtualTable};
pub use error::{Error, Result};
pub use fixed_loci::{
    assemble_components, assemble_components_with, corner_configs, side_triples, CornerConfig,
    DecoratedTable, DivClass, EnumerationOptions, FixedComponent, Orientation, SideTriple,
};
pub use lattice::{CharMultiset, Character, Gamma};
