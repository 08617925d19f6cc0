//! Classification of quantum Heisenberg manifolds up to Morita equivalence.

pub mod exactnum;
pub mod lattice;
pub mod cf2;
pub mod classify;
pub mod bimodule;
