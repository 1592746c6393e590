//! Physical systems whose eigenvectors cross over from orthogonal to
//! unitary statistics: the quantum kicked rotor, a quarter Sinai billiard
//! on a square lattice in a magnetic field, and a disordered spin-½ chain
//! with a scalar-chirality term.

pub mod billiard;
pub mod qkr;
pub mod spin_chain;

pub use billiard::{
    billiard_dos_theory, billiard_hamiltonian, dos_histogram, BilliardHamiltonian, BilliardSpec, DosRow,
};
pub use qkr::{qkr_floquet, QkrSpec};
pub use spin_chain::{spin_basis, spin_chain_block, spin_fields, SpinChainSpec};
