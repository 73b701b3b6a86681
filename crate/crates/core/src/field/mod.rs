//! Free field with sources: modes, particle creation, pair potentials, local probes.
mod creation;
mod effective;
mod modes;
mod nr;
mod probe;

pub use creation::{creation_probabilities, poisson_table, CreationReport};
pub use effective::{attractive_potential, contact_strength, effective_potential, exchange_kernel, EffectivePotential};
pub use modes::{
    design_source_profile, emission_amplitudes, mode_decomposition, rabi_frequency, sample_on_grid, source_overlap, ModeBasis, SourceProfile,
    SpacetimeField,
};
pub use nr::{nr_hamiltonian_terms, pair_binding, NrHamiltonian, PairBinding, DEFAULT_BUDGET};
pub use probe::{local_energy_probe, ProbeResult};
