//! Information-flux analysis of quantum state transfer in spin chains.
//!
//! The crate builds the commutator closure of an output observable under a
//! Pauli-sum Hamiltonian, evolves the observable's decomposition coefficients
//! on that closure (truncated series or exact exponential), and evaluates the
//! information flux from the input qubit (site 1). A dense brute-force
//! simulator in [`oracle`] provides reference values and the worst-case
//! transfer fidelity.
//!
//! ```
//! use spinflux::{build_closure, build_xx_chain, christandl_couplings, PauliString};
//!
//! let h = build_xx_chain(5, &christandl_couplings(5, 1.0).unwrap()).unwrap();
//! let seed = PauliString::parse("X5", 5).unwrap();
//! let g = build_closure(&h, &seed, 64).unwrap();
//! assert_eq!(g.len(), 5);
//! ```

pub mod chain;
pub mod config;
pub mod error;
pub mod flux;
pub mod graph;
pub mod oracle;
pub mod pauli;
pub mod verify;

pub use chain::{
    apply_phase_correction, apply_phase_correction_string, build_generic, build_heisenberg_chain, build_xx_chain,
    christandl_couplings, ChainSpec, Model, Term,
};
pub use error::{Error, Result};
pub use flux::{
    closed_form_coefficients, evolve_exact, evolve_taylor, flux_series, information_flux, product_expectation,
    ClosedForm, ClosedFormModel, CoefficientVector, Evolution, ExactEvolver, FluxProblem, FluxSeries, Method,
    ProductState, SiteState,
};
pub use graph::{build_closure, export_dot, generator_matrix, ClosureGraph, Edge, GeneratorMatrix, DEFAULT_MAX_NODES};
pub use oracle::{DenseOperator, RegisterState, Spectrum};
pub use pauli::{commutator_with_sum, Letter, PauliString, PauliSum, Phase, PhasedPauli};
