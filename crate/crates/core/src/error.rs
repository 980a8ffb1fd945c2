use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("site {site} out of range 1..={num_qubits}")]
    SiteOutOfRange { site: usize, num_qubits: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("closure exceeded the node budget of {max_nodes} (operator spread too large; raise --max-nodes)")]
    ClosureOverflow { max_nodes: usize },

    #[error("generator entry for {from} -> {to} has imaginary residue {residue:e}; the model does not yield a real generator")]
    ImaginaryResidue { from: String, to: String, residue: f64 },

    #[error("{what} needs {num_qubits} qubits, above the dense cap of {cap}")]
    QubitCap { what: &'static str, num_qubits: usize, cap: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unknown closed-form model `{0}`")]
    UnknownModel(String),
}

impl Error {
    /// Errors raised by the numerics rather than by user input.
    pub fn is_computation(&self) -> bool {
        matches!(self, Error::ClosureOverflow { .. } | Error::ImaginaryResidue { .. } | Error::QubitCap { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
